#include "pisie/inseqex.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>
#include <vector>

#include "pisie/errors.hpp"

namespace pisie {

InseqexPtr Inseqex::make_prim(Instruction ins) {
  auto e = std::make_shared<Inseqex>();
  e->kind = Kind::Prim;
  e->prim = std::move(ins);
  return e;
}

InseqexPtr Inseqex::make_concat(InseqexPtr l, InseqexPtr r) {
  auto e = std::make_shared<Inseqex>();
  e->kind = Kind::Concat;
  e->left = std::move(l);
  e->right = std::move(r);
  return e;
}

InseqexPtr Inseqex::make_repeat(InseqexPtr body, std::uint64_t count) {
  auto e = std::make_shared<Inseqex>();
  e->kind = Kind::Repeat;
  e->body = std::move(body);
  e->count = count;
  return e;
}

InseqexPtr Inseqex::make_let(std::string var, InseqexPtr bound, InseqexPtr body) {
  auto e = std::make_shared<Inseqex>();
  e->kind = Kind::Let;
  e->var = std::move(var);
  e->bound = std::move(bound);
  e->body = std::move(body);
  return e;
}

InseqexPtr Inseqex::make_var(std::string name) {
  auto e = std::make_shared<Inseqex>();
  e->kind = Kind::Var;
  e->var = std::move(name);
  return e;
}

// ---- parsing ----------------------------------------------------------

namespace {

struct Token {
  enum class Kind { Atom, LParen, RParen, Caret, Semi, Equals, Let, In, End };
  Kind kind = Kind::End;
  std::string text;
  std::uint64_t number = 0;
  std::size_t pos = 0;  // 1-based offset
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }
  const Token& peek() const { return current_; }
  Token take() {
    Token t = current_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (i_ < text_.size()) {
      char c = text_[i_];
      if (c == '%') {
        while (i_ < text_.size() && text_[i_] != '\n') ++i_;
        continue;
      }
      // newlines separate like ';' so plain .isq files parse as expressions
      if (c == '\n' || c == '\r') {
        current_ = {Token::Kind::Semi, "\n", 0, i_ + 1};
        ++i_;
        return;
      }
      if (c == ' ' || c == '\t') {
        ++i_;
        continue;
      }
      break;
    }
    if (i_ >= text_.size()) {
      current_ = {Token::Kind::End, "", 0, text_.size() + 1};
      return;
    }
    const std::size_t start = i_;
    char c = text_[i_];
    auto single = [&](Token::Kind k) {
      current_ = {k, std::string(1, c), 0, start + 1};
      ++i_;
    };
    switch (c) {
      case '(': single(Token::Kind::LParen); return;
      case ')': single(Token::Kind::RParen); return;
      case '^': single(Token::Kind::Caret); return;
      case ';': single(Token::Kind::Semi); return;
      case '=': single(Token::Kind::Equals); return;
      default: break;
    }
    // an atom runs to the next delimiter
    while (i_ < text_.size()) {
      char t = text_[i_];
      if (t == '(' || t == ')' || t == '^' || t == ';' || t == '=' || t == ' ' ||
          t == '\t' || t == '\n' || t == '\r' || t == '%')
        break;
      ++i_;
    }
    std::string word(text_.substr(start, i_ - start));
    if (word == "let") {
      current_ = {Token::Kind::Let, word, 0, start + 1};
    } else if (word == "in") {
      current_ = {Token::Kind::In, word, 0, start + 1};
    } else {
      current_ = {Token::Kind::Atom, word, 0, start + 1};
    }
  }

  std::string_view text_;
  std::size_t i_ = 0;
  Token current_;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lex_(text) {}

  InseqexPtr parse() {
    InseqexPtr e = parse_expr();
    skip_semis();
    if (lex_.peek().kind != Token::Kind::End) {
      throw SyntaxError(lex_.peek().pos, "trailing input after expression");
    }
    return e;
  }

 private:
  void skip_semis() {
    while (lex_.peek().kind == Token::Kind::Semi) lex_.take();
  }

  InseqexPtr parse_expr() {
    skip_semis();
    if (lex_.peek().kind == Token::Kind::Let) {
      Token let_tok = lex_.take();
      Token name = lex_.take();
      if (name.kind != Token::Kind::Atom || !is_var_name(name.text))
        throw SyntaxError(name.pos, "let needs a variable name");
      if (lex_.take().kind != Token::Kind::Equals)
        throw SyntaxError(let_tok.pos, "let needs '='");
      InseqexPtr bound = parse_expr();
      if (lex_.peek().kind != Token::Kind::In)
        throw SyntaxError(lex_.peek().pos, "let needs 'in'");
      lex_.take();
      scope_.push_back(name.text);
      InseqexPtr body = parse_expr();
      scope_.pop_back();
      return Inseqex::make_let(name.text, std::move(bound), std::move(body));
    }
    return parse_seq();
  }

  InseqexPtr parse_seq() {
    InseqexPtr acc = parse_item();
    for (;;) {
      skip_semis();
      auto k = lex_.peek().kind;
      if (k == Token::Kind::End || k == Token::Kind::RParen || k == Token::Kind::In)
        break;
      acc = Inseqex::make_concat(std::move(acc), parse_item());
    }
    return acc;
  }

  InseqexPtr parse_item() {
    skip_semis();
    Token t = lex_.peek();
    if (t.kind == Token::Kind::LParen) {
      lex_.take();
      InseqexPtr inner = parse_expr();
      if (lex_.peek().kind != Token::Kind::RParen)
        throw SyntaxError(lex_.peek().pos, "expected ')'");
      lex_.take();
      if (lex_.peek().kind == Token::Kind::Caret) {
        lex_.take();
        Token n = lex_.take();
        if (n.kind != Token::Kind::Atom || n.text.empty())
          throw SyntaxError(n.pos, "'^' needs a repeat count");
        std::uint64_t count = 0;
        for (char c : n.text) {
          if (!std::isdigit(static_cast<unsigned char>(c)))
            throw SyntaxError(n.pos, "'^' needs a decimal repeat count");
          std::uint64_t digit = std::uint64_t(c - '0');
          if (count > (std::numeric_limits<std::uint64_t>::max() - digit) / 10)
            throw SyntaxError(n.pos, "repeat count overflow");
          count = count * 10 + digit;
        }
        if (count == 0) throw SyntaxError(n.pos, "repeat count must be positive");
        return Inseqex::make_repeat(std::move(inner), count);
      }
      return inner;
    }
    if (t.kind == Token::Kind::Atom) {
      lex_.take();
      if (is_var_name(t.text)) {
        if (std::find(scope_.begin(), scope_.end(), t.text) == scope_.end())
          throw UnboundVariable(t.text);
        return Inseqex::make_var(t.text);
      }
      InstructionSequence one = parse_program(t.text);
      if (one.size() != 1) throw SyntaxError(t.pos, "expected one instruction");
      return Inseqex::make_prim(one.at(1));
    }
    throw SyntaxError(t.pos, "expected an instruction, variable, or '('");
  }

  static bool is_var_name(const std::string& word) {
    if (word.empty()) return false;
    for (char c : word) {
      if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_')) return false;
    }
    // a bare name with no '.', '+', '#', '!' prefix is a variable reference
    return !std::isdigit(static_cast<unsigned char>(word[0]));
  }

  Lexer lex_;
  std::vector<std::string> scope_;
};

}  // namespace

InseqexPtr parse_inseqex(std::string_view text) { return Parser(text).parse(); }

std::string render_inseqex(const InseqexPtr& e) {
  switch (e->kind) {
    case Inseqex::Kind::Prim: return render_instruction(e->prim);
    case Inseqex::Kind::Concat:
      return render_inseqex(e->left) + " ; " + render_inseqex(e->right);
    case Inseqex::Kind::Repeat:
      return "(" + render_inseqex(e->body) + ")^" + std::to_string(e->count);
    case Inseqex::Kind::Let:
      return "let " + e->var + " = " + render_inseqex(e->bound) + " in " +
             render_inseqex(e->body);
    case Inseqex::Kind::Var: return e->var;
  }
  return "";
}

// ---- sizes and random access ------------------------------------------

namespace {

constexpr std::uint64_t kSat = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return a > kSat - b ? kSat : a + b;
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  return a > kSat / b ? kSat : a * b;
}

// Substitute variables away: the result shares subtrees (a DAG), so sizes
// stay cheap even when the denoted sequence is astronomically long.
InseqexPtr resolve_lets(const InseqexPtr& e,
                        std::map<std::string, InseqexPtr>& env) {
  switch (e->kind) {
    case Inseqex::Kind::Prim: return e;
    case Inseqex::Kind::Var: {
      auto it = env.find(e->var);
      if (it == env.end()) throw UnboundVariable(e->var);
      return it->second;
    }
    case Inseqex::Kind::Concat:
      return Inseqex::make_concat(resolve_lets(e->left, env),
                                  resolve_lets(e->right, env));
    case Inseqex::Kind::Repeat:
      return Inseqex::make_repeat(resolve_lets(e->body, env), e->count);
    case Inseqex::Kind::Let: {
      InseqexPtr bound = resolve_lets(e->bound, env);
      auto saved = env.find(e->var) != env.end()
                       ? std::optional<InseqexPtr>(env[e->var])
                       : std::nullopt;
      env[e->var] = std::move(bound);
      InseqexPtr body = resolve_lets(e->body, env);
      if (saved) {
        env[e->var] = *saved;
      } else {
        env.erase(e->var);
      }
      return body;
    }
  }
  return e;
}

struct ResolvedExpr {
  InseqexPtr root;  // let-free
  mutable std::unordered_map<const Inseqex*, std::uint64_t> sizes;

  std::uint64_t size(const InseqexPtr& e) const {
    auto it = sizes.find(e.get());
    if (it != sizes.end()) return it->second;
    std::uint64_t s = 0;
    switch (e->kind) {
      case Inseqex::Kind::Prim: s = 1; break;
      case Inseqex::Kind::Concat: s = sat_add(size(e->left), size(e->right)); break;
      case Inseqex::Kind::Repeat: s = sat_mul(e->count, size(e->body)); break;
      default: break;  // let-free by construction
    }
    sizes.emplace(e.get(), s);
    return s;
  }

  const Instruction& at(const InseqexPtr& e, std::uint64_t pos) const {
    const Inseqex* node = e.get();
    std::uint64_t i = pos - 1;  // 0-based
    for (;;) {
      switch (node->kind) {
        case Inseqex::Kind::Prim: return node->prim;
        case Inseqex::Kind::Concat: {
          std::uint64_t ls = size(node->left);
          if (i < ls) {
            node = node->left.get();
          } else {
            i -= ls;
            node = node->right.get();
          }
          break;
        }
        case Inseqex::Kind::Repeat: {
          i %= size(node->body);
          node = node->body.get();
          break;
        }
        default: return node->prim;  // unreachable
      }
    }
  }

  const Instruction& at(std::uint64_t pos) const { return at(root, pos); }
};

ResolvedExpr resolve(const InseqexPtr& e) {
  std::map<std::string, InseqexPtr> env;
  return ResolvedExpr{resolve_lets(e, env), {}};
}

void materialize(const ResolvedExpr& r, const InseqexPtr& e,
                 std::vector<Instruction>& out) {
  switch (e->kind) {
    case Inseqex::Kind::Prim: out.push_back(e->prim); break;
    case Inseqex::Kind::Concat:
      materialize(r, e->left, out);
      materialize(r, e->right, out);
      break;
    case Inseqex::Kind::Repeat:
      for (std::uint64_t i = 0; i < e->count; ++i) materialize(r, e->body, out);
      break;
    default: break;
  }
}

}  // namespace

std::uint64_t expansion_size(const InseqexPtr& e) {
  ResolvedExpr r = resolve(e);
  return r.size(r.root);
}

ExpansionOutcome expand(const InseqexPtr& e, std::uint64_t bound) {
  ResolvedExpr r = resolve(e);
  const std::uint64_t size = r.size(r.root);
  if (size > bound) return Explosion{size, bound};
  Expanded out;
  out.size = size;
  out.seq.instructions.reserve(size);
  materialize(r, r.root, out.seq.instructions);
  return out;
}

Instruction instruction_at(const InseqexPtr& e, std::uint64_t pos) {
  ResolvedExpr r = resolve(e);
  return r.at(pos);
}

// ---- fragment oscillation ---------------------------------------------

Run run_fragmented(const InseqexPtr& e, const ServiceFamily& fam, std::uint64_t window,
                   const EngineConfig& cfg, FragmentStats* stats) {
  window = std::max<std::uint64_t>(window, 1);
  ResolvedExpr expr = resolve(e);
  const std::uint64_t total = expr.size(expr.root);

  ServiceFamily start = reset_cotargets(fam);
  std::vector<std::uint8_t> values = start.values();
  std::vector<RunEvent> events;
  TerminationStatus status = TerminationStatus::terminated(std::nullopt);
  FragmentStats local;

  std::uint64_t steps = 0;
  std::uint64_t vp = 1;  // 1-based position into the virtual expansion
  std::uint64_t frag_lo = 1, frag_hi = 0;  // empty until first materialization
  std::vector<Instruction> fragment;

  std::set<std::pair<std::uint64_t, std::vector<std::uint8_t>>> seen;

  for (;;) {
    if (vp > total) {
      status = TerminationStatus::terminated(std::nullopt);
      break;
    }
    if (cfg.cycle_detection && !seen.insert({vp, values}).second) {
      status = TerminationStatus::divergence(DivergenceBy::Cycle);
      break;
    }
    if (steps >= cfg.fuel) {
      status = TerminationStatus::divergence(DivergenceBy::Fuel);
      break;
    }
    if (fragment.empty() || vp < frag_lo || vp > frag_hi) {
      frag_lo = vp;
      frag_hi = std::min(sat_add(vp, window - 1), total);
      fragment.clear();
      for (std::uint64_t p = frag_lo; p <= frag_hi; ++p) {
        fragment.push_back(expr.at(p));
      }
      local.fragments += 1;
      local.max_materialized = std::max<std::uint64_t>(local.max_materialized,
                                                       fragment.size());
      events.push_back(RunEvent::note(events.size() + 1,
                                      "fragment " + std::to_string(frag_lo) + ".." +
                                          std::to_string(frag_hi)));
    }

    const Instruction& ins = fragment[vp - frag_lo];
    ++steps;
    switch (ins.op) {
      case Op::Halt: status = TerminationStatus::terminated(std::nullopt); goto done;
      case Op::HaltTrue: status = TerminationStatus::terminated(true); goto done;
      case Op::HaltFalse: status = TerminationStatus::terminated(false); goto done;
      case Op::FwdJump:
        if (ins.offset == 0) {
          status = TerminationStatus::divergence(DivergenceBy::Cycle);
          goto done;
        }
        vp = sat_add(vp, ins.offset);
        break;
      case Op::BwdJump:
        if (ins.offset == 0) {
          status = TerminationStatus::divergence(DivergenceBy::Cycle);
          goto done;
        }
        if (ins.offset >= vp) {
          status = TerminationStatus::fault("backward jump before start of expansion");
          goto done;
        }
        vp -= ins.offset;
        break;
      case Op::Plain:
      case Op::PosTest:
      case Op::NegTest: {
        auto idx = start.index_of(ins.focus);
        if (!idx) {
          status = TerminationStatus::fault("unknown focus: " + ins.focus);
          goto done;
        }
        auto m = method_from_name(ins.method);
        if (!m || !start.allows(*idx, *m)) {
          status = TerminationStatus::fault("unknown method " + ins.method +
                                            " on service " + ins.focus);
          goto done;
        }
        const ServiceKind kind = start.kind_at(*idx);
        const bool frozen = cfg.simulation_mode && kind == ServiceKind::Target;
        bool reply = false;
        switch (*m) {
          case Method::Get: reply = values[*idx] != 0; break;
          case Method::SetTrue:
            reply = true;
            if (!frozen) values[*idx] = 1;
            break;
          case Method::SetFalse:
            reply = false;
            if (!frozen) values[*idx] = 0;
            break;
        }
        events.push_back(RunEvent::action(events.size() + 1, ins.focus, *m, reply, kind));
        if (ins.op == Op::Plain) {
          vp += 1;
        } else if (ins.op == Op::PosTest) {
          vp += reply ? 1 : 2;
        } else {
          vp += reply ? 2 : 1;
        }
        break;
      }
    }
  }
done:

  if (stats) *stats = local;

  Run run;
  run.run_id = fresh_run_id();
  run.subject.name = render_inseqex(e);
  if (total <= 4096) {
    // modest expansions carry their materialized subject for reporting
    run.subject.instructions.reserve(total);
    materialize(expr, expr.root, run.subject.instructions);
  }
  run.mechanism.kind = MechanismKind::JitFragments;
  run.mechanism.machine.name = "host-engine";
  run.mechanism.machine.iface = fam.iface();
  run.mechanism.machine.max_loaded_len = window;
  run.events = std::move(events);
  run.status = status;
  run.final_family = start.with_values(std::move(values));
  return run;
}

}  // namespace pisie
