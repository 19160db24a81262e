#include "pisie/inseq.hpp"

#include <cctype>
#include <limits>

#include "pisie/errors.hpp"

namespace pisie {

Instruction Instruction::plain(std::string focus, std::string method) {
  return Instruction{Op::Plain, std::move(focus), std::move(method), 0};
}
Instruction Instruction::pos_test(std::string focus, std::string method) {
  return Instruction{Op::PosTest, std::move(focus), std::move(method), 0};
}
Instruction Instruction::neg_test(std::string focus, std::string method) {
  return Instruction{Op::NegTest, std::move(focus), std::move(method), 0};
}
Instruction Instruction::fwd_jump(std::uint32_t k) {
  return Instruction{Op::FwdJump, {}, {}, k};
}
Instruction Instruction::bwd_jump(std::uint32_t k) {
  return Instruction{Op::BwdJump, {}, {}, k};
}
Instruction Instruction::halt() { return Instruction{Op::Halt, {}, {}, 0}; }
Instruction Instruction::halt_true() { return Instruction{Op::HaltTrue, {}, {}, 0}; }
Instruction Instruction::halt_false() { return Instruction{Op::HaltFalse, {}, {}, 0}; }

std::string render_instruction(const Instruction& ins) {
  switch (ins.op) {
    case Op::Plain: return ins.focus + "." + ins.method;
    case Op::PosTest: return "+" + ins.focus + "." + ins.method;
    case Op::NegTest: return "-" + ins.focus + "." + ins.method;
    case Op::FwdJump: return "#" + std::to_string(ins.offset);
    case Op::BwdJump: return "\\#" + std::to_string(ins.offset);
    case Op::Halt: return "!";
    case Op::HaltTrue: return "!t";
    case Op::HaltFalse: return "!f";
  }
  return "!";
}

namespace {

bool is_name_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == ':' || c == '_' ||
         c == '.';
}

std::uint32_t parse_offset(std::string_view digits, std::size_t pos) {
  if (digits.empty()) throw SyntaxError(pos, "jump needs a decimal operand");
  std::uint64_t value = 0;
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw SyntaxError(pos, "jump operand must be decimal");
    value = value * 10 + std::uint64_t(c - '0');
    if (value > std::numeric_limits<std::uint32_t>::max())
      throw SyntaxError(pos, "jump operand overflow");
  }
  return static_cast<std::uint32_t>(value);
}

Instruction parse_token(std::string_view tok, std::size_t pos) {
  if (tok == "!") return Instruction::halt();
  if (tok == "!t") return Instruction::halt_true();
  if (tok == "!f") return Instruction::halt_false();
  if (tok[0] == '!') throw SyntaxError(pos, "terminator must be !, !t or !f");
  if (tok[0] == '#') return Instruction::fwd_jump(parse_offset(tok.substr(1), pos));
  if (tok[0] == '\\') {
    if (tok.size() < 2 || tok[1] != '#')
      throw SyntaxError(pos, "backward jump is written \\#k");
    return Instruction::bwd_jump(parse_offset(tok.substr(2), pos));
  }

  Op op = Op::Plain;
  if (tok[0] == '+') {
    op = Op::PosTest;
    tok.remove_prefix(1);
  } else if (tok[0] == '-') {
    op = Op::NegTest;
    tok.remove_prefix(1);
  }
  if (tok.empty()) throw SyntaxError(pos, "steering prefix without an action");

  std::size_t dot = std::string_view::npos;
  for (std::size_t i = 0; i < tok.size(); ++i) {
    char c = tok[i];
    if (!is_name_char(c)) throw SyntaxError(pos, std::string("bad character '") + c + "'");
    if (c == '.') {
      if (dot != std::string_view::npos)
        throw SyntaxError(pos, "more than one '.' in basic action");
      dot = i;
    }
  }
  if (dot == std::string_view::npos) throw SyntaxError(pos, "missing '.method'");
  if (dot == 0) throw SyntaxError(pos, "empty focus");
  if (dot + 1 == tok.size()) throw SyntaxError(pos, "empty method");
  std::string focus(tok.substr(0, dot));
  std::string method(tok.substr(dot + 1));
  return Instruction{op, std::move(focus), std::move(method), 0};
}

}  // namespace

InstructionSequence parse_program(std::string_view text) {
  InstructionSequence seq;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    char c = text[i];
    if (c == '%') {  // line comment
      while (i < n && text[i] != '\n') ++i;
      continue;
    }
    if (c == ';' || c == '\n' || c == '\r' || c == ' ' || c == '\t') {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < n) {
      char t = text[i];
      if (t == ';' || t == '\n' || t == '\r' || t == ' ' || t == '\t' || t == '%') break;
      ++i;
    }
    seq.instructions.push_back(parse_token(text.substr(start, i - start), start + 1));
  }
  return seq;
}

std::string render_program(const InstructionSequence& seq) {
  std::string out;
  for (std::size_t i = 0; i < seq.instructions.size(); ++i) {
    if (i) out += '\n';
    out += render_instruction(seq.instructions[i]);
  }
  return out;
}

std::string_view issue_kind_name(IssueKind k) {
  switch (k) {
    case IssueKind::JumpBeforeStart: return "jump-before-start";
    case IssueKind::UnknownFocus: return "unknown-focus";
    case IssueKind::UnknownMethod: return "unknown-method";
    case IssueKind::SelfLoopWarning: return "self-loop-warning";
  }
  return "?";
}

bool issue_is_error(IssueKind k) { return k != IssueKind::SelfLoopWarning; }

ValidationReport validate(const InstructionSequence& seq, const InterfaceSpec& iface) {
  ValidationReport report;
  for (std::size_t pos = 1; pos <= seq.size(); ++pos) {
    const Instruction& ins = seq.at(pos);
    if (ins.is_jump()) {
      if (ins.offset == 0) {
        report.issues.push_back({pos, IssueKind::SelfLoopWarning});
      } else if (ins.op == Op::BwdJump && ins.offset >= pos) {
        report.issues.push_back({pos, IssueKind::JumpBeforeStart});
      }
      continue;
    }
    if (!ins.is_action()) continue;
    const ServiceSpec* svc = iface.find(ins.focus);
    if (!svc) {
      report.issues.push_back({pos, IssueKind::UnknownFocus});
      continue;
    }
    auto m = method_from_name(ins.method);
    if (!m || !svc->allows(*m)) {
      report.issues.push_back({pos, IssueKind::UnknownMethod});
    }
  }
  for (const ValidationIssue& issue : report.issues) {
    if (issue_is_error(issue.kind)) {
      report.ok = false;
      break;
    }
  }
  return report;
}

}  // namespace pisie
