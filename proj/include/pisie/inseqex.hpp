#pragma once

// Instruction sequence expressions: generalized composition with repetition
// and bound variables. An expression denotes a plain sequence; expansion can
// explode combinatorially, so sizes are computed arithmetically first and
// the fragment runner executes enormous expansions through a bounded window
// without ever materializing them.
//
// Surface syntax (.isqx): instruction atoms as in .isq, 'E ; E', '(E)^n',
// 'let v = E in E', variable references by name, '%' comments.

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <variant>

#include "pisie/engine.hpp"
#include "pisie/run.hpp"

namespace pisie {

struct Inseqex;
using InseqexPtr = std::shared_ptr<const Inseqex>;

struct Inseqex {
  enum class Kind : std::uint8_t { Prim, Concat, Repeat, Let, Var };
  Kind kind = Kind::Prim;
  Instruction prim;            // Prim
  InseqexPtr left, right;      // Concat
  InseqexPtr body;             // Repeat, Let
  std::uint64_t count = 1;     // Repeat
  std::string var;             // Let, Var
  InseqexPtr bound;            // Let

  static InseqexPtr make_prim(Instruction ins);
  static InseqexPtr make_concat(InseqexPtr l, InseqexPtr r);
  static InseqexPtr make_repeat(InseqexPtr body, std::uint64_t count);
  static InseqexPtr make_let(std::string var, InseqexPtr bound, InseqexPtr body);
  static InseqexPtr make_var(std::string name);
};

// Closed expressions only; throws SyntaxError / UnboundVariable.
InseqexPtr parse_inseqex(std::string_view text);

std::string render_inseqex(const InseqexPtr& e);

struct Expanded {
  InstructionSequence seq;
  std::uint64_t size = 0;
};

struct Explosion {
  std::uint64_t lower_bound = 0;  // the exact expansion size (saturated)
  std::uint64_t bound = 0;
};

using ExpansionOutcome = std::variant<Expanded, Explosion>;

// Exact expansion size without materializing (saturating at uint64 max).
std::uint64_t expansion_size(const InseqexPtr& e);

// Materialize when the exact size fits the bound; jumps inside repeated or
// substituted blocks keep their offsets verbatim.
ExpansionOutcome expand(const InseqexPtr& e, std::uint64_t bound);

// Random access into the virtual expansion, 1-based.
Instruction instruction_at(const InseqexPtr& e, std::uint64_t pos);

struct FragmentStats {
  std::uint64_t fragments = 0;
  std::uint64_t max_materialized = 0;  // peak instructions held at once
};

// Run the virtual expansion through a window of `window` instructions:
// execute the materialized fragment until control leaves it, note the
// boundary, generate the fragment around the new position, repeat. For
// expandable expressions this is target-equivalent to expanding and running
// directly; for explosive ones memory stays bounded by the window.
Run run_fragmented(const InseqexPtr& e, const ServiceFamily& fam, std::uint64_t window,
                   const EngineConfig& cfg = {}, FragmentStats* stats = nullptr);

}  // namespace pisie
