#pragma once

// The result-sandwich classifier and the executionality rubric. A run is an
// execution when it is directly put into effect and is not the primary
// result of putting another sequence into effect, with positive
// executionality in its machine context; it is an interpretation when it is
// that primary result, uniformly over a certified family of subjects.

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "pisie/interp.hpp"
#include "pisie/run.hpp"

namespace pisie {

struct Classification {
  bool is_pisie = false;
  bool is_dpisie = false;
  bool is_interpretation = false;
  bool is_execution = false;
  std::vector<std::string> rationale;
};

// Walks the run's provenance; throws DanglingProvenance on unresolvable
// parents.
Classification classify(const Run& run, const ProvenanceStore& store);

struct ExecutionalityReport {
  double score = 0.0;  // always within [-1, +1]
  std::vector<std::string> positive_indicators;
  std::vector<std::string> negative_indicators;
  bool dominated_by_negative = false;
};

// Rubric: constants are artifact choices, only signs and orderings are
// meaningful. Bases by kind: manual -1.0, simulation -0.8, interpreted and
// compiled-intermediate -0.5, jit/managed -0.2, compiled-object 0.0, direct
// and oracle +0.7. Concurrency dampens positives down to +0.1; frequent
// code-controlled paging caps at -0.3 and moderate paging halves positives;
// dedicated hardware caps at -0.5. Hard negatives dominate all positives.
ExecutionalityReport executionality(const MechanismDescriptor& descriptor);
ExecutionalityReport executionality(const Run& run);

// ---- uniformity certification ------------------------------------------

struct CertSample {
  enum class Kind { Exhaustive, Random } kind = Kind::Exhaustive;
  std::uint64_t count = 0;  // Random only
  std::uint64_t seed = 0;   // Random only

  static CertSample exhaustive() { return {Kind::Exhaustive, 0, 0}; }
  static CertSample random(std::uint64_t count, std::uint64_t seed) {
    return {Kind::Random, count, seed};
  }
};

struct UniformityCertificate {
  bool pass = false;
  std::vector<std::string> witnesses;  // rendered counterexample subjects
  std::uint64_t checked = 0;
};

// For each sampled subject and each initial state in a fixed small set, the
// interpreted run must reproduce the direct run's actions, status, and final
// family. A pass registers the interpreter so later interpreted runs carry
// uniform_certified. Throws EmptySample for random(0).
UniformityCertificate certify_uniformity(const InstructionSequence& interpreter,
                                         const InterfaceSpec& iface,
                                         const EncodingLayout& layout,
                                         const CertSample& sample);

// ---- well-foundedness ----------------------------------------------------

struct WellFoundedReport {
  bool ok = true;
  std::vector<std::string> violations;
};

// Walks provenance to the root. Violations: a cycle; a root that is itself a
// derived mechanism (interpreted or compiled with no recorded producer); a
// root whose machine realization does not score positive. Fragment and
// simulation runs are stepped by the machine itself, so their roots are
// judged on the direct realization with the same flags.
WellFoundedReport check_wellfounded(const Run& run, const ProvenanceStore& store);

// len within the machine's loadable bound, valid over its interface, and the
// machine's direct mechanism scores positive.
bool is_executable(const InstructionSequence& seq, const MachineSpec& machine);

// ---- program families for certification and testing ----------------------

// All validate()-passing sequences over the alphabet with length in
// [min_len, max_len], in lexicographic order. The visitor returns false to
// stop early; enumerate_programs returns false when stopped.
bool enumerate_programs(const std::vector<Instruction>& alphabet,
                        std::size_t min_len, std::size_t max_len,
                        const std::function<bool(const InstructionSequence&)>& visit);

// Every instruction form over the interface: all actions in all three
// forms, forward/backward jumps with operands 0..max_operand, terminators.
std::vector<Instruction> interface_alphabet(const InterfaceSpec& iface,
                                            std::uint32_t max_operand);

// A validate()-passing random sequence of exactly `len` instructions.
InstructionSequence random_program(std::mt19937_64& rng,
                                   const std::vector<Instruction>& alphabet,
                                   std::size_t len);

// The fixed small set of initial states used by certification: all-false,
// all-true, and the two alternating patterns (deduplicated for tiny
// interfaces).
std::vector<ServiceFamily> canonical_initial_states(const InterfaceSpec& iface);

}  // namespace pisie
