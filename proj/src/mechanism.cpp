#include "pisie/mechanism.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "pisie/errors.hpp"

namespace pisie {

namespace {

// Provenance chain from the run to its root, cycle-safe. Returns the chain
// including the run itself; sets *cycle when a run id repeats.
std::vector<const Run*> provenance_chain(const Run& run, const ProvenanceStore& store,
                                         bool* cycle) {
  std::vector<const Run*> chain{&run};
  std::set<std::string> seen{run.run_id};
  const Run* cur = &run;
  *cycle = false;
  while (cur->provenance) {
    const Run* parent = store.find(cur->provenance->parent_run_id);
    if (!parent) throw DanglingProvenance(cur->provenance->parent_run_id);
    if (!seen.insert(parent->run_id).second) {
      *cycle = true;
      break;
    }
    chain.push_back(parent);
    cur = parent;
  }
  return chain;
}

bool chain_has_compiled_edge(const std::vector<const Run*>& chain) {
  for (const Run* run : chain) {
    if (run->provenance &&
        run->provenance->relation == ProvenanceRelation::CompiledFrom)
      return true;
  }
  return false;
}

std::string score_text(double score) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%+.3f", score);
  return buf;
}

}  // namespace

Classification classify(const Run& run, const ProvenanceStore& store) {
  bool cycle = false;
  std::vector<const Run*> chain = provenance_chain(run, store, &cycle);

  Classification c;
  const MechanismKind kind = run.mechanism.kind;

  c.is_pisie = !run.status.is_fault();
  c.rationale.push_back(c.is_pisie ? "mechanism produced a progression"
                                   : "faulted: nothing was put into effect");

  const bool direct_kind =
      kind == MechanismKind::Direct || kind == MechanismKind::Interpreted;
  const bool compiled = chain_has_compiled_edge(chain);
  c.is_dpisie = c.is_pisie && direct_kind && !compiled;
  c.rationale.push_back(std::string("mechanism kind: ") +
                        std::string(mechanism_kind_name(kind)));
  if (compiled) c.rationale.push_back("derivation contains a compiled_from edge");

  const bool has_primary_parent =
      run.provenance &&
      run.provenance->relation == ProvenanceRelation::PrimaryResultOf;

  c.is_interpretation =
      c.is_dpisie && has_primary_parent && run.mechanism.uniform_certified;
  if (has_primary_parent)
    c.rationale.push_back("primary result of " + run.provenance->parent_run_id);
  if (c.is_dpisie && has_primary_parent && !run.mechanism.uniform_certified)
    c.rationale.push_back("interpreter not certified uniform");

  double score = executionality(run.mechanism).score;
  c.is_execution = c.is_dpisie && !has_primary_parent && score > 0.0;
  c.rationale.push_back("executionality " + score_text(score));
  return c;
}

ExecutionalityReport executionality(const MechanismDescriptor& descriptor) {
  ExecutionalityReport report;
  const MechanismFlags& flags = descriptor.flags;
  double score = 0.0;

  switch (descriptor.kind) {
    case MechanismKind::Manual:
      score = -1.0;
      report.negative_indicators.push_back("manual");
      break;
    case MechanismKind::Simulation:
      score = -0.8;
      report.negative_indicators.push_back("partial-effect-simulation");
      break;
    case MechanismKind::Interpreted:
      score = -0.5;
      report.negative_indicators.push_back("not-in-control:interpreter-above");
      break;
    case MechanismKind::CompiledIntermediate:
      score = -0.5;
      report.negative_indicators.push_back("not-in-control:interpreter-above");
      break;
    case MechanismKind::JitFragments:
      score = -0.2;
      report.negative_indicators.push_back("fragment-oscillation");
      break;
    case MechanismKind::CompiledObject:
      score = 0.0;
      break;
    case MechanismKind::Direct:
    case MechanismKind::Oracle:
      score = 0.7;
      report.positive_indicators.push_back("fetch-decode-execute-cycle");
      break;
  }
  if (flags.managed) {
    score = std::min(score, -0.2);
    report.negative_indicators.push_back("managed");
  }
  if (flags.pipelined && score > 0.0) {
    report.positive_indicators.push_back("pipelined");
  }

  // dampeners: reduce positives without flipping them
  if (flags.concurrent_threads > 1 && score > 0.0) {
    score = std::max(0.1, score - 0.1 * double(flags.concurrent_threads - 1));
    report.negative_indicators.push_back("concurrency-dampened");
  }

  // hard negatives: each produces a cap; any firing dominates all positives
  std::vector<double> caps;
  if (flags.dedicated_hardware) {
    caps.push_back(-0.5);
    report.negative_indicators.push_back("dedicated-hardware");
  }
  if (flags.paging.mode == PagingMode::CodeControlled &&
      flags.paging.mean_swap_interval) {
    const double interval = *flags.paging.mean_swap_interval;
    if (interval < 10.0) {
      caps.push_back(-0.3);
      report.negative_indicators.push_back("code-paging-every-few-steps");
    } else if (interval < 100.0) {
      if (score > 0.0) score *= 0.5;
      report.negative_indicators.push_back("code-paging-moderate");
    }
  }
  for (double cap : caps) score = std::min(score, cap);

  score = std::clamp(score, -1.0, 1.0);
  report.score = score;
  report.dominated_by_negative = score < 0.0 && !report.negative_indicators.empty();
  return report;
}

ExecutionalityReport executionality(const Run& run) {
  return executionality(run.mechanism);
}

// ---- uniformity certification ------------------------------------------

std::vector<ServiceFamily> canonical_initial_states(const InterfaceSpec& iface) {
  std::vector<std::map<std::string, bool>> inits;
  std::map<std::string, bool> all_false, all_true, odd, even;
  std::size_t i = 0;
  for (const auto& [name, svc] : iface.services) {
    (void)svc;
    all_false[name] = false;
    all_true[name] = true;
    odd[name] = (i % 2) == 1;
    even[name] = (i % 2) == 0;
    ++i;
  }
  inits = {all_false, all_true, odd, even};
  std::vector<ServiceFamily> out;
  std::set<std::vector<std::uint8_t>> dedup;
  for (const auto& init : inits) {
    ServiceFamily fam = make_family(iface, init);
    if (dedup.insert(fam.values()).second) out.push_back(std::move(fam));
  }
  return out;
}

std::vector<Instruction> interface_alphabet(const InterfaceSpec& iface,
                                            std::uint32_t max_operand) {
  std::vector<Instruction> out;
  for (const auto& [name, svc] : iface.services) {
    for (Method m : svc.methods) {
      std::string method(method_name(m));
      out.push_back(Instruction::plain(name, method));
      out.push_back(Instruction::pos_test(name, method));
      out.push_back(Instruction::neg_test(name, method));
    }
  }
  for (std::uint32_t k = 0; k <= max_operand; ++k) {
    out.push_back(Instruction::fwd_jump(k));
  }
  for (std::uint32_t k = 0; k <= max_operand; ++k) {
    out.push_back(Instruction::bwd_jump(k));
  }
  out.push_back(Instruction::halt());
  out.push_back(Instruction::halt_true());
  out.push_back(Instruction::halt_false());
  return out;
}

namespace {

bool placeable(const Instruction& ins, std::size_t pos) {
  // the only position-dependent validity rule: no backward jump below 1
  return !(ins.op == Op::BwdJump && ins.offset >= pos);
}

bool enumerate_rec(const std::vector<Instruction>& alphabet, std::size_t min_len,
                   std::size_t max_len, InstructionSequence& prefix,
                   const std::function<bool(const InstructionSequence&)>& visit) {
  if (prefix.size() >= min_len) {
    if (!visit(prefix)) return false;
  }
  if (prefix.size() == max_len) return true;
  const std::size_t pos = prefix.size() + 1;
  for (const Instruction& ins : alphabet) {
    if (!placeable(ins, pos)) continue;
    prefix.instructions.push_back(ins);
    bool keep_going = enumerate_rec(alphabet, min_len, max_len, prefix, visit);
    prefix.instructions.pop_back();
    if (!keep_going) return false;
  }
  return true;
}

}  // namespace

bool enumerate_programs(const std::vector<Instruction>& alphabet, std::size_t min_len,
                        std::size_t max_len,
                        const std::function<bool(const InstructionSequence&)>& visit) {
  InstructionSequence prefix;
  return enumerate_rec(alphabet, min_len, max_len, prefix, visit);
}

InstructionSequence random_program(std::mt19937_64& rng,
                                   const std::vector<Instruction>& alphabet,
                                   std::size_t len) {
  InstructionSequence seq;
  for (std::size_t pos = 1; pos <= len; ++pos) {
    for (;;) {
      const Instruction& pick =
          alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)];
      if (!placeable(pick, pos)) continue;
      seq.instructions.push_back(pick);
      break;
    }
  }
  return seq;
}

namespace {

// The subject's direct semantics versus its interpreted reproduction: all
// actions in order, status, and the final subject family must agree.
bool interpretation_matches(const InstructionSequence& interpreter,
                            const InstructionSequence& subject,
                            const ServiceFamily& fam, const EncodingLayout& layout) {
  // terminating runs over boolean registers revisit a machine state within
  // |states| steps, so this fuel separates termination from divergence
  const std::uint64_t subject_fuel =
      64 + (layout.max_len + 2) * (std::uint64_t(1) << std::min<std::size_t>(
                                       fam.service_count(), 10));
  EngineConfig direct_cfg;
  direct_cfg.fuel = subject_fuel;
  Run direct = run_direct(subject, fam, direct_cfg);

  EngineConfig interp_cfg;
  interp_cfg.fuel = subject_fuel * 600 + 20000;
  InterpretedRun via = run_interpreted_with(interpreter, subject, fam, layout, interp_cfg);

  const Run& mirrored = via.subject_run;
  if (!same_status(direct.status, mirrored.status)) return false;
  if (direct.status.is_divergence()) {
    // fuel cuts the two mechanisms at different depths
    auto a = action_trace(direct);
    auto b = action_trace(mirrored);
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (!(a[i] == b[i])) return false;
    }
    return true;
  }
  if (action_trace(direct) != action_trace(mirrored)) return false;
  return effect_of(direct) == effect_of(mirrored);
}

}  // namespace

UniformityCertificate certify_uniformity(const InstructionSequence& interpreter,
                                         const InterfaceSpec& iface,
                                         const EncodingLayout& layout,
                                         const CertSample& sample) {
  UniformityCertificate cert;
  std::vector<ServiceFamily> states = canonical_initial_states(iface);
  if (states.empty()) states.push_back(make_family(iface));

  auto check_subject = [&](const InstructionSequence& subject) {
    cert.checked += 1;
    for (const ServiceFamily& fam : states) {
      if (!interpretation_matches(interpreter, subject, fam, layout)) {
        cert.witnesses.push_back(render_program(subject));
        return false;
      }
    }
    return true;
  };

  bool complete = true;
  if (sample.kind == CertSample::Kind::Exhaustive) {
    const auto max_operand = static_cast<std::uint32_t>(
        (std::uint64_t(1) << layout.operand_bits) - 1);
    std::vector<Instruction> alphabet = interface_alphabet(iface, max_operand);
    complete = enumerate_programs(alphabet, 0, layout.max_len, check_subject);
  } else {
    if (sample.count == 0) throw EmptySample();
    std::mt19937_64 rng(sample.seed);
    const auto max_operand = static_cast<std::uint32_t>(
        (std::uint64_t(1) << layout.operand_bits) - 1);
    std::vector<Instruction> alphabet = interface_alphabet(iface, max_operand);
    for (std::uint64_t i = 0; i < sample.count; ++i) {
      const std::size_t len =
          std::uniform_int_distribution<std::size_t>(0, layout.max_len)(rng);
      if (!check_subject(random_program(rng, alphabet, len))) {
        complete = false;
        break;
      }
    }
  }

  cert.pass = complete && cert.witnesses.empty();
  if (cert.pass) {
    mark_interpreter_certified(interpreter_cert_key(interpreter, iface, layout));
  }
  return cert;
}

// ---- well-foundedness ----------------------------------------------------

WellFoundedReport check_wellfounded(const Run& run, const ProvenanceStore& store) {
  WellFoundedReport report;
  bool cycle = false;
  std::vector<const Run*> chain = provenance_chain(run, store, &cycle);
  if (cycle) {
    report.violations.push_back("provenance-cycle");
    report.ok = false;
    return report;
  }

  const Run* root = chain.back();
  const MechanismKind kind = root->mechanism.kind;
  const bool machine_stepped =
      kind == MechanismKind::Direct || kind == MechanismKind::Oracle ||
      kind == MechanismKind::JitFragments || kind == MechanismKind::Simulation;
  if (!machine_stepped) {
    report.violations.push_back("root-not-direct");
  }

  // fragment and simulation runs bottom out in the machine stepping the
  // sequence itself; judge their root quality on the direct realization
  MechanismDescriptor realization = root->mechanism;
  if (kind == MechanismKind::JitFragments || kind == MechanismKind::Simulation ||
      kind == MechanismKind::Oracle) {
    realization.kind = MechanismKind::Direct;
  }
  if (executionality(realization).score <= 0.0) {
    report.violations.push_back("root-score-not-positive");
  }

  report.ok = report.violations.empty();
  return report;
}

bool is_executable(const InstructionSequence& seq, const MachineSpec& machine) {
  if (seq.size() > machine.max_loaded_len) return false;
  if (!validate(seq, machine.iface).ok) return false;
  MechanismDescriptor direct;
  direct.kind = MechanismKind::Direct;
  direct.machine = machine;
  direct.flags = machine.flags;
  return executionality(direct).score > 0.0;
}

}  // namespace pisie
