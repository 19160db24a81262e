// Acceptance suite: one criterion per section, one PASS/FAIL line each.
//
// Exhaustive criteria enumerate every valid program over a fixed canonical
// alphabet that covers all instruction forms (steering points of both
// polarities, co-target and target writes, forward/backward/self jumps,
// boolean terminators); the alphabets are sized so the whole suite stays in
// the minutes range on a laptop.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

#include "pisie/compile.hpp"
#include "pisie/engine.hpp"
#include "pisie/inseqex.hpp"
#include "pisie/interp.hpp"
#include "pisie/mechanism.hpp"

using namespace pisie;

namespace {

// ---- tiny harness -------------------------------------------------------

struct Outcome {
  bool pass = true;
  std::uint64_t checked = 0;
  std::string detail;     // counts etc., shown on the PASS line
  std::string first_bad;  // first counterexample, shown on FAIL
  std::mutex mu;

  void fail(const std::string& why) {
    std::lock_guard<std::mutex> lock(mu);
    pass = false;
    if (first_bad.empty()) first_bad = why;
  }
};

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const unsigned workers =
      std::max(1u, std::min(std::thread::hardware_concurrency(), 16u));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        body(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

std::vector<InstructionSequence> collect_programs(
    const std::vector<Instruction>& alphabet, std::size_t min_len, std::size_t max_len) {
  std::vector<InstructionSequence> out;
  enumerate_programs(alphabet, min_len, max_len, [&](const InstructionSequence& seq) {
    out.push_back(seq);
    return true;
  });
  return out;
}

InterfaceSpec lab_iface() {
  InterfaceSpec spec;
  spec.services["c1"] = all_methods(ServiceKind::Cotarget);
  spec.services["c2"] = all_methods(ServiceKind::Cotarget);
  spec.services["t1"] = all_methods(ServiceKind::Target);
  return spec;
}

InterfaceSpec ct_iface() {
  InterfaceSpec spec;
  spec.services["c1"] = all_methods(ServiceKind::Cotarget);
  spec.services["t1"] = all_methods(ServiceKind::Target);
  return spec;
}

std::vector<ServiceFamily> all_initial_states(const InterfaceSpec& iface) {
  std::vector<std::string> names;
  for (const auto& [name, svc] : iface.services) {
    (void)svc;
    names.push_back(name);
  }
  std::vector<ServiceFamily> out;
  for (std::uint32_t bits = 0; bits < (1u << names.size()); ++bits) {
    std::map<std::string, bool> init;
    for (std::size_t i = 0; i < names.size(); ++i) init[names[i]] = (bits >> i) & 1;
    out.push_back(make_family(iface, init));
  }
  return out;
}

// shape-covering canonical alphabet for the 2-cotarget/1-target interface
std::vector<Instruction> lab_alphabet() {
  return {
      Instruction::pos_test("c1", "get"), Instruction::neg_test("c2", "get"),
      Instruction::plain("c1", "set:t"),  Instruction::plain("c2", "set:f"),
      Instruction::plain("t1", "set:t"),  Instruction::fwd_jump(0),
      Instruction::fwd_jump(2),           Instruction::bwd_jump(1),
      Instruction::halt_true(),
  };
}

// ---- criteria -----------------------------------------------------------

// run_direct and the thread-extraction oracle agree exactly, events and
// status, over every valid program of length <= 5 and every initial state.
bool criterion_differential(Outcome& out) {
  const InterfaceSpec iface = lab_iface();
  const std::vector<ServiceFamily> states = all_initial_states(iface);
  const std::vector<InstructionSequence> programs =
      collect_programs(lab_alphabet(), 0, 5);

  std::atomic<std::uint64_t> runs{0};
  parallel_for(programs.size(), [&](std::size_t i) {
    const InstructionSequence& seq = programs[i];
    for (const ServiceFamily& fam : states) {
      EngineConfig cfg;
      cfg.fuel = 200;
      Run stepped = run_direct(seq, fam, cfg);
      Run extracted = oracle_run(seq, fam, 200);
      const bool ok = same_events(stepped, extracted) &&
                      same_status(stepped.status, extracted.status) &&
                      stepped.final_family == extracted.final_family;
      runs.fetch_add(2, std::memory_order_relaxed);
      if (!ok) out.fail("mismatch on: " + render_program(seq));
    }
  });
  out.checked = runs;
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%zu programs, %llu runs", programs.size(),
                static_cast<unsigned long long>(runs.load()));
  out.detail = buf;
  return out.pass;
}

// one generated interpreter serves every encodable subject: exhaustively at
// L=2, by a 1000-program seeded sample at L=4.
bool criterion_uniformity(Outcome& out) {
  const InterfaceSpec iface = ct_iface();

  EncodingLayout l2 = default_layout(iface, 2);
  InstructionSequence y2 = generate_interpreter(iface, l2);
  UniformityCertificate exhaustive =
      certify_uniformity(y2, iface, l2, CertSample::exhaustive());
  if (!exhaustive.pass) {
    out.fail("L=2 exhaustive counterexample: " +
             (exhaustive.witnesses.empty() ? "?" : exhaustive.witnesses.front()));
  }

  EncodingLayout l4 = default_layout(iface, 4);
  InstructionSequence y4 = generate_interpreter(iface, l4);
  UniformityCertificate sampled =
      certify_uniformity(y4, iface, l4, CertSample::random(1000, 424242));
  if (!sampled.pass) {
    out.fail("L=4 sampled counterexample: " +
             (sampled.witnesses.empty() ? "?" : sampled.witnesses.front()));
  }

  out.checked = exhaustive.checked + sampled.checked;
  char buf[96];
  std::snprintf(buf, sizeof(buf), "L=2 exhaustive %llu + L=4 sample %llu subjects",
                static_cast<unsigned long long>(exhaustive.checked),
                static_cast<unsigned long long>(sampled.checked));
  out.detail = buf;
  return out.pass;
}

// direct, interpreted, object-compiled, and intermediate-compiled subject
// runs are pairwise target-equivalent on the full length<=5 family.
bool criterion_pipelines(Outcome& out) {
  const InterfaceSpec iface = lab_iface();
  const std::vector<ServiceFamily> states = all_initial_states(iface);
  const std::vector<InstructionSequence> programs =
      collect_programs(lab_alphabet(), 0, 5);
  const EncodingLayout layout = default_layout(iface, 5);
  const InstructionSequence interpreter = generate_interpreter(iface, layout);

  std::atomic<std::uint64_t> checked{0};
  parallel_for(programs.size(), [&](std::size_t i) {
    const InstructionSequence& seq = programs[i];
    for (const ServiceFamily& fam : states) {
      EngineConfig direct_cfg;
      direct_cfg.fuel = 200;
      Run direct = run_direct(seq, fam, direct_cfg);

      // interpreted mechanisms stop early when the subject terminates; a
      // divergent subject just needs enough budget to prove a shared prefix
      EngineConfig interp_cfg;
      interp_cfg.fuel = direct.status.is_divergence() ? 2500 : 25000;

      CompiledObjectRun object = run_compiled_object(seq, fam, direct_cfg);
      InterpretedRun interp =
          run_interpreted_with(interpreter, seq, fam, layout, interp_cfg);
      CompiledIntermediateRun inter =
          run_compiled_intermediate(seq, fam, layout, interp_cfg);

      const Run* subject_runs[] = {&direct, &object.subject_run, &interp.subject_run,
                                   &inter.subject_run};
      for (int a = 0; a < 4; ++a) {
        for (int b = a + 1; b < 4; ++b) {
          if (!target_equivalent(*subject_runs[a], *subject_runs[b])) {
            out.fail("pipelines disagree on: " + render_program(seq));
          }
        }
      }
      checked.fetch_add(4, std::memory_order_relaxed);
    }
  });
  out.checked = checked;
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%zu programs x %zu states x 4 mechanisms",
                programs.size(), states.size());
  out.detail = buf;
  return out.pass;
}

// the mechanism-requirements table, as executable assertions over runs the
// toolkit itself produced.
bool criterion_requirements_table(Outcome& out) {
  const InterfaceSpec iface = ct_iface();
  ServiceFamily fam = make_family(iface, {});
  ProvenanceStore store;
  EngineConfig big;
  big.fuel = 1 << 20;

  EncodingLayout layout = default_layout(iface, 2);
  InstructionSequence y = generate_interpreter(iface, layout);
  certify_uniformity(y, iface, layout, CertSample::exhaustive());

  Run direct = run_direct(parse_program("t1.set:t ; !t"), fam);
  store.add(direct);
  InterpretedRun interp =
      run_interpreted_with(y, parse_program("t1.set:t ; !t"), fam, layout, big);
  store.add(interp.interpreter_run);
  store.add(interp.subject_run);
  CompiledObjectRun object = run_compiled_object(parse_program("#2 ; !t ; #1 ; !f"), fam);
  store.add(object.object_run);
  store.add(object.subject_run);
  CompiledIntermediateRun inter =
      run_compiled_intermediate(parse_program("t1.set:t ; !t"), fam, layout, big);
  store.add(inter.interpreter_run);
  store.add(inter.intermediate_run);
  store.add(inter.subject_run);

  Classification c_direct = classify(direct, store);
  Classification c_interp = classify(interp.subject_run, store);
  Classification c_object = classify(object.subject_run, store);
  Classification c_object_run = classify(object.object_run, store);
  Classification c_inter = classify(inter.subject_run, store);

  auto item = [&](const char* name, bool ok) {
    ++out.checked;
    if (!ok) out.fail(std::string("item ") + name);
  };

  // 01: an execution is directly put into effect
  item("01", c_direct.is_execution && c_direct.is_dpisie);
  // 02: everything directly put into effect is put into effect
  for (const auto& [id, run] : store) {
    (void)id;
    Classification c = classify(run, store);
    item("02", !c.is_dpisie || c.is_pisie);
  }
  // 03: interpretation is directly putting into effect
  item("03", c_interp.is_interpretation && c_interp.is_dpisie);
  // 04: compilation anywhere in the method makes it indirect
  item("04", !c_object.is_dpisie && !c_inter.is_dpisie);
  // 05: compile-then-execute is putting into effect but not directly
  item("05", c_object.is_pisie && !c_object.is_dpisie && c_object_run.is_execution);
  // 06: an interpretation is not an execution
  item("06", c_interp.is_interpretation && !c_interp.is_execution);
  for (const auto& [id, run] : store) {
    (void)id;
    Classification c = classify(run, store);
    item("06", !(c.is_interpretation && c.is_execution));
  }
  // 08: a run of an execution is a run of the subject, but not conversely
  item("08", c_direct.is_execution && c_direct.is_pisie &&
                 c_interp.is_pisie && !c_interp.is_execution);
  // 13: an interpretation may be faster than an execution
  std::string long_program;
  for (int i = 0; i < 50; ++i) long_program += "c1.set:t ; ";
  long_program += "!t";
  Run slow_execution = run_direct(parse_program(long_program), fam);
  InterpretedRun quick = run_interpreted_with(y, parse_program("!t"), fam, layout, big);
  item("13", executionality(slow_execution).score > 0.0 &&
                 executionality(quick.subject_run).score < 0.0 &&
                 slow_execution.events.size() > quick.subject_run.events.size());

  out.detail = "items 01 02 03 04 05 06 08 13";
  return out.pass;
}

// scores live in [-1,+1]; the mechanism ordering is strict; hard negatives
// dominate positives.
bool criterion_executionality(Outcome& out) {
  std::mt19937_64 rng(20240901);
  for (int trial = 0; trial < 10000; ++trial) {
    MechanismDescriptor d;
    d.kind = static_cast<MechanismKind>(rng() % 8);
    d.machine.iface = ct_iface();
    d.flags.pipelined = rng() % 2;
    d.flags.concurrent_threads = 1 + rng() % 64;
    d.flags.managed = rng() % 2;
    d.flags.dedicated_hardware = rng() % 2;
    d.flags.paging.mode = rng() % 2 ? PagingMode::Hardware : PagingMode::CodeControlled;
    if (rng() % 2) {
      d.flags.paging.mean_swap_interval = std::pow(10.0, double(rng() % 40) / 10.0);
    }
    d.uniform_certified = rng() % 2;
    ExecutionalityReport report = executionality(d);
    ++out.checked;
    if (!(report.score >= -1.0 && report.score <= 1.0)) {
      out.fail("score out of range");
    }
  }

  auto base = [&](MechanismKind kind) {
    MechanismDescriptor d;
    d.kind = kind;
    d.machine.iface = ct_iface();
    return executionality(d).score;
  };
  const double manual = base(MechanismKind::Manual);
  const double simulation = base(MechanismKind::Simulation);
  const double interpreted = base(MechanismKind::Interpreted);
  const double jit = base(MechanismKind::JitFragments);
  const double direct = base(MechanismKind::Direct);
  if (!(manual < simulation && simulation < interpreted && interpreted < jit &&
        jit < direct && direct > 0.0)) {
    out.fail("mechanism ordering broken");
  }

  MechanismDescriptor asic;
  asic.kind = MechanismKind::Direct;
  asic.machine.iface = ct_iface();
  asic.flags.dedicated_hardware = true;
  if (!(executionality(asic).score <= -0.5)) out.fail("dedicated hardware not dominant");
  MechanismDescriptor paged;
  paged.kind = MechanismKind::Direct;
  paged.machine.iface = ct_iface();
  paged.flags.paging.mode = PagingMode::CodeControlled;
  paged.flags.paging.mean_swap_interval = 3.0;
  if (!(executionality(paged).score <= -0.3)) out.fail("frequent paging not dominant");
  out.detail = "10000 descriptors + ordering + dominance";
  return out.pass;
}

// every toolkit-produced run is well-founded; constructed pathologies are
// caught.
bool criterion_wellfoundedness(Outcome& out) {
  const InterfaceSpec iface = ct_iface();
  ServiceFamily fam = make_family(iface, {});
  ProvenanceStore store;
  EngineConfig big;
  big.fuel = 1 << 20;

  EncodingLayout layout = default_layout(iface, 2);
  InstructionSequence y = generate_interpreter(iface, layout);
  certify_uniformity(y, iface, layout, CertSample::exhaustive());

  store.add(run_direct(parse_program("t1.set:t ; !t"), fam));
  store.add(oracle_run(parse_program("+c1.get ; !t"), fam, 100));
  EngineConfig sim;
  sim.simulation_mode = true;
  store.add(run_direct(parse_program("t1.set:t ; !"), fam, sim));
  InterpretedRun interp =
      run_interpreted_with(y, parse_program("c1.set:t ; !f"), fam, layout, big);
  store.add(interp.interpreter_run);
  store.add(interp.subject_run);
  CompiledObjectRun object = run_compiled_object(parse_program("#2 ; !t ; #1 ; !f"), fam);
  store.add(object.object_run);
  store.add(object.subject_run);
  CompiledIntermediateRun inter =
      run_compiled_intermediate(parse_program("!f"), fam, layout, big);
  store.add(inter.interpreter_run);
  store.add(inter.intermediate_run);
  store.add(inter.subject_run);
  store.add(run_fragmented(parse_inseqex("(t1.set:t)^3 ; !t"), fam, 2, big));

  for (const auto& [id, run] : store) {
    (void)id;
    ++out.checked;
    WellFoundedReport report = check_wellfounded(run, store);
    if (!report.ok) {
      out.fail("toolkit run ill-founded: " +
               std::string(mechanism_kind_name(run.mechanism.kind)));
    }
  }

  // pathology: a provenance cycle
  Run a = run_direct(parse_program("!t"), fam);
  Run b = run_direct(parse_program("!f"), fam);
  a.provenance = Provenance{b.run_id, ProvenanceRelation::PrimaryResultOf};
  b.provenance = Provenance{a.run_id, ProvenanceRelation::PrimaryResultOf};
  ProvenanceStore cyclic;
  cyclic.add(a);
  cyclic.add(b);
  if (check_wellfounded(a, cyclic).ok) out.fail("cycle not detected");

  // pathology: a root without positive executionality
  Run asic_root = run_direct(parse_program("!t"), fam);
  asic_root.mechanism.flags.dedicated_hardware = true;
  ProvenanceStore lone;
  lone.add(asic_root);
  if (check_wellfounded(asic_root, lone).ok) out.fail("non-positive root not detected");

  out.detail = std::to_string(out.checked) + " toolkit runs + 2 pathologies";
  return out.pass;
}

// object compilation preserves behavior for every length<=8 program over a
// single co-target register, with clean structure.
bool criterion_compiler(Outcome& out) {
  InterfaceSpec iface;
  iface.services["c1"] = all_methods(ServiceKind::Cotarget);
  const std::vector<Instruction> alphabet = {
      Instruction::pos_test("c1", "get"), Instruction::plain("c1", "set:t"),
      Instruction::plain("c1", "set:f"),  Instruction::fwd_jump(0),
      Instruction::fwd_jump(2),           Instruction::bwd_jump(1),
      Instruction::halt_true(),
  };
  const std::vector<ServiceFamily> states = all_initial_states(iface);
  const std::vector<InstructionSequence> programs = collect_programs(alphabet, 0, 8);

  std::atomic<std::uint64_t> checked{0};
  parallel_for(programs.size(), [&](std::size_t i) {
    const InstructionSequence& seq = programs[i];
    CompilationRecord record = compile_object(seq);
    const ObjectSequence& object = std::get<ObjectSequence>(record.output);
    if (!object_wellformed(object)) {
      out.fail("structure violation on: " + render_program(seq));
      return;
    }
    for (const ServiceFamily& fam : states) {
      EngineConfig cfg;
      cfg.fuel = 100;
      Run source = run_direct(seq, fam, cfg);
      Run compiled = run_direct(record.prepared, fam, cfg);
      bool ok = trace_equivalent(source, compiled);
      if (ok && source.status.is_terminated()) {
        ok = effect_of(source) == effect_of(compiled);
      }
      if (!ok) out.fail("behavior change on: " + render_program(seq));
      checked.fetch_add(2, std::memory_order_relaxed);
    }
  });
  out.checked = checked;
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%zu programs x %zu states", programs.size(),
                states.size());
  out.detail = buf;
  return out.pass;
}

// seeded random expression generator (closed, over the c1/t1 interface)
InseqexPtr random_expression(std::mt19937_64& rng, int depth,
                             std::vector<std::string>& scope) {
  static const std::vector<Instruction> atoms = {
      Instruction::plain("c1", "set:t"),  Instruction::plain("c1", "set:f"),
      Instruction::plain("t1", "set:t"),  Instruction::pos_test("c1", "get"),
      Instruction::neg_test("t1", "get"), Instruction::fwd_jump(2),
      Instruction::fwd_jump(5),           Instruction::bwd_jump(1),
      Instruction::halt_true(),           Instruction::halt_false(),
  };
  const int kind = int(rng() % (depth <= 0 ? 2 : 6));
  switch (kind) {
    case 0:
      return Inseqex::make_prim(atoms[rng() % atoms.size()]);
    case 1:
      if (!scope.empty()) return Inseqex::make_var(scope[rng() % scope.size()]);
      return Inseqex::make_prim(atoms[rng() % atoms.size()]);
    case 2:
    case 3:
      return Inseqex::make_concat(random_expression(rng, depth - 1, scope),
                                  random_expression(rng, depth - 1, scope));
    case 4:
      return Inseqex::make_repeat(random_expression(rng, depth - 1, scope),
                                  1 + rng() % 4);
    default: {
      std::string name = "v" + std::to_string(scope.size());
      InseqexPtr bound = random_expression(rng, depth - 1, scope);
      scope.push_back(name);
      InseqexPtr body = random_expression(rng, depth - 1, scope);
      scope.pop_back();
      return Inseqex::make_let(name, std::move(bound), std::move(body));
    }
  }
}

// fragment-windowed runs agree with expand-then-run; explosions are exact
// and still runnable through the window with bounded materialization.
bool criterion_fragments(Outcome& out) {
  const InterfaceSpec iface = ct_iface();
  ServiceFamily fam = make_family(iface, {});

  std::mt19937_64 rng(515151);
  std::vector<std::string> scope;
  int generated = 0;
  while (generated < 500) {
    InseqexPtr e = random_expression(rng, 4, scope);
    if (expansion_size(e) > 64) continue;
    ++generated;
    ExpansionOutcome expanded = expand(e, 64);
    const InstructionSequence& seq = std::get<Expanded>(expanded).seq;
    EngineConfig cfg;
    cfg.fuel = 1000;
    Run direct = run_direct(seq, fam, cfg);
    for (std::uint64_t window : {1ull, 2ull, 7ull, 64ull}) {
      FragmentStats stats;
      Run fragmented = run_fragmented(e, fam, window, cfg, &stats);
      ++out.checked;
      bool ok = same_status(fragmented.status, direct.status) &&
                action_trace(fragmented) == action_trace(direct) &&
                stats.max_materialized <= window;
      if (ok && direct.status.is_terminated()) {
        ok = effect_of(fragmented) == effect_of(direct);
      }
      if (!ok) out.fail("window disagreement on: " + render_inseqex(e));
    }
  }

  // the explosive case: exact size, refusal to materialize, bounded window
  InseqexPtr boom = parse_inseqex("(c1.set:t ; c1.set:f)^549755813888 ; !t");  // 2^39
  ExpansionOutcome verdict = expand(boom, 1000000);
  const auto* explosion = std::get_if<Explosion>(&verdict);
  if (!explosion || explosion->lower_bound != (std::uint64_t(1) << 40) + 1 ||
      explosion->bound != 1000000) {
    out.fail("explosion arithmetic wrong");
  }
  FragmentStats stats;
  EngineConfig cfg;
  cfg.fuel = 10000;
  Run run = run_fragmented(boom, fam, 64, cfg, &stats);
  ++out.checked;
  if (!(run.status.is_divergence() && stats.max_materialized <= 64)) {
    out.fail("explosive run escaped the window");
  }

  out.detail = "500 expressions x 4 windows + explosion";
  return out.pass;
}

// loaded-window paging never changes actions or statuses; code-controlled
// paging frequency drives the score sign as specified.
bool criterion_paging(Outcome& out) {
  const InterfaceSpec iface = lab_iface();
  ServiceFamily fam = make_family(iface, {});
  std::mt19937_64 rng(8086);
  const std::vector<Instruction> alphabet = interface_alphabet(iface, 8);

  for (int trial = 0; trial < 200; ++trial) {
    InstructionSequence seq = random_program(rng, alphabet, 4 + rng() % 20);
    EngineConfig plain_cfg;
    plain_cfg.fuel = 300;
    Run whole = run_direct(seq, fam, plain_cfg);
    for (std::uint32_t window : {1u, 4u, 16u}) {
      EngineConfig cfg = plain_cfg;
      cfg.loaded_window = window;
      Run paged = run_direct(seq, fam, cfg);
      ++out.checked;
      if (!(same_status(paged.status, whole.status) &&
            action_trace(paged) == action_trace(whole))) {
        out.fail("paging changed behavior on: " + render_program(seq));
      }
    }
  }

  // frequent code-controlled paging: a window of 1 swaps every step
  std::string churn;
  for (int i = 0; i < 64; ++i) churn += "c1.set:t ; ";
  churn += "!t";
  EngineConfig fast_cfg;
  fast_cfg.loaded_window = 1;
  fast_cfg.paging_mode = PagingMode::CodeControlled;
  Run fast = run_direct(parse_program(churn), fam, fast_cfg);
  const auto fast_interval = fast.mechanism.flags.paging.mean_swap_interval;
  ++out.checked;
  if (!(fast_interval && *fast_interval < 10.0 && executionality(fast).score < 0.0)) {
    out.fail("frequent code paging kept a positive score");
  }

  // rare code-controlled paging: one swap in hundreds of steps
  std::string long_program;
  for (int i = 0; i < 299; ++i) long_program += "c1.set:t ; ";
  long_program += "!t";
  EngineConfig rare_cfg;
  rare_cfg.loaded_window = 256;
  rare_cfg.paging_mode = PagingMode::CodeControlled;
  Run rare = run_direct(parse_program(long_program), fam, rare_cfg);
  const auto rare_interval = rare.mechanism.flags.paging.mean_swap_interval;
  ++out.checked;
  if (!(rare_interval && *rare_interval >= 100.0 && executionality(rare).score > 0.0)) {
    out.fail("rare code paging lost the positive score");
  }

  out.detail = "200 programs x 3 windows + frequency thresholds";
  return out.pass;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    bool (*run)(Outcome&);
  };
  const Criterion criteria[] = {
      {1, "differential-semantics", criterion_differential},
      {2, "interpretation-uniformity", criterion_uniformity},
      {3, "pipeline-equivalence", criterion_pipelines},
      {4, "requirements-table", criterion_requirements_table},
      {5, "executionality-contract", criterion_executionality},
      {6, "well-foundedness", criterion_wellfoundedness},
      {7, "compiler-soundness", criterion_compiler},
      {8, "fragment-oscillation", criterion_fragments},
      {9, "paging-transparency", criterion_paging},
  };

  int failures = 0;
  for (const Criterion& criterion : criteria) {
    Outcome outcome;
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = false;
    try {
      pass = criterion.run(outcome);
    } catch (const std::exception& e) {
      outcome.fail(std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    char line[256];
    if (pass) {
      std::snprintf(line, sizeof(line), "PASS  %d  %-26s (%s, %.1fs)", criterion.id,
                    criterion.name, outcome.detail.c_str(), secs);
    } else {
      ++failures;
      std::snprintf(line, sizeof(line), "FAIL  %d  %-26s %s", criterion.id,
                    criterion.name, outcome.first_bad.c_str());
    }
    std::cout << line << std::endl;
  }
  if (failures) {
    std::cout << failures << " criteria failed" << std::endl;
  } else {
    std::cout << "all criteria passed" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
