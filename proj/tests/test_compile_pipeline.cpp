#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "pisie/compile.hpp"
#include "pisie/errors.hpp"
#include "pisie/mechanism.hpp"

using namespace pisie;

namespace {

InterfaceSpec ct_iface() {
  InterfaceSpec spec;
  spec.services["c1"] = all_methods(ServiceKind::Cotarget);
  spec.services["t1"] = all_methods(ServiceKind::Target);
  return spec;
}

ServiceFamily h0() { return make_family(ct_iface(), {}); }

const ObjectSequence& object_of(const CompilationRecord& record) {
  return std::get<ObjectSequence>(record.output);
}

}  // namespace

TEST_CASE("jump chains collapse and dead code disappears") {
  CompilationRecord record = compile_object(parse_program("#2 ; !t ; #1 ; !f"));
  CHECK(render_object(object_of(record)) == "##2\n!f");
  REQUIRE(record.position_map.size() == 4);
  CHECK(record.position_map[0] == 1);
  CHECK_FALSE(record.position_map[1].has_value());  // dead !t removed
  CHECK_FALSE(record.position_map[2].has_value());  // chain interior removed
  CHECK(record.position_map[3] == 2);
  CHECK(object_wellformed(object_of(record)));
}

TEST_CASE("a terminator-only program is a fixed point") {
  CompilationRecord record = compile_object(parse_program("!t"));
  CHECK(render_object(object_of(record)) == "!t");
  CHECK(record.prepared == parse_program("!t"));
}

TEST_CASE("the self-loop survives as the divergence idiom") {
  CompilationRecord record = compile_object(parse_program("#0"));
  CHECK(render_object(object_of(record)) == "##1");
  Run run = run_direct(record.prepared, h0(), EngineConfig{});
  CHECK(run.status.kind == StatusKind::Divergence);
}

TEST_CASE("a jump-only cycle collapses to a self-loop") {
  CompilationRecord record = compile_object(parse_program("#1 ; \\#1"));
  CHECK(render_object(object_of(record)) == "##1");
}

TEST_CASE("empty input compiles to empty output") {
  CompilationRecord record = compile_object(InstructionSequence{});
  CHECK(object_of(record).size() == 0);
  CHECK(object_wellformed(object_of(record)));
}

TEST_CASE("object surface syntax round-trips") {
  CompilationRecord record = compile_object(parse_program("+c1.get ; #2 ; t1.set:t ; !"));
  const ObjectSequence& obj = object_of(record);
  CHECK(parse_object(render_object(obj)) == obj);
}

TEST_CASE("object files reject relative jumps") {
  CHECK_THROWS_AS(parse_object("#2"), SyntaxError);
  CHECK_THROWS_AS(parse_object("##"), SyntaxError);
}

TEST_CASE("compilation preserves behavior over an exhaustive family") {
  const std::vector<Instruction> alphabet = {
      Instruction::pos_test("c1", "get"), Instruction::plain("c1", "set:t"),
      Instruction::plain("t1", "set:t"),  Instruction::fwd_jump(0),
      Instruction::fwd_jump(2),           Instruction::bwd_jump(1),
      Instruction::halt_true(),           Instruction::halt_false(),
  };
  const std::vector<ServiceFamily> states = canonical_initial_states(ct_iface());
  std::uint64_t checked = 0;
  enumerate_programs(alphabet, 0, 4, [&](const InstructionSequence& seq) {
    CompilationRecord record = compile_object(seq);
    REQUIRE(object_wellformed(object_of(record)));
    for (const ServiceFamily& fam : states) {
      EngineConfig cfg;
      cfg.fuel = 100;
      Run source = run_direct(seq, fam, cfg);
      Run object = run_direct(record.prepared, fam, cfg);
      CAPTURE(render_program(seq));
      REQUIRE(trace_equivalent(source, object));
      if (source.status.is_terminated()) {
        REQUIRE(effect_of(source) == effect_of(object));
      }
      ++checked;
    }
    return true;
  });
  CHECK(checked > 10000);
}

TEST_CASE("recompiling compiled output is the identity modulo renumbering") {
  const char* programs[] = {
      "#2 ; !t ; #1 ; !f",
      "+c1.get ; #2 ; t1.set:t ; !",
      "#0",
      "c1.set:t ; \\#1",
  };
  for (const char* text : programs) {
    CAPTURE(text);
    CompilationRecord once = compile_object(parse_program(text));
    CompilationRecord twice = compile_object(once.prepared);
    CHECK(object_of(once) == object_of(twice));
  }
}

TEST_CASE("run_compiled_object mirrors the object run under the source subject") {
  InstructionSequence seq = parse_program("t1.set:t ; !t");
  CompiledObjectRun out = run_compiled_object(seq, h0());
  CHECK(target_equivalent(out.subject_run, run_direct(seq, h0())));
  CHECK(out.subject_run.subject == seq);
  CHECK(out.subject_run.mechanism.kind == MechanismKind::CompiledObject);
  CHECK(out.object_run.mechanism.kind == MechanismKind::Direct);
  REQUIRE(out.subject_run.provenance.has_value());
  CHECK(out.subject_run.provenance->relation == ProvenanceRelation::CompiledFrom);
  CHECK(out.subject_run.provenance->parent_run_id == out.object_run.run_id);
}

TEST_CASE("optimized jumps terminate with the source's result") {
  CompiledObjectRun out = run_compiled_object(parse_program("#2 ; !t ; #1 ; !f"), h0());
  CHECK(out.subject_run.status.value == false);
}

TEST_CASE("compiled runs classify as indirect") {
  ProvenanceStore store;
  CompiledObjectRun out = run_compiled_object(parse_program("t1.set:t ; !t"), h0());
  store.add(out.object_run);
  store.add(out.subject_run);
  Classification cls = classify(*store.find(out.subject_run.run_id), store);
  CHECK(cls.is_pisie);
  CHECK_FALSE(cls.is_dpisie);
  CHECK_FALSE(cls.is_interpretation);
  CHECK_FALSE(cls.is_execution);
}

TEST_CASE("intermediate compilation encodes the optimized form") {
  EncodingLayout layout = default_layout(ct_iface(), 4);
  CompilationRecord record =
      compile_intermediate(parse_program("#2 ; !t ; #1 ; !f"), layout, ct_iface());
  CHECK(record.prepared == parse_program("#1 ; !f"));
  const auto& enc = std::get<ProgramEncoding>(record.output);
  auto direct_enc = encode_program(record.prepared, layout, ct_iface());
  CHECK(enc.register_values == direct_enc.register_values);
}

TEST_CASE("intermediate passthrough of short programs") {
  EncodingLayout layout = default_layout(ct_iface(), 2);
  CompilationRecord record = compile_intermediate(parse_program("!t"), layout, ct_iface());
  auto [decoded, padding] = decode_program(std::get<ProgramEncoding>(record.output));
  CHECK(decoded == parse_program("!t"));
  CHECK(padding == 1);
}

TEST_CASE("intermediate compilation rejects overlong programs") {
  EncodingLayout layout = default_layout(ct_iface(), 2);
  CHECK_THROWS_AS(compile_intermediate(parse_program("! ; ! ; !"), layout, ct_iface()),
                  ProgramTooLong);
}

TEST_CASE("run_compiled_intermediate chains provenance through the prepared form") {
  EncodingLayout layout = default_layout(ct_iface(), 2);
  InstructionSequence seq = parse_program("t1.set:t ; !t");
  EngineConfig cfg;
  cfg.fuel = 1 << 20;
  CompiledIntermediateRun out = run_compiled_intermediate(seq, h0(), layout, cfg);

  CHECK(target_equivalent(out.subject_run, run_direct(seq, h0())));
  CHECK(out.subject_run.mechanism.kind == MechanismKind::CompiledIntermediate);
  REQUIRE(out.subject_run.provenance.has_value());
  CHECK(out.subject_run.provenance->relation == ProvenanceRelation::CompiledFrom);
  CHECK(out.subject_run.provenance->parent_run_id == out.intermediate_run.run_id);
  REQUIRE(out.intermediate_run.provenance.has_value());
  CHECK(out.intermediate_run.provenance->relation ==
        ProvenanceRelation::PrimaryResultOf);
  CHECK(out.intermediate_run.provenance->parent_run_id == out.interpreter_run.run_id);
  CHECK(out.interpreter_run.mechanism.kind == MechanismKind::Direct);

  ProvenanceStore store;
  store.add(out.interpreter_run);
  store.add(out.intermediate_run);
  store.add(out.subject_run);
  Classification cls = classify(*store.find(out.subject_run.run_id), store);
  CHECK(cls.is_pisie);
  CHECK_FALSE(cls.is_dpisie);
  Classification interp_cls = classify(*store.find(out.interpreter_run.run_id), store);
  CHECK(interp_cls.is_execution);
}

TEST_CASE("pipeline equivalence on a sampled family") {
  EncodingLayout layout = default_layout(ct_iface(), 4);
  std::mt19937_64 rng(11);
  std::vector<Instruction> alphabet = interface_alphabet(ct_iface(), 3);
  const std::vector<ServiceFamily> states = canonical_initial_states(ct_iface());
  EngineConfig cfg;
  cfg.fuel = 1 << 18;
  for (int trial = 0; trial < 40; ++trial) {
    InstructionSequence seq = random_program(rng, alphabet, 1 + rng() % 4);
    CAPTURE(render_program(seq));
    for (const ServiceFamily& fam : states) {
      EngineConfig direct_cfg;
      direct_cfg.fuel = 200;
      Run direct = run_direct(seq, fam, direct_cfg);
      CompiledObjectRun object = run_compiled_object(seq, fam, direct_cfg);
      InterpretedRun interp = run_interpreted(seq, fam, layout, cfg);
      CompiledIntermediateRun inter = run_compiled_intermediate(seq, fam, layout, cfg);
      REQUIRE(target_equivalent(direct, object.subject_run));
      REQUIRE(target_equivalent(direct, interp.subject_run));
      REQUIRE(target_equivalent(direct, inter.subject_run));
    }
  }
}
