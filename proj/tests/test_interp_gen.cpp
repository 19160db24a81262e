#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdlib>
#include <fstream>

#include "doctest.h"
#include "pisie/errors.hpp"
#include "pisie/interp.hpp"
#include "pisie/mechanism.hpp"
#include "pisie/trace_io.hpp"

using namespace pisie;

namespace {

InterfaceSpec ct_iface() {
  InterfaceSpec spec;
  spec.services["c1"] = all_methods(ServiceKind::Cotarget);
  spec.services["t1"] = all_methods(ServiceKind::Target);
  return spec;
}

EngineConfig big_fuel() {
  EngineConfig cfg;
  cfg.fuel = 1 << 20;
  return cfg;
}

}  // namespace

TEST_CASE("encoding fills trailing slots with padding") {
  EncodingLayout layout = default_layout(ct_iface(), 2);
  ProgramEncoding enc = encode_program(parse_program("!t"), layout, ct_iface());
  auto [decoded, padding] = decode_program(enc);
  CHECK(decoded == parse_program("!t"));
  CHECK(padding == 1);
}

TEST_CASE("decode inverts encode over a mixed program") {
  EncodingLayout layout = default_layout(ct_iface(), 4);
  InstructionSequence seq = parse_program("+c1.get ; #2 ; t1.set:f ; \\#1");
  auto [decoded, padding] = decode_program(encode_program(seq, layout, ct_iface()));
  CHECK(decoded == seq);
  CHECK(padding == 0);
}

TEST_CASE("encode rejects programs beyond the layout bound") {
  EncodingLayout layout = default_layout(ct_iface(), 2);
  CHECK_THROWS_AS(encode_program(parse_program("! ; ! ; !"), layout, ct_iface()),
                  ProgramTooLong);
}

TEST_CASE("encode rejects operands beyond the operand bits") {
  EncodingLayout layout = build_layout(ct_iface(), 2, 6, 1);
  CHECK_THROWS_AS(encode_program(parse_program("#3"), layout, ct_iface()),
                  UnencodableInstruction);
}

TEST_CASE("layout capacity checks") {
  CHECK_THROWS_AS(build_layout(ct_iface(), 4, 3, 2), LayoutTooSmall);  // 25 shapes
  CHECK_THROWS_AS(build_layout(ct_iface(), 8, 6, 2), LayoutTooSmall);  // 8 > 2^2... operands
  EncodingLayout layout = default_layout(ct_iface(), 2);
  CHECK((1u << layout.opcode_bits) >= layout.opcode_table.size() + 1);
  CHECK((1u << layout.operand_bits) >= layout.max_len);
}

TEST_CASE("generation is deterministic") {
  EncodingLayout layout = default_layout(ct_iface(), 2);
  InstructionSequence a = generate_interpreter(ct_iface(), layout);
  InstructionSequence b = generate_interpreter(ct_iface(), layout);
  CHECK(a == b);
  CHECK(validate(a, extended_interface(ct_iface(), layout)).ok);
}

TEST_CASE("interpreter length grows with the program bound") {
  EncodingLayout l2 = default_layout(ct_iface(), 2);
  EncodingLayout l4 = default_layout(ct_iface(), 4);
  CHECK(generate_interpreter(ct_iface(), l4).size() >
        generate_interpreter(ct_iface(), l2).size());
}

TEST_CASE("generator output matches the golden file") {
  EncodingLayout layout = default_layout(ct_iface(), 4);
  std::string rendered = render_program(generate_interpreter(ct_iface(), layout));
  const char* root = std::getenv("PISIE_SOURCE_DIR");
  std::string path = std::string(root ? root : ".") + "/tests/golden/interpreter_L4.isq";
  if (std::getenv("PISIE_UPDATE_GOLDEN")) {
    write_text_file(path, rendered + "\n");
  }
  CHECK(read_text_file(path) == rendered + "\n");
}

TEST_CASE("interpreting a target write reproduces the direct run") {
  EncodingLayout layout = default_layout(ct_iface(), 2);
  ServiceFamily fam = make_family(ct_iface(), {});
  InstructionSequence seq = parse_program("t1.set:t ; !t");

  InterpretedRun via = run_interpreted(seq, fam, layout, big_fuel());
  Run direct = run_direct(seq, fam);

  CHECK(action_trace(via.subject_run) == action_trace(direct));
  CHECK(same_status(via.subject_run.status, direct.status));
  CHECK(effect_of(via.subject_run) == effect_of(direct));
  CHECK(via.interpreter_run.events.size() > via.subject_run.events.size());
  CHECK(same_projection(target_projection(via.interpreter_run),
                        target_projection(direct)));
}

TEST_CASE("interpreted self-loop diverges") {
  EncodingLayout layout = default_layout(ct_iface(), 2);
  ServiceFamily fam = make_family(ct_iface(), {});
  EngineConfig cfg;
  cfg.fuel = 5000;
  InterpretedRun via = run_interpreted(parse_program("#0"), fam, layout, cfg);
  CHECK(via.subject_run.status.kind == StatusKind::Divergence);
  CHECK(via.subject_run.events.empty());
}

TEST_CASE("interpreted steering follows the co-target contents") {
  EncodingLayout layout = default_layout(ct_iface(), 3);
  ServiceFamily fam = make_family(ct_iface(), {{"c1", true}});
  InterpretedRun via =
      run_interpreted(parse_program("+c1.get ; !t ; !f"), fam, layout, big_fuel());
  CHECK(via.subject_run.status.value == true);
  Run direct = run_direct(parse_program("+c1.get ; !t ; !f"), fam);
  CHECK(action_trace(via.subject_run) == action_trace(direct));
}

TEST_CASE("provenance ties the subject run to the direct interpreter run") {
  EncodingLayout layout = default_layout(ct_iface(), 2);
  ServiceFamily fam = make_family(ct_iface(), {});
  InterpretedRun via = run_interpreted(parse_program("!t"), fam, layout, big_fuel());
  REQUIRE(via.subject_run.provenance.has_value());
  CHECK(via.subject_run.provenance->relation == ProvenanceRelation::PrimaryResultOf);
  CHECK(via.subject_run.provenance->parent_run_id == via.interpreter_run.run_id);
  CHECK(via.interpreter_run.mechanism.kind == MechanismKind::Direct);
  CHECK(via.subject_run.mechanism.kind == MechanismKind::Interpreted);
  CHECK_FALSE(via.interpreter_run.provenance.has_value());
}

TEST_CASE("a service-free interface still interprets jump and halt programs") {
  InterfaceSpec empty;
  EncodingLayout layout = default_layout(empty, 1);
  InstructionSequence y = generate_interpreter(empty, layout);
  ServiceFamily fam = make_family(empty, {});

  std::vector<Instruction> alphabet = interface_alphabet(empty, 1);
  std::uint64_t count = 0;
  enumerate_programs(alphabet, 1, 1, [&](const InstructionSequence& seq) {
    CAPTURE(render_program(seq));
    EngineConfig cfg;
    cfg.fuel = 2000;
    InterpretedRun via = run_interpreted_with(y, seq, fam, layout, cfg);
    Run direct = run_direct(seq, fam, cfg);
    REQUIRE(same_status(via.subject_run.status, direct.status));
    REQUIRE(via.interpreter_run.events.size() >= via.subject_run.events.size());
    ++count;
    return true;
  });
  CHECK(count == 6);  // #0, #1, \#0, !, !t, !f
}

TEST_CASE("exhaustive certification at the smallest bound") {
  InterfaceSpec iface;
  iface.services["c1"] = all_methods(ServiceKind::Cotarget);
  EncodingLayout layout = default_layout(iface, 1);
  InstructionSequence y = generate_interpreter(iface, layout);
  UniformityCertificate cert =
      certify_uniformity(y, iface, layout, CertSample::exhaustive());
  CHECK(cert.pass);
  CHECK(cert.witnesses.empty());
  CHECK(cert.checked > 10);
}

TEST_CASE("certification marks later interpreted runs as uniform") {
  InterfaceSpec iface;
  iface.services["c1"] = all_methods(ServiceKind::Cotarget);
  EncodingLayout layout = default_layout(iface, 1);
  InstructionSequence y = generate_interpreter(iface, layout);
  certify_uniformity(y, iface, layout, CertSample::exhaustive());
  ServiceFamily fam = make_family(iface, {});
  InterpretedRun via = run_interpreted(parse_program("!t"), fam, layout, big_fuel());
  CHECK(via.subject_run.mechanism.uniform_certified);
}

TEST_CASE("a hardcoded fake interpreter fails certification with a witness") {
  InterfaceSpec iface;
  iface.services["c1"] = all_methods(ServiceKind::Cotarget);
  EncodingLayout layout = default_layout(iface, 1);
  // always behaves like the subject "!t", whatever is loaded
  InstructionSequence fake = parse_program("!t");
  UniformityCertificate cert =
      certify_uniformity(fake, iface, layout, CertSample::exhaustive());
  CHECK_FALSE(cert.pass);
  REQUIRE_FALSE(cert.witnesses.empty());
  CHECK(cert.witnesses[0] != "!t");
}

TEST_CASE("random certification sample must be nonempty") {
  InterfaceSpec iface;
  EncodingLayout layout = default_layout(iface, 1);
  InstructionSequence y = generate_interpreter(iface, layout);
  CHECK_THROWS_AS(certify_uniformity(y, iface, layout, CertSample::random(0, 1)),
                  EmptySample);
}

TEST_CASE("register name collisions are rejected") {
  InterfaceSpec iface;
  iface.services["m1_0"] = all_methods(ServiceKind::Cotarget);
  EncodingLayout layout = default_layout(iface, 1);
  CHECK_THROWS_AS(extended_interface(iface, layout), std::invalid_argument);
  CHECK_THROWS_AS(generate_interpreter(iface, layout), std::invalid_argument);
}
