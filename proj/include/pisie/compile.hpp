#pragma once

// Object-code and intermediate-code compilation. Object code replaces
// relative jumps with absolute ones; compilation collapses jump chains and
// removes unreachable instructions, preserving run behavior. Intermediate
// compilation re-encodes the optimized form for the generated interpreter.
// Either way the whole-program preparatory stage makes the subsequent
// putting-into-effect indirect.

#include <cstdint>
#include <optional>
#include <variant>

#include "pisie/interp.hpp"
#include "pisie/run.hpp"

namespace pisie {

enum class ObjOp : std::uint8_t {
  Plain,
  PosTest,
  NegTest,
  AbsJump,
  Halt,
  HaltTrue,
  HaltFalse,
};

struct ObjectInstruction {
  ObjOp op = ObjOp::Halt;
  std::string focus;
  std::string method;
  std::uint32_t target = 0;  // AbsJump: 1-based position; len+1 terminates

  bool is_action() const {
    return op == ObjOp::Plain || op == ObjOp::PosTest || op == ObjOp::NegTest;
  }
  bool operator==(const ObjectInstruction&) const = default;
};

struct ObjectSequence {
  std::vector<ObjectInstruction> instructions;
  std::string name;

  std::size_t size() const { return instructions.size(); }
  const ObjectInstruction& at(std::size_t pos) const { return instructions[pos - 1]; }
  bool operator==(const ObjectSequence& other) const {
    return instructions == other.instructions;
  }
};

// Textual object format: as .isq but jumps are '##k' with absolute targets.
std::string render_object(const ObjectSequence& seq);
ObjectSequence parse_object(std::string_view text);

// Absolute jumps re-expressed relative to their position; a self-loop
// becomes #0.
InstructionSequence to_relative(const ObjectSequence& seq);

struct CompilationRecord {
  InstructionSequence source;
  std::variant<ObjectSequence, ProgramEncoding> output;
  std::string compiler_tag;  // the notional instruction sequence C
  // 1-based source position -> output position, nullopt when removed
  std::vector<std::optional<std::uint32_t>> position_map;
  // intermediate records keep the sequence that was actually encoded
  InstructionSequence prepared;
};

// Resolve relative jumps, collapse jump chains (a divergent chain compiles
// to a self-loop, the one permitted jump-to-jump), drop unreachable
// instructions, renumber. Total on parseable input.
CompilationRecord compile_object(const InstructionSequence& seq);

// True when every AbsJump lands in 1..len+1, no jump points at another jump
// except a self-loop, and every instruction is reachable from position 1.
bool object_wellformed(const ObjectSequence& seq);

struct CompiledObjectRun {
  Run subject_run;  // mechanism compiled_object, provenance compiled_from
  Run object_run;   // the direct run of the object sequence
};

CompiledObjectRun run_compiled_object(const InstructionSequence& seq,
                                      const ServiceFamily& fam,
                                      const EngineConfig& cfg = {});

// Object-compile, re-express with relative jumps when the layout can encode
// them (otherwise encode the source unchanged), then encode.
CompilationRecord compile_intermediate(const InstructionSequence& seq,
                                       const EncodingLayout& layout,
                                       const InterfaceSpec& iface);

struct CompiledIntermediateRun {
  Run subject_run;       // mechanism compiled_intermediate
  Run intermediate_run;  // interpreted run of the prepared form
  Run interpreter_run;   // the direct run at the bottom of the chain
};

CompiledIntermediateRun run_compiled_intermediate(const InstructionSequence& seq,
                                                  const ServiceFamily& fam,
                                                  const EncodingLayout& layout,
                                                  const EngineConfig& cfg = {});

}  // namespace pisie
