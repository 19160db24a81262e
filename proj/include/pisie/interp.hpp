#pragma once

// Interpretation as literally putting another instruction sequence into
// effect: a subject program is encoded into boolean co-target registers
// (m-registers hold the program image, p-registers the subject pc) and a
// universal interpreter sequence is generated for the bounded program class
// of a layout. Running that interpreter directly reproduces the subject's
// behavior for every encodable subject.

#include <compare>
#include <cstdint>
#include <map>
#include <string>

#include "pisie/engine.hpp"
#include "pisie/run.hpp"

namespace pisie {

// An instruction shape: actions keep their focus and method, jumps and
// terminators are one shape each (jump operands live in the operand bits).
struct OpcodeKey {
  Op op = Op::Halt;
  std::string focus;
  std::string method;
  auto operator<=>(const OpcodeKey&) const = default;
};

OpcodeKey shape_of(const Instruction& ins);

struct EncodingLayout {
  std::uint64_t max_len = 4;       // L: longest encodable subject
  std::uint32_t opcode_bits = 0;
  std::uint32_t operand_bits = 0;  // jump operands, 0..2^operand_bits-1
  std::string mem_prefix = "m";
  std::string pc_prefix = "p";
  std::string scratch_prefix = "s";  // reserved; the generator needs none
  std::map<OpcodeKey, std::uint32_t> opcode_table;
  std::uint32_t padding_code = 0;  // fills slots past the subject's length
};

// Canonical table and minimal bit widths for an interface at bound L.
EncodingLayout default_layout(const InterfaceSpec& iface, std::uint64_t max_len);

// Canonical table with caller-chosen bit widths; throws LayoutTooSmall when
// the widths cannot hold the interface's shapes or L operand values.
EncodingLayout build_layout(const InterfaceSpec& iface, std::uint64_t max_len,
                            std::uint32_t opcode_bits, std::uint32_t operand_bits,
                            std::string mem_prefix = "m", std::string pc_prefix = "p",
                            std::string scratch_prefix = "s");

std::string mem_register_name(const EncodingLayout& layout, std::uint64_t slot,
                              std::uint32_t bit);
std::string pc_register_name(const EncodingLayout& layout, std::uint32_t bit);
std::uint32_t pc_bit_count(const EncodingLayout& layout);

struct ProgramEncoding {
  EncodingLayout layout;
  std::map<std::string, bool> register_values;  // every m-register of every slot
};

// Slot j holds instruction j's opcode and operand bits; slots past the end
// hold the padding opcode. Throws ProgramTooLong / UnencodableInstruction.
ProgramEncoding encode_program(const InstructionSequence& seq,
                               const EncodingLayout& layout,
                               const InterfaceSpec& iface);

// Inverse of encode_program; second member counts trailing padding slots.
std::pair<InstructionSequence, std::size_t> decode_program(const ProgramEncoding& enc);

// Subject interface plus the interpreter's own m/p registers as co-targets.
InterfaceSpec extended_interface(const InterfaceSpec& iface,
                                 const EncodingLayout& layout);

// A fetch-decode-dispatch loop over the encoded program: a decision tree of
// +get steering points over the pc bits selects the slot, a tree over the
// slot's opcode bits selects a shared handler per interface action (jump
// shapes dispatch further over their operand bits), and the subject pc
// advances through ripple-carry increment blocks. Deterministic in
// (iface, layout).
InstructionSequence generate_interpreter(const InterfaceSpec& iface,
                                         const EncodingLayout& layout);

struct InterpretedRun {
  Run subject_run;      // the subject's events, derived by projection
  Run interpreter_run;  // the direct run that produced them
};

// Encode `seq`, extend `fam` with the loaded registers, run the generated
// interpreter directly, and derive the subject run (provenance:
// primary_result_of the interpreter run). cfg.fuel budgets the interpreter.
InterpretedRun run_interpreted(const InstructionSequence& seq, const ServiceFamily& fam,
                               const EncodingLayout& layout,
                               const EngineConfig& cfg = {});

// Same, but with an explicit interpreter sequence (certification and
// counterexample experiments swap in alternates).
InterpretedRun run_interpreted_with(const InstructionSequence& interpreter,
                                    const InstructionSequence& seq,
                                    const ServiceFamily& fam,
                                    const EncodingLayout& layout,
                                    const EngineConfig& cfg = {});

// Process-wide registry of certified interpreters; certify_uniformity marks
// a key on pass and later interpreted runs carry uniform_certified.
std::string interpreter_cert_key(const InstructionSequence& interpreter,
                                 const InterfaceSpec& iface,
                                 const EncodingLayout& layout);
bool interpreter_certified(const std::string& key);
void mark_interpreter_certified(const std::string& key);

}  // namespace pisie
