#pragma once

// Instruction sequence syntax: parsing, canonical rendering, and static
// validation. The surface notation:
//
//   f.m      plain basic action (focus f, method m)
//   +f.m     positive steering point: reply true runs the next instruction,
//            reply false skips it
//   -f.m     negative steering point: mirrored
//   #k       relative forward jump by k instruction offsets
//   \#k      relative backward jump
//   !        terminate without a boolean
//   !t / !f  terminate delivering true / false
//
// Instructions are separated by ';' or newlines, '%' starts a line comment.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pisie/family.hpp"

namespace pisie {

enum class Op : std::uint8_t {
  Plain,
  PosTest,
  NegTest,
  FwdJump,
  BwdJump,
  Halt,
  HaltTrue,
  HaltFalse,
};

struct Instruction {
  Op op = Op::Halt;
  std::string focus;   // action forms only
  std::string method;  // action forms only
  std::uint32_t offset = 0;  // jump forms only

  static Instruction plain(std::string focus, std::string method);
  static Instruction pos_test(std::string focus, std::string method);
  static Instruction neg_test(std::string focus, std::string method);
  static Instruction fwd_jump(std::uint32_t k);
  static Instruction bwd_jump(std::uint32_t k);
  static Instruction halt();
  static Instruction halt_true();
  static Instruction halt_false();

  bool is_action() const {
    return op == Op::Plain || op == Op::PosTest || op == Op::NegTest;
  }
  bool is_jump() const { return op == Op::FwdJump || op == Op::BwdJump; }
  bool is_terminator() const {
    return op == Op::Halt || op == Op::HaltTrue || op == Op::HaltFalse;
  }

  bool operator==(const Instruction&) const = default;
};

std::string render_instruction(const Instruction& ins);

struct InstructionSequence {
  std::vector<Instruction> instructions;
  std::string name;  // optional label, not part of the surface syntax

  std::size_t size() const { return instructions.size(); }
  bool empty() const { return instructions.empty(); }
  // 1-based position access
  const Instruction& at(std::size_t pos) const { return instructions[pos - 1]; }

  // structural equality: the label is metadata
  bool operator==(const InstructionSequence& other) const {
    return instructions == other.instructions;
  }
};

// Throws SyntaxError on malformed tokens or jump operand overflow.
InstructionSequence parse_program(std::string_view text);

// Canonical form: one instruction per line, no comments; parses back to a
// structurally equal sequence.
std::string render_program(const InstructionSequence& seq);

enum class IssueKind : std::uint8_t {
  JumpBeforeStart,
  UnknownFocus,
  UnknownMethod,
  SelfLoopWarning,
};

std::string_view issue_kind_name(IssueKind k);
bool issue_is_error(IssueKind k);

struct ValidationIssue {
  std::size_t position = 0;  // 1-based
  IssueKind kind = IssueKind::SelfLoopWarning;
  bool operator==(const ValidationIssue&) const = default;
};

struct ValidationReport {
  bool ok = true;
  std::vector<ValidationIssue> issues;
};

// Total on parseable sequences; issues are data, never exceptions.
ValidationReport validate(const InstructionSequence& seq, const InterfaceSpec& iface);

}  // namespace pisie
