#include "pisie/compile.hpp"

#include <algorithm>
#include <limits>

#include "pisie/errors.hpp"

namespace pisie {

std::string render_object(const ObjectSequence& seq) {
  std::string out;
  for (std::size_t i = 0; i < seq.instructions.size(); ++i) {
    if (i) out += '\n';
    const ObjectInstruction& ins = seq.instructions[i];
    switch (ins.op) {
      case ObjOp::Plain: out += ins.focus + "." + ins.method; break;
      case ObjOp::PosTest: out += "+" + ins.focus + "." + ins.method; break;
      case ObjOp::NegTest: out += "-" + ins.focus + "." + ins.method; break;
      case ObjOp::AbsJump: out += "##" + std::to_string(ins.target); break;
      case ObjOp::Halt: out += "!"; break;
      case ObjOp::HaltTrue: out += "!t"; break;
      case ObjOp::HaltFalse: out += "!f"; break;
    }
  }
  return out;
}

namespace {

ObjOp obj_op_of(Op op) {
  switch (op) {
    case Op::Plain: return ObjOp::Plain;
    case Op::PosTest: return ObjOp::PosTest;
    case Op::NegTest: return ObjOp::NegTest;
    case Op::Halt: return ObjOp::Halt;
    case Op::HaltTrue: return ObjOp::HaltTrue;
    case Op::HaltFalse: return ObjOp::HaltFalse;
    default: return ObjOp::Halt;
  }
}

Op rel_op_of(ObjOp op) {
  switch (op) {
    case ObjOp::Plain: return Op::Plain;
    case ObjOp::PosTest: return Op::PosTest;
    case ObjOp::NegTest: return Op::NegTest;
    case ObjOp::Halt: return Op::Halt;
    case ObjOp::HaltTrue: return Op::HaltTrue;
    case ObjOp::HaltFalse: return Op::HaltFalse;
    default: return Op::Halt;
  }
}

}  // namespace

ObjectSequence parse_object(std::string_view text) {
  ObjectSequence out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    char c = text[i];
    if (c == '%') {
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
    std::string_view tok = text.substr(start, i - start);
    if (tok.size() >= 2 && tok[0] == '#' && tok[1] == '#') {
      std::uint64_t value = 0;
      std::string_view digits = tok.substr(2);
      if (digits.empty()) throw SyntaxError(start + 1, "absolute jump needs a target");
      for (char d : digits) {
        if (d < '0' || d > '9')
          throw SyntaxError(start + 1, "absolute jump target must be decimal");
        value = value * 10 + std::uint64_t(d - '0');
        if (value > 0xffffffffull) throw SyntaxError(start + 1, "jump target overflow");
      }
      ObjectInstruction ins;
      ins.op = ObjOp::AbsJump;
      ins.target = static_cast<std::uint32_t>(value);
      out.instructions.push_back(std::move(ins));
      continue;
    }
    // everything else shares the relative surface syntax
    InstructionSequence one = parse_program(tok);
    if (one.size() != 1 || one.at(1).is_jump())
      throw SyntaxError(start + 1, "not an object instruction");
    const Instruction& ins = one.at(1);
    ObjectInstruction obj;
    obj.op = obj_op_of(ins.op);
    obj.focus = ins.focus;
    obj.method = ins.method;
    out.instructions.push_back(std::move(obj));
  }
  return out;
}

InstructionSequence to_relative(const ObjectSequence& seq) {
  InstructionSequence out;
  out.name = seq.name;
  for (std::size_t pos = 1; pos <= seq.size(); ++pos) {
    const ObjectInstruction& obj = seq.at(pos);
    if (obj.op == ObjOp::AbsJump) {
      if (obj.target >= pos) {
        out.instructions.push_back(
            Instruction::fwd_jump(static_cast<std::uint32_t>(obj.target - pos)));
      } else {
        out.instructions.push_back(
            Instruction::bwd_jump(static_cast<std::uint32_t>(pos - obj.target)));
      }
      continue;
    }
    Instruction ins;
    ins.op = rel_op_of(obj.op);
    ins.focus = obj.focus;
    ins.method = obj.method;
    out.instructions.push_back(std::move(ins));
  }
  return out;
}

namespace {

constexpr std::int64_t kNotAJump = std::numeric_limits<std::int64_t>::min();
constexpr std::int64_t kDiverges = -1;

// Follow the jump chain starting at position `at`; the result is the first
// non-jump position (len+1 for off the end), or kDiverges for a jump-only
// cycle. Below-start targets only arise for inputs validate() rejects; they
// collapse to the divergence self-loop like cycles do.
std::int64_t chase(const std::vector<std::int64_t>& jump_target, std::int64_t len,
                   std::int64_t at) {
  std::vector<std::int64_t> seen;
  for (;;) {
    if (at < 1) return kDiverges;
    if (at > len) return len + 1;
    if (jump_target[std::size_t(at)] == kNotAJump) return at;
    for (std::int64_t s : seen) {
      if (s == at) return kDiverges;
    }
    seen.push_back(at);
    at = jump_target[std::size_t(at)];
  }
}

}  // namespace

CompilationRecord compile_object(const InstructionSequence& seq) {
  const std::int64_t len = static_cast<std::int64_t>(seq.size());

  // resolved absolute target per jump position
  std::vector<std::int64_t> jump_target(std::size_t(len) + 1, kNotAJump);
  for (std::int64_t pos = 1; pos <= len; ++pos) {
    const Instruction& ins = seq.at(std::size_t(pos));
    if (!ins.is_jump()) continue;
    std::int64_t t = ins.op == Op::FwdJump ? pos + std::int64_t(ins.offset)
                                           : pos - std::int64_t(ins.offset);
    if (t > len + 1) t = len + 1;  // any jump past the end terminates
    jump_target[std::size_t(pos)] = t;
  }

  // collapsed final destination per jump
  std::vector<std::int64_t> final_target(std::size_t(len) + 1, 0);
  for (std::int64_t pos = 1; pos <= len; ++pos) {
    if (jump_target[std::size_t(pos)] == kNotAJump) continue;
    std::int64_t t = chase(jump_target, len, jump_target[std::size_t(pos)]);
    final_target[std::size_t(pos)] = t == kDiverges ? pos : t;  // divergence: self-loop
  }

  // reachability over the collapsed control flow
  std::vector<bool> reachable(std::size_t(len) + 2, false);
  std::vector<std::int64_t> stack{1};
  while (!stack.empty()) {
    std::int64_t pos = stack.back();
    stack.pop_back();
    if (pos < 1 || pos > len || reachable[std::size_t(pos)]) continue;
    reachable[std::size_t(pos)] = true;
    const Instruction& ins = seq.at(std::size_t(pos));
    switch (ins.op) {
      case Op::FwdJump:
      case Op::BwdJump:
        stack.push_back(final_target[std::size_t(pos)]);
        break;
      case Op::Plain:
        stack.push_back(pos + 1);
        break;
      case Op::PosTest:
      case Op::NegTest:
        stack.push_back(pos + 1);
        stack.push_back(pos + 2);
        break;
      default:
        break;  // terminators
    }
  }

  // renumber surviving positions
  std::vector<std::uint32_t> new_pos(std::size_t(len) + 2, 0);
  std::uint32_t next = 0;
  for (std::int64_t pos = 1; pos <= len; ++pos) {
    if (reachable[std::size_t(pos)]) new_pos[std::size_t(pos)] = ++next;
  }
  const std::uint32_t out_len = next;
  new_pos[std::size_t(len) + 1] = out_len + 1;  // off the end maps to off the end

  CompilationRecord record;
  record.source = seq;
  record.compiler_tag = "C.object.v1";
  record.position_map.resize(std::size_t(len));

  ObjectSequence object;
  object.name = seq.name;
  for (std::int64_t pos = 1; pos <= len; ++pos) {
    if (!reachable[std::size_t(pos)]) {
      record.position_map[std::size_t(pos) - 1] = std::nullopt;
      continue;
    }
    record.position_map[std::size_t(pos) - 1] = new_pos[std::size_t(pos)];
    const Instruction& ins = seq.at(std::size_t(pos));
    ObjectInstruction obj;
    if (ins.is_jump()) {
      obj.op = ObjOp::AbsJump;
      // a reachable jump's destination is reachable by construction
      obj.target = new_pos[std::size_t(final_target[std::size_t(pos)])];
    } else {
      obj.op = obj_op_of(ins.op);
      obj.focus = ins.focus;
      obj.method = ins.method;
    }
    object.instructions.push_back(std::move(obj));
  }
  record.prepared = to_relative(object);
  record.output = std::move(object);
  return record;
}

bool object_wellformed(const ObjectSequence& seq) {
  const std::size_t len = seq.size();
  for (std::size_t pos = 1; pos <= len; ++pos) {
    const ObjectInstruction& ins = seq.at(pos);
    if (ins.op != ObjOp::AbsJump) continue;
    if (ins.target < 1 || ins.target > len + 1) return false;
    if (ins.target == pos) continue;  // the divergence self-loop
    if (ins.target <= len && seq.at(ins.target).op == ObjOp::AbsJump) return false;
  }
  std::vector<bool> reachable(len + 2, false);
  std::vector<std::size_t> stack{1};
  while (!stack.empty()) {
    std::size_t pos = stack.back();
    stack.pop_back();
    if (pos < 1 || pos > len || reachable[pos]) continue;
    reachable[pos] = true;
    const ObjectInstruction& ins = seq.at(pos);
    switch (ins.op) {
      case ObjOp::AbsJump: stack.push_back(ins.target); break;
      case ObjOp::Plain: stack.push_back(pos + 1); break;
      case ObjOp::PosTest:
      case ObjOp::NegTest:
        stack.push_back(pos + 1);
        stack.push_back(pos + 2);
        break;
      default: break;
    }
  }
  for (std::size_t pos = 1; pos <= len; ++pos) {
    if (!reachable[pos]) return false;
  }
  return true;
}

CompiledObjectRun run_compiled_object(const InstructionSequence& seq,
                                      const ServiceFamily& fam,
                                      const EngineConfig& cfg) {
  CompilationRecord record = compile_object(seq);
  Run object_run = run_direct(record.prepared, fam, cfg);

  Run subject;
  subject.run_id = fresh_run_id();
  subject.subject = seq;
  subject.mechanism = object_run.mechanism;
  subject.mechanism.kind = MechanismKind::CompiledObject;
  subject.mechanism.machine.iface = fam.iface();
  subject.events = object_run.events;
  subject.status = object_run.status;
  subject.final_family = object_run.final_family;
  subject.provenance = Provenance{object_run.run_id, ProvenanceRelation::CompiledFrom};
  return CompiledObjectRun{std::move(subject), std::move(object_run)};
}

CompilationRecord compile_intermediate(const InstructionSequence& seq,
                                       const EncodingLayout& layout,
                                       const InterfaceSpec& iface) {
  if (seq.size() > layout.max_len) throw ProgramTooLong(seq.size(), layout.max_len);
  CompilationRecord object_record = compile_object(seq);

  bool representable = true;
  for (const Instruction& ins : object_record.prepared.instructions) {
    if (ins.is_jump() && (layout.operand_bits >= 32 ||
                          ins.offset >= (std::uint32_t(1) << layout.operand_bits))) {
      representable = false;
      break;
    }
  }

  CompilationRecord record;
  record.source = seq;
  record.compiler_tag = "C.intermediate.v1";
  if (representable) {
    record.prepared = object_record.prepared;
    record.position_map = object_record.position_map;
  } else {
    record.prepared = seq;  // optimized jumps exceed the operand width
    record.position_map.resize(seq.size());
    for (std::size_t i = 0; i < seq.size(); ++i) {
      record.position_map[i] = static_cast<std::uint32_t>(i + 1);
    }
  }
  record.output = encode_program(record.prepared, layout, iface);
  return record;
}

CompiledIntermediateRun run_compiled_intermediate(const InstructionSequence& seq,
                                                  const ServiceFamily& fam,
                                                  const EncodingLayout& layout,
                                                  const EngineConfig& cfg) {
  CompilationRecord record = compile_intermediate(seq, layout, fam.iface());
  InterpretedRun inner = run_interpreted(record.prepared, fam, layout, cfg);

  Run subject;
  subject.run_id = fresh_run_id();
  subject.subject = seq;
  subject.mechanism = inner.subject_run.mechanism;
  subject.mechanism.kind = MechanismKind::CompiledIntermediate;
  subject.events = inner.subject_run.events;
  subject.status = inner.subject_run.status;
  subject.final_family = inner.subject_run.final_family;
  subject.provenance =
      Provenance{inner.subject_run.run_id, ProvenanceRelation::CompiledFrom};
  return CompiledIntermediateRun{std::move(subject), std::move(inner.subject_run),
                                 std::move(inner.interpreter_run)};
}

}  // namespace pisie
