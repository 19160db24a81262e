#include "pisie/interp.hpp"

#include <bit>
#include <mutex>
#include <set>
#include <stdexcept>

#include "pisie/errors.hpp"

namespace pisie {

OpcodeKey shape_of(const Instruction& ins) {
  if (ins.is_action()) return OpcodeKey{ins.op, ins.focus, ins.method};
  return OpcodeKey{ins.op, {}, {}};
}

namespace {

std::uint32_t bits_for_count(std::uint64_t count) {
  std::uint32_t bits = 0;
  while ((std::uint64_t(1) << bits) < count) ++bits;
  return bits;
}

std::map<OpcodeKey, std::uint32_t> canonical_table(const InterfaceSpec& iface,
                                                   std::uint32_t* padding_code) {
  std::map<OpcodeKey, std::uint32_t> table;
  std::uint32_t code = 0;
  *padding_code = code++;
  table[OpcodeKey{Op::Halt, {}, {}}] = code++;
  table[OpcodeKey{Op::HaltTrue, {}, {}}] = code++;
  table[OpcodeKey{Op::HaltFalse, {}, {}}] = code++;
  table[OpcodeKey{Op::FwdJump, {}, {}}] = code++;
  table[OpcodeKey{Op::BwdJump, {}, {}}] = code++;
  for (const auto& [name, svc] : iface.services) {
    for (Method m : svc.methods) {
      std::string method(method_name(m));
      table[OpcodeKey{Op::Plain, name, method}] = code++;
      table[OpcodeKey{Op::PosTest, name, method}] = code++;
      table[OpcodeKey{Op::NegTest, name, method}] = code++;
    }
  }
  return table;
}

}  // namespace

EncodingLayout default_layout(const InterfaceSpec& iface, std::uint64_t max_len) {
  EncodingLayout layout;
  layout.max_len = max_len;
  layout.opcode_table = canonical_table(iface, &layout.padding_code);
  layout.opcode_bits = bits_for_count(layout.opcode_table.size() + 1);
  layout.operand_bits = std::bit_width(max_len);  // operands 0..L representable
  return layout;
}

EncodingLayout build_layout(const InterfaceSpec& iface, std::uint64_t max_len,
                            std::uint32_t opcode_bits, std::uint32_t operand_bits,
                            std::string mem_prefix, std::string pc_prefix,
                            std::string scratch_prefix) {
  EncodingLayout layout;
  layout.max_len = max_len;
  layout.mem_prefix = std::move(mem_prefix);
  layout.pc_prefix = std::move(pc_prefix);
  layout.scratch_prefix = std::move(scratch_prefix);
  layout.opcode_table = canonical_table(iface, &layout.padding_code);
  layout.opcode_bits = opcode_bits;
  layout.operand_bits = operand_bits;
  if (opcode_bits >= 32 ||
      (std::uint64_t(1) << opcode_bits) < layout.opcode_table.size() + 1) {
    throw LayoutTooSmall(std::to_string(opcode_bits) + " opcode bits for " +
                         std::to_string(layout.opcode_table.size() + 1) + " shapes");
  }
  if (operand_bits >= 32 || (std::uint64_t(1) << operand_bits) < max_len) {
    throw LayoutTooSmall(std::to_string(operand_bits) + " operand bits for max_len " +
                         std::to_string(max_len));
  }
  return layout;
}

std::string mem_register_name(const EncodingLayout& layout, std::uint64_t slot,
                              std::uint32_t bit) {
  return layout.mem_prefix + std::to_string(slot) + "_" + std::to_string(bit);
}

std::string pc_register_name(const EncodingLayout& layout, std::uint32_t bit) {
  return layout.pc_prefix + std::to_string(bit);
}

std::uint32_t pc_bit_count(const EncodingLayout& layout) {
  // pc values 0..L, with L the off-the-end sentinel
  return std::max<std::uint32_t>(1, std::bit_width(layout.max_len));
}

namespace {

// One word per slot: opcode in the low bits, the jump operand above them.
std::vector<std::uint64_t> encode_slot_words(const InstructionSequence& seq,
                                             const EncodingLayout& layout) {
  if (seq.size() > layout.max_len) throw ProgramTooLong(seq.size(), layout.max_len);
  if ((std::uint64_t(1) << layout.opcode_bits) < layout.opcode_table.size() + 1) {
    throw LayoutTooSmall("opcode table exceeds opcode bits");
  }
  std::vector<std::uint64_t> words(layout.max_len, layout.padding_code);
  for (std::uint64_t slot = 1; slot <= seq.size(); ++slot) {
    const Instruction& ins = seq.at(slot);
    auto it = layout.opcode_table.find(shape_of(ins));
    if (it == layout.opcode_table.end()) {
      throw UnencodableInstruction(render_instruction(ins));
    }
    std::uint64_t word = it->second;
    if (ins.is_jump()) {
      if (layout.operand_bits >= 64 ||
          std::uint64_t(ins.offset) >= (std::uint64_t(1) << layout.operand_bits)) {
        throw UnencodableInstruction(render_instruction(ins) + " (operand " +
                                     std::to_string(ins.offset) + " needs more bits)");
      }
      word |= std::uint64_t(ins.offset) << layout.opcode_bits;
    }
    words[slot - 1] = word;
  }
  return words;
}

}  // namespace

ProgramEncoding encode_program(const InstructionSequence& seq,
                               const EncodingLayout& layout,
                               const InterfaceSpec& iface) {
  (void)iface;  // shapes come from the layout's table, built over the interface
  const std::vector<std::uint64_t> words = encode_slot_words(seq, layout);

  ProgramEncoding enc;
  enc.layout = layout;
  const std::uint32_t slot_bits = layout.opcode_bits + layout.operand_bits;
  for (std::uint64_t slot = 1; slot <= layout.max_len; ++slot) {
    for (std::uint32_t bit = 0; bit < slot_bits; ++bit) {
      enc.register_values[mem_register_name(layout, slot, bit)] =
          ((words[slot - 1] >> bit) & 1) != 0;
    }
  }
  return enc;
}

std::pair<InstructionSequence, std::size_t> decode_program(const ProgramEncoding& enc) {
  const EncodingLayout& layout = enc.layout;
  std::map<std::uint32_t, OpcodeKey> reverse;
  for (const auto& [key, code] : layout.opcode_table) reverse[code] = key;

  InstructionSequence seq;
  std::size_t padding = 0;
  for (std::uint64_t slot = 1; slot <= layout.max_len; ++slot) {
    std::uint64_t word = 0;
    const std::uint32_t slot_bits = layout.opcode_bits + layout.operand_bits;
    for (std::uint32_t bit = 0; bit < slot_bits; ++bit) {
      auto it = enc.register_values.find(mem_register_name(layout, slot, bit));
      if (it != enc.register_values.end() && it->second) word |= std::uint64_t(1) << bit;
    }
    const auto code = static_cast<std::uint32_t>(
        word & ((std::uint64_t(1) << layout.opcode_bits) - 1));
    if (code == layout.padding_code) {
      ++padding;
      continue;
    }
    auto it = reverse.find(code);
    if (it == reverse.end()) throw UnencodableInstruction("opcode " + std::to_string(code));
    Instruction ins;
    ins.op = it->second.op;
    ins.focus = it->second.focus;
    ins.method = it->second.method;
    if (ins.is_jump()) {
      ins.offset = static_cast<std::uint32_t>(word >> layout.opcode_bits);
    }
    seq.instructions.push_back(std::move(ins));
  }
  return {std::move(seq), padding};
}

InterfaceSpec extended_interface(const InterfaceSpec& iface,
                                 const EncodingLayout& layout) {
  InterfaceSpec ext = iface;
  auto add = [&](const std::string& name) {
    if (iface.has_service(name)) {
      throw std::invalid_argument("subject service collides with interpreter register: " +
                                  name);
    }
    ext.services[name] = all_methods(ServiceKind::Cotarget);
  };
  const std::uint32_t slot_bits = layout.opcode_bits + layout.operand_bits;
  for (std::uint64_t slot = 1; slot <= layout.max_len; ++slot) {
    for (std::uint32_t bit = 0; bit < slot_bits; ++bit) {
      add(mem_register_name(layout, slot, bit));
    }
  }
  for (std::uint32_t bit = 0; bit < pc_bit_count(layout); ++bit) {
    add(pc_register_name(layout, bit));
  }
  return ext;
}

// ---- generation -------------------------------------------------------

namespace {

// Relative jumps are awkward to emit by hand; blocks are laid out with
// labels and resolved in one pass at the end.
class Assembler {
 public:
  void emit(Instruction ins) { units_.push_back({false, std::move(ins), {}}); }
  void emit_jump(std::string label) { units_.push_back({true, {}, std::move(label)}); }
  void bind(const std::string& label) {
    if (!labels_.emplace(label, units_.size()).second) {
      throw std::logic_error("label bound twice: " + label);
    }
  }

  InstructionSequence assemble() {
    InstructionSequence seq;
    seq.instructions.reserve(units_.size());
    for (std::size_t i = 0; i < units_.size(); ++i) {
      const Unit& u = units_[i];
      if (!u.is_jump) {
        seq.instructions.push_back(u.ins);
        continue;
      }
      auto it = labels_.find(u.label);
      if (it == labels_.end()) throw std::logic_error("unbound label: " + u.label);
      const std::size_t target = it->second;
      if (target >= i) {
        seq.instructions.push_back(
            Instruction::fwd_jump(static_cast<std::uint32_t>(target - i)));
      } else {
        seq.instructions.push_back(
            Instruction::bwd_jump(static_cast<std::uint32_t>(i - target)));
      }
    }
    return seq;
  }

 private:
  struct Unit {
    bool is_jump;
    Instruction ins;
    std::string label;
  };
  std::vector<Unit> units_;
  std::map<std::string, std::size_t> labels_;
};

struct Generator {
  const InterfaceSpec& iface;
  const EncodingLayout& layout;
  std::uint32_t pc_bits;
  std::map<std::uint32_t, OpcodeKey> reverse;
  Assembler out;
  std::uint64_t next_label = 0;

  std::string fresh(const char* stem) {
    return std::string(stem) + "$" + std::to_string(next_label++);
  }

  static std::string handler_label(const OpcodeKey& key) {
    const char* form = key.op == Op::Plain ? "plain" : key.op == Op::PosTest ? "pos" : "neg";
    return std::string("h_") + form + "_" + key.focus + "." + key.method;
  }

  void emit_pos_test(const std::string& reg) {
    out.emit(Instruction::pos_test(reg, "get"));
  }

  // p-registers := value, then back to the fetch loop
  void emit_store_pc_and_loop(std::uint64_t value) {
    for (std::uint32_t bit = 0; bit < pc_bits; ++bit) {
      const std::string reg = pc_register_name(layout, bit);
      out.emit(((value >> bit) & 1) ? Instruction::plain(reg, "set:t")
                                    : Instruction::plain(reg, "set:f"));
    }
    out.emit_jump("loop");
  }

  // Decision tree over registers regs[hi..0], MSB first. At each leaf the
  // accumulated value is passed to `leaf`. `prune` may map a whole value
  // range [lo, hi] to a single leaf body; return false to keep splitting.
  template <typename Leaf, typename Prune>
  void emit_tree(const std::vector<std::string>& regs, int bit, std::uint64_t prefix,
                 Leaf&& leaf, Prune&& prune) {
    const std::uint64_t lo = prefix;
    const std::uint64_t hi = prefix + ((bit < 0) ? 0 : ((std::uint64_t(1) << (bit + 1)) - 1));
    if (prune(lo, hi)) return;
    if (bit < 0) {
      leaf(prefix);
      return;
    }
    const std::string t = fresh("t");
    const std::string f = fresh("f");
    emit_pos_test(regs[std::size_t(bit)]);
    out.emit_jump(t);
    out.emit_jump(f);
    out.bind(t);
    emit_tree(regs, bit - 1, prefix | (std::uint64_t(1) << bit), leaf, prune);
    out.bind(f);
    emit_tree(regs, bit - 1, prefix, leaf, prune);
  }

  void emit_jump_leaf(std::uint64_t slot, Op op, std::uint64_t operand) {
    if (operand == 0) {
      out.emit(Instruction::fwd_jump(0));  // subject self-loop: diverge in place
      return;
    }
    if (op == Op::BwdJump && operand >= slot) {
      out.emit(Instruction::halt());  // below position 1; unreachable for valid subjects
      return;
    }
    const std::uint64_t target =
        op == Op::FwdJump ? slot + operand : slot - operand;  // 1-based subject position
    const std::uint64_t pc_value = std::min(target - 1, layout.max_len);
    emit_store_pc_and_loop(pc_value);
  }

  void emit_slot(std::uint64_t slot) {
    std::vector<std::string> op_regs;
    for (std::uint32_t bit = 0; bit < layout.opcode_bits; ++bit) {
      op_regs.push_back(mem_register_name(layout, slot, bit));
    }
    std::vector<std::string> arg_regs;
    for (std::uint32_t bit = 0; bit < layout.operand_bits; ++bit) {
      arg_regs.push_back(mem_register_name(layout, slot, layout.opcode_bits + bit));
    }

    auto unused_range = [&](std::uint64_t lo, std::uint64_t hi) {
      auto it = reverse.lower_bound(static_cast<std::uint32_t>(lo));
      if (it != reverse.end() && it->first <= hi) return false;
      return true;  // no decodable opcode in range: behaves like padding
    };

    emit_tree(
        op_regs, int(layout.opcode_bits) - 1, 0,
        [&](std::uint64_t code) {
          auto it = reverse.find(static_cast<std::uint32_t>(code));
          if (it == reverse.end()) {
            out.emit(Instruction::halt());  // padding or unused code: off the program
            return;
          }
          const OpcodeKey& key = it->second;
          switch (key.op) {
            case Op::Halt: out.emit(Instruction::halt()); break;
            case Op::HaltTrue: out.emit(Instruction::halt_true()); break;
            case Op::HaltFalse: out.emit(Instruction::halt_false()); break;
            case Op::FwdJump:
            case Op::BwdJump:
              emit_tree(
                  arg_regs, int(layout.operand_bits) - 1, 0,
                  [&](std::uint64_t operand) { emit_jump_leaf(slot, key.op, operand); },
                  [](std::uint64_t, std::uint64_t) { return false; });
              break;
            default: out.emit_jump(handler_label(key)); break;
          }
        },
        [&](std::uint64_t lo, std::uint64_t hi) {
          if (!unused_range(lo, hi)) return false;
          out.emit(Instruction::halt());
          return true;
        });
  }

  void emit_handlers() {
    for (const auto& [key, code] : layout.opcode_table) {
      (void)code;
      if (key.op != Op::Plain && key.op != Op::PosTest && key.op != Op::NegTest) continue;
      out.bind(handler_label(key));
      out.emit(Instruction{key.op, key.focus, key.method, 0});
      if (key.op == Op::Plain) {
        out.emit_jump("inc1");
      } else {
        // +a: true runs the next instruction; -a: false does. Either way the
        // first jump is the advance-by-1 arm and the second the skip arm.
        out.emit_jump("inc1");
        out.emit_jump("inc2");
      }
    }
  }

  void emit_incrementers() {
    out.bind("inc1");
    for (std::uint32_t bit = 0; bit < pc_bits; ++bit) {
      if (bit == 1) out.bind("inc2");
      emit_pos_test(pc_register_name(layout, bit));
      const std::string carry = fresh("carry");
      out.emit_jump(carry);
      out.emit_jump("fin" + std::to_string(bit));
      out.bind(carry);
      out.emit(Instruction::plain(pc_register_name(layout, bit), "set:f"));
      // fall through into the next bit's block, or into the clamp
    }
    if (pc_bits == 1) out.bind("inc2");
    // carry out of the top bit: clamp the pc to the off-the-end sentinel
    emit_store_pc_and_loop(layout.max_len);
    for (std::uint32_t bit = 0; bit < pc_bits; ++bit) {
      out.bind("fin" + std::to_string(bit));
      out.emit(Instruction::plain(pc_register_name(layout, bit), "set:t"));
      out.emit_jump("loop");
    }
  }

  InstructionSequence generate() {
    for (const auto& [key, code] : layout.opcode_table) reverse[code] = key;

    out.bind("loop");
    std::vector<std::string> pc_regs;
    for (std::uint32_t bit = 0; bit < pc_bits; ++bit) {
      pc_regs.push_back(pc_register_name(layout, bit));
    }
    emit_tree(
        pc_regs, int(pc_bits) - 1, 0,
        [&](std::uint64_t pc_value) {
          out.emit_jump("slot" + std::to_string(pc_value + 1));
        },
        [&](std::uint64_t lo, std::uint64_t hi) {
          (void)hi;
          if (lo < layout.max_len) return false;
          out.emit(Instruction::halt());  // pc at or past the sentinel
          return true;
        });

    for (std::uint64_t slot = 1; slot <= layout.max_len; ++slot) {
      out.bind("slot" + std::to_string(slot));
      emit_slot(slot);
    }
    emit_handlers();
    emit_incrementers();

    InstructionSequence seq = out.assemble();
    seq.name = "interpreter-L" + std::to_string(layout.max_len);
    return seq;
  }
};

}  // namespace

namespace {

std::string iface_layout_key(const InterfaceSpec& iface, const EncodingLayout& layout) {
  std::string key;
  for (const auto& [name, svc] : iface.services) {
    key += name;
    key += svc.kind == ServiceKind::Target ? 'T' : 'C';
    for (Method m : svc.methods) key += char('0' + static_cast<int>(m));
    key += ';';
  }
  key += '\x1f';
  key += std::to_string(layout.max_len) + ":" + std::to_string(layout.opcode_bits) +
         ":" + std::to_string(layout.operand_bits) + ":" + layout.mem_prefix + ":" +
         layout.pc_prefix;
  key += '\x1f';
  for (const auto& [shape, code] : layout.opcode_table) {
    key += std::to_string(static_cast<int>(shape.op)) + shape.focus + "." +
           shape.method + "=" + std::to_string(code) + ";";
  }
  key += "pad=" + std::to_string(layout.padding_code);
  return key;
}

}  // namespace

InstructionSequence generate_interpreter(const InterfaceSpec& iface,
                                         const EncodingLayout& layout) {
  if ((std::uint64_t(1) << layout.opcode_bits) < layout.opcode_table.size() + 1) {
    throw LayoutTooSmall("opcode table exceeds opcode bits");
  }
  if ((std::uint64_t(1) << layout.operand_bits) < layout.max_len) {
    throw LayoutTooSmall("operand bits cannot address max_len");
  }
  extended_interface(iface, layout);  // register-name collision check

  // generation is pure in (iface, layout); repeated requests are served
  // from a cache
  static std::mutex memo_mutex;
  static std::map<std::string, InstructionSequence> memo;
  const std::string key = iface_layout_key(iface, layout);
  {
    std::lock_guard<std::mutex> lock(memo_mutex);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
  }
  Generator gen{iface, layout, pc_bit_count(layout), {}, {}, 0};
  InstructionSequence result = gen.generate();
  std::lock_guard<std::mutex> lock(memo_mutex);
  return memo.emplace(key, std::move(result)).first->second;
}

// ---- running ----------------------------------------------------------

namespace {

// The extended family's shape depends only on (iface, layout); caching a
// prototype lets repeated interpreted runs share one interface metadata and
// write the loaded program image straight into a value vector.
struct ExtendedPrototype {
  ServiceFamily proto;  // all registers false
  std::vector<std::vector<std::size_t>> mem_index;  // [slot-1][bit] -> family index
  std::vector<std::size_t> subject_index;           // subject order -> family index
};

std::shared_ptr<const ExtendedPrototype> extended_prototype(
    const InterfaceSpec& iface, const EncodingLayout& layout) {
  static std::mutex mu;
  static std::map<std::string, std::shared_ptr<const ExtendedPrototype>> cache;
  const std::string key = iface_layout_key(iface, layout);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }

  auto built = std::make_shared<ExtendedPrototype>();
  built->proto = make_family(extended_interface(iface, layout));
  const std::uint32_t slot_bits = layout.opcode_bits + layout.operand_bits;
  for (std::uint64_t slot = 1; slot <= layout.max_len; ++slot) {
    std::vector<std::size_t> bits;
    for (std::uint32_t bit = 0; bit < slot_bits; ++bit) {
      bits.push_back(*built->proto.index_of(mem_register_name(layout, slot, bit)));
    }
    built->mem_index.push_back(std::move(bits));
  }
  for (const auto& [name, svc] : iface.services) {
    (void)svc;
    built->subject_index.push_back(*built->proto.index_of(name));
  }

  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(key, std::move(built)).first->second;
}

}  // namespace

InterpretedRun run_interpreted(const InstructionSequence& seq, const ServiceFamily& fam,
                               const EncodingLayout& layout, const EngineConfig& cfg) {
  return run_interpreted_with(generate_interpreter(fam.iface(), layout), seq, fam,
                              layout, cfg);
}

InterpretedRun run_interpreted_with(const InstructionSequence& interpreter,
                                    const InstructionSequence& seq,
                                    const ServiceFamily& fam,
                                    const EncodingLayout& layout,
                                    const EngineConfig& cfg) {
  if (seq.size() > layout.max_len) throw ProgramTooLong(seq.size(), layout.max_len);
  const std::vector<std::uint64_t> words = encode_slot_words(seq, layout);
  std::shared_ptr<const ExtendedPrototype> ext = extended_prototype(fam.iface(), layout);

  std::vector<std::uint8_t> init(ext->proto.service_count(), 0);
  const std::uint32_t slot_bits = layout.opcode_bits + layout.operand_bits;
  for (std::uint64_t slot = 1; slot <= layout.max_len; ++slot) {
    for (std::uint32_t bit = 0; bit < slot_bits; ++bit) {
      init[ext->mem_index[slot - 1][bit]] = (words[slot - 1] >> bit) & 1;
    }
  }
  for (std::size_t i = 0; i < fam.service_count(); ++i) {
    init[ext->subject_index[i]] = fam.kind_at(i) == ServiceKind::Target
                                      ? fam.value_at(i)
                                      : fam.initial_at(i);
  }
  ServiceFamily ext_fam = ext->proto.reinitialized(std::move(init));

  Run interpreter_run = run_direct(interpreter, ext_fam, cfg);

  Run subject;
  subject.run_id = fresh_run_id();
  subject.subject = seq;
  subject.mechanism.kind = MechanismKind::Interpreted;
  subject.mechanism.machine.name = interpreter_run.mechanism.machine.name;
  subject.mechanism.machine.iface = fam.iface();
  subject.mechanism.uniform_certified =
      interpreter_certified(interpreter_cert_key(interpreter, fam.iface(), layout));
  subject.status = interpreter_run.status;
  subject.provenance = Provenance{interpreter_run.run_id,
                                  ProvenanceRelation::PrimaryResultOf};

  for (const RunEvent& ev : interpreter_run.events) {
    if (ev.type != EventType::Action) continue;
    if (!fam.iface().has_service(ev.focus)) continue;  // interpreter bookkeeping
    subject.events.push_back(
        RunEvent::action(subject.events.size() + 1, ev.focus, ev.method, ev.reply,
                         ev.kind));
  }

  std::vector<std::uint8_t> final_values(fam.service_count());
  const ServiceFamily& ext_final = interpreter_run.final_family;
  for (std::size_t i = 0; i < fam.service_count(); ++i) {
    final_values[i] = ext_final.state_of(fam.service_name(i)) ? 1 : 0;
  }
  subject.final_family = reset_cotargets(fam).with_values(std::move(final_values));

  return InterpretedRun{std::move(subject), std::move(interpreter_run)};
}

// ---- certification registry -------------------------------------------

namespace {
std::mutex cert_mutex;
std::set<std::string>& cert_set() {
  static std::set<std::string> s;
  return s;
}
}  // namespace

std::string interpreter_cert_key(const InstructionSequence& interpreter,
                                 const InterfaceSpec& iface,
                                 const EncodingLayout& layout) {
  std::string key = render_program(interpreter);
  key += '\x1f';
  for (const auto& [name, svc] : iface.services) {
    key += name;
    key += svc.kind == ServiceKind::Target ? 'T' : 'C';
    for (Method m : svc.methods) key += char('0' + static_cast<int>(m));
    key += ';';
  }
  key += '\x1f';
  key += std::to_string(layout.max_len) + ":" + std::to_string(layout.opcode_bits) +
         ":" + std::to_string(layout.operand_bits) + ":" + layout.mem_prefix + ":" +
         layout.pc_prefix;
  return key;
}

bool interpreter_certified(const std::string& key) {
  std::lock_guard<std::mutex> lock(cert_mutex);
  return cert_set().count(key) > 0;
}

void mark_interpreter_certified(const std::string& key) {
  std::lock_guard<std::mutex> lock(cert_mutex);
  cert_set().insert(key);
}

}  // namespace pisie
