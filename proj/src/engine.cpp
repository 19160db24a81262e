#include "pisie/engine.hpp"

#include <algorithm>
#include <set>

namespace pisie {

namespace {

constexpr std::size_t kNoService = ~std::size_t(0);

struct ResolvedInst {
  Op op;
  std::size_t svc = kNoService;  // kNoService marks an unknown focus
  Method method = Method::Get;
  bool method_ok = false;
  std::uint32_t offset = 0;
};

std::vector<ResolvedInst> resolve(const InstructionSequence& seq,
                                  const ServiceFamily& fam) {
  std::vector<ResolvedInst> out;
  out.reserve(seq.size());
  for (const Instruction& ins : seq.instructions) {
    ResolvedInst r;
    r.op = ins.op;
    r.offset = ins.offset;
    if (ins.is_action()) {
      if (auto idx = fam.index_of(ins.focus)) {
        r.svc = *idx;
        if (auto m = method_from_name(ins.method); m && fam.allows(*idx, *m)) {
          r.method = *m;
          r.method_ok = true;
        }
      }
    }
    out.push_back(r);
  }
  return out;
}

// Large programs (generated interpreters, expanded expressions) are often
// run many times over families sharing one interface; re-resolving service
// names each run dwarfs the stepping itself, so recent resolutions are kept
// per thread.
struct ResolveCacheEntry {
  const void* meta = nullptr;
  std::vector<Instruction> source;
  std::vector<ResolvedInst> resolved;
};

constexpr std::size_t kResolveCacheMin = 64;
constexpr std::size_t kResolveCacheSlots = 4;

const std::vector<ResolvedInst>* resolve_cached(const InstructionSequence& seq,
                                                const ServiceFamily& fam,
                                                std::vector<ResolvedInst>* local) {
  if (seq.size() < kResolveCacheMin) {
    *local = resolve(seq, fam);
    return local;
  }
  thread_local std::vector<ResolveCacheEntry> cache;
  for (ResolveCacheEntry& entry : cache) {
    if (entry.meta == fam.meta_key() && entry.source == seq.instructions) {
      return &entry.resolved;
    }
  }
  ResolveCacheEntry entry;
  entry.meta = fam.meta_key();
  entry.source = seq.instructions;
  entry.resolved = resolve(seq, fam);
  if (cache.size() >= kResolveCacheSlots) cache.erase(cache.begin());
  cache.push_back(std::move(entry));
  return &cache.back().resolved;
}

MechanismDescriptor direct_descriptor(const ServiceFamily& fam, const EngineConfig& cfg,
                                      std::uint64_t steps, std::uint64_t swaps) {
  MechanismDescriptor d;
  d.kind = cfg.simulation_mode ? MechanismKind::Simulation : MechanismKind::Direct;
  d.machine.name = "host-engine";
  d.machine.max_loaded_len =
      cfg.loaded_window ? std::max<std::uint64_t>(*cfg.loaded_window, 1) : (1u << 20);
  d.machine.iface = fam.iface();
  d.flags.paging.mode = cfg.paging_mode;
  if (swaps > 0) {
    d.flags.paging.mean_swap_interval = double(steps) / double(swaps);
  }
  return d;
}

}  // namespace

Run run_direct(const InstructionSequence& seq, const ServiceFamily& fam,
               const EngineConfig& cfg) {
  std::optional<InstructionSequence> reordered;
  const InstructionSequence* program = &seq;
  if (cfg.cotarget_reorder) {
    reordered = cotarget_reorder(seq, fam.iface());
    program = &*reordered;
  }

  ServiceFamily start = reset_cotargets(fam);
  std::vector<std::uint8_t> values = start.values();
  std::vector<ResolvedInst> local_code;
  const std::vector<ResolvedInst>& code = *resolve_cached(*program, start, &local_code);
  const std::int64_t len = static_cast<std::int64_t>(code.size());

  std::vector<RunEvent> events;
  TerminationStatus status = TerminationStatus::terminated(std::nullopt);
  std::uint64_t steps = 0;
  std::uint64_t swaps = 0;
  std::int64_t pc = 1;

  const std::int64_t window =
      cfg.loaded_window ? std::max<std::int64_t>(*cfg.loaded_window, 1) : 0;
  const bool paging = cfg.loaded_window && window < len;
  std::int64_t win_lo = 1;
  std::int64_t win_hi = paging ? window : len;

  std::set<std::pair<std::int64_t, std::vector<std::uint8_t>>> seen;

  for (;;) {
    if (pc < 1) {
      status = TerminationStatus::fault("pc before start of sequence");
      break;
    }
    if (pc > len) {
      status = TerminationStatus::terminated(std::nullopt);
      break;
    }
    if (cfg.cycle_detection && !seen.insert({pc, values}).second) {
      status = TerminationStatus::divergence(DivergenceBy::Cycle);
      break;
    }
    if (steps >= cfg.fuel) {
      status = TerminationStatus::divergence(DivergenceBy::Fuel);
      break;
    }
    if (paging && (pc < win_lo || pc > win_hi)) {
      std::int64_t lo = pc - (window - 1) / 2;
      lo = std::min(lo, len - window + 1);
      lo = std::max<std::int64_t>(lo, 1);
      events.push_back(RunEvent::page_swap(events.size() + 1, win_lo, win_hi, lo,
                                           lo + window - 1));
      ++swaps;
      win_lo = lo;
      win_hi = lo + window - 1;
    }

    const ResolvedInst& ins = code[pc - 1];
    ++steps;
    switch (ins.op) {
      case Op::Halt:
        status = TerminationStatus::terminated(std::nullopt);
        goto done;
      case Op::HaltTrue:
        status = TerminationStatus::terminated(true);
        goto done;
      case Op::HaltFalse:
        status = TerminationStatus::terminated(false);
        goto done;
      case Op::FwdJump:
      case Op::BwdJump:
        if (ins.offset == 0) {
          status = TerminationStatus::divergence(DivergenceBy::Cycle);
          goto done;
        }
        pc += ins.op == Op::FwdJump ? std::int64_t(ins.offset)
                                    : -std::int64_t(ins.offset);
        break;
      case Op::Plain:
      case Op::PosTest:
      case Op::NegTest: {
        const Instruction& src = program->at(std::size_t(pc));
        if (ins.svc == kNoService) {
          status = TerminationStatus::fault("unknown focus: " + src.focus);
          goto done;
        }
        if (!ins.method_ok) {
          status = TerminationStatus::fault("unknown method " + src.method +
                                            " on service " + src.focus);
          goto done;
        }
        const ServiceKind kind = start.kind_at(ins.svc);
        const bool frozen = cfg.simulation_mode && kind == ServiceKind::Target;
        bool reply = false;
        switch (ins.method) {
          case Method::Get: reply = values[ins.svc] != 0; break;
          case Method::SetTrue:
            reply = true;
            if (!frozen) values[ins.svc] = 1;
            break;
          case Method::SetFalse:
            reply = false;
            if (!frozen) values[ins.svc] = 0;
            break;
        }
        events.push_back(
            RunEvent::action(events.size() + 1, src.focus, ins.method, reply, kind));
        if (ins.op == Op::Plain) {
          pc += 1;
        } else if (ins.op == Op::PosTest) {
          pc += reply ? 1 : 2;
        } else {
          pc += reply ? 2 : 1;
        }
        break;
      }
    }
  }
done:

  Run run;
  run.run_id = fresh_run_id();
  run.subject = seq;
  run.mechanism = direct_descriptor(start, cfg, steps, swaps);
  run.events = std::move(events);
  run.status = status;
  run.final_family = start.with_values(std::move(values));
  return run;
}

InstructionSequence cotarget_reorder(const InstructionSequence& seq,
                                     const InterfaceSpec& iface) {
  // positions control can enter from elsewhere: jump destinations and
  // steering-point skip destinations; reordering across them would change
  // what a run entering mid-window executes
  std::set<std::size_t> landing_sites;
  for (std::size_t pos = 1; pos <= seq.size(); ++pos) {
    const Instruction& ins = seq.at(pos);
    if (ins.op == Op::PosTest || ins.op == Op::NegTest) {
      landing_sites.insert(pos + 2);
      continue;
    }
    if (!ins.is_jump() || ins.offset == 0) continue;
    std::int64_t target = std::int64_t(pos) + (ins.op == Op::FwdJump
                                                   ? std::int64_t(ins.offset)
                                                   : -std::int64_t(ins.offset));
    if (target >= 1 && target <= std::int64_t(seq.size()))
      landing_sites.insert(std::size_t(target));
  }

  InstructionSequence out;
  out.name = seq.name;
  std::vector<Instruction> window;
  auto flush = [&] {
    std::stable_sort(window.begin(), window.end(),
                     [](const Instruction& a, const Instruction& b) {
                       return a.focus < b.focus;
                     });
    for (Instruction& ins : window) out.instructions.push_back(std::move(ins));
    window.clear();
  };

  for (std::size_t pos = 1; pos <= seq.size(); ++pos) {
    const Instruction& ins = seq.at(pos);
    const ServiceSpec* svc = ins.is_action() ? iface.find(ins.focus) : nullptr;
    const bool plain_cotarget =
        ins.op == Op::Plain && svc && svc->kind == ServiceKind::Cotarget;
    if (plain_cotarget && (window.empty() || !landing_sites.count(pos))) {
      window.push_back(ins);
      continue;
    }
    flush();
    if (plain_cotarget) {
      window.push_back(ins);  // jump target starts its own window
    } else {
      out.instructions.push_back(ins);
    }
  }
  flush();
  return out;
}

}  // namespace pisie
