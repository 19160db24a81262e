#include "pisie/run.hpp"

#include <atomic>
#include <random>

namespace pisie {

RunEvent RunEvent::action(std::uint64_t index, std::string focus, Method m, bool reply,
                          ServiceKind kind) {
  RunEvent ev;
  ev.type = EventType::Action;
  ev.index = index;
  ev.focus = std::move(focus);
  ev.method = m;
  ev.reply = reply;
  ev.kind = kind;
  return ev;
}

RunEvent RunEvent::page_swap(std::uint64_t index, std::uint64_t from_lo,
                             std::uint64_t from_hi, std::uint64_t to_lo,
                             std::uint64_t to_hi) {
  RunEvent ev;
  ev.type = EventType::PageSwap;
  ev.index = index;
  ev.from_lo = from_lo;
  ev.from_hi = from_hi;
  ev.to_lo = to_lo;
  ev.to_hi = to_hi;
  return ev;
}

RunEvent RunEvent::note(std::uint64_t index, std::string tag) {
  RunEvent ev;
  ev.type = EventType::Note;
  ev.index = index;
  ev.tag = std::move(tag);
  return ev;
}

TerminationStatus TerminationStatus::terminated(std::optional<bool> value) {
  TerminationStatus s;
  s.kind = StatusKind::Terminated;
  s.value = value;
  return s;
}

TerminationStatus TerminationStatus::divergence(DivergenceBy by) {
  TerminationStatus s;
  s.kind = StatusKind::Divergence;
  s.by = by;
  return s;
}

TerminationStatus TerminationStatus::fault(std::string reason) {
  TerminationStatus s;
  s.kind = StatusKind::Fault;
  s.fault_reason = std::move(reason);
  return s;
}

bool same_status(const TerminationStatus& a, const TerminationStatus& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == StatusKind::Terminated) return a.value == b.value;
  return true;
}

std::string_view mechanism_kind_name(MechanismKind k) {
  switch (k) {
    case MechanismKind::Direct: return "direct";
    case MechanismKind::Interpreted: return "interpreted";
    case MechanismKind::CompiledObject: return "compiled_object";
    case MechanismKind::CompiledIntermediate: return "compiled_intermediate";
    case MechanismKind::JitFragments: return "jit_fragments";
    case MechanismKind::Oracle: return "oracle";
    case MechanismKind::Manual: return "manual";
    case MechanismKind::Simulation: return "simulation";
  }
  return "?";
}

std::optional<MechanismKind> mechanism_kind_from_name(std::string_view name) {
  for (int i = 0; i <= static_cast<int>(MechanismKind::Simulation); ++i) {
    auto k = static_cast<MechanismKind>(i);
    if (mechanism_kind_name(k) == name) return k;
  }
  return std::nullopt;
}

std::string_view provenance_relation_name(ProvenanceRelation r) {
  return r == ProvenanceRelation::PrimaryResultOf ? "primary_result_of"
                                                  : "compiled_from";
}

std::string fresh_run_id() {
  static const std::uint64_t session = [] {
    std::random_device rd;
    return (std::uint64_t(rd()) << 32) ^ rd();
  }();
  static std::atomic<std::uint64_t> counter{0};
  char buf[64];
  std::snprintf(buf, sizeof(buf), "r%08llx-%llu",
                static_cast<unsigned long long>(session & 0xffffffffu),
                static_cast<unsigned long long>(++counter));
  return buf;
}

void ProvenanceStore::add(Run run) {
  std::string id = run.run_id;
  runs_.insert_or_assign(std::move(id), std::move(run));
}

const Run* ProvenanceStore::find(std::string_view run_id) const {
  auto it = runs_.find(run_id);
  return it == runs_.end() ? nullptr : &it->second;
}

std::optional<bool> result_of(const Run& run) {
  if (run.status.kind == StatusKind::Terminated && run.status.value.has_value())
    return run.status.value;
  return std::nullopt;
}

const ServiceFamily& effect_of(const Run& run) { return run.final_family; }

TargetProjection target_projection(const Run& run) {
  TargetProjection out;
  out.status = run.status;
  for (const RunEvent& ev : run.events) {
    if (ev.type == EventType::Action && ev.kind == ServiceKind::Target) {
      out.actions.push_back({ev.focus, ev.method, ev.reply, ev.kind});
    }
  }
  return out;
}

bool same_projection(const TargetProjection& a, const TargetProjection& b) {
  return same_status(a.status, b.status) && a.actions == b.actions;
}

std::vector<TraceEntry> action_trace(const Run& run) {
  std::vector<TraceEntry> out;
  for (const RunEvent& ev : run.events) {
    if (ev.type == EventType::Action)
      out.push_back({ev.focus, ev.method, ev.reply, ev.kind});
  }
  return out;
}

bool same_events(const Run& a, const Run& b) { return a.events == b.events; }

namespace {

bool traces_agree(const std::vector<TraceEntry>& a, const std::vector<TraceEntry>& b,
                  bool prefix_ok) {
  if (!prefix_ok) return a == b;
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (!(a[i] == b[i])) return false;
  }
  return true;
}

}  // namespace

bool trace_equivalent(const Run& a, const Run& b) {
  if (!same_status(a.status, b.status)) return false;
  bool both_divergent = a.status.is_divergence() && b.status.is_divergence();
  return traces_agree(action_trace(a), action_trace(b), both_divergent);
}

bool target_equivalent(const Run& a, const Run& b) {
  TargetProjection pa = target_projection(a);
  TargetProjection pb = target_projection(b);
  if (!same_status(pa.status, pb.status)) return false;
  bool both_divergent = pa.status.is_divergence() && pb.status.is_divergence();
  return traces_agree(pa.actions, pb.actions, both_divergent);
}

}  // namespace pisie
