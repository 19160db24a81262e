#pragma once

// Runs are immutable progressions: an ordered event list, a termination
// status, the mechanism that produced them, and an optional provenance link
// to the run they derive from.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pisie/family.hpp"
#include "pisie/inseq.hpp"

namespace pisie {

enum class EventType : std::uint8_t { Action, PageSwap, Note };

struct RunEvent {
  EventType type = EventType::Action;
  std::uint64_t index = 0;  // ordinal within the progression, 1-based

  // action
  std::string focus;
  Method method = Method::Get;
  bool reply = false;
  ServiceKind kind = ServiceKind::Cotarget;

  // page swap: loaded window before and after, inclusive position ranges
  std::uint64_t from_lo = 0, from_hi = 0, to_lo = 0, to_hi = 0;

  // note
  std::string tag;

  static RunEvent action(std::uint64_t index, std::string focus, Method m, bool reply,
                         ServiceKind kind);
  static RunEvent page_swap(std::uint64_t index, std::uint64_t from_lo,
                            std::uint64_t from_hi, std::uint64_t to_lo,
                            std::uint64_t to_hi);
  static RunEvent note(std::uint64_t index, std::string tag);

  bool operator==(const RunEvent&) const = default;
};

enum class StatusKind : std::uint8_t { Terminated, Divergence, Fault };
enum class DivergenceBy : std::uint8_t { Fuel, Cycle };

struct TerminationStatus {
  StatusKind kind = StatusKind::Terminated;
  std::optional<bool> value;          // Terminated only; nullopt for ! / off-the-end
  DivergenceBy by = DivergenceBy::Fuel;  // Divergence only
  std::string fault_reason;           // Fault only

  static TerminationStatus terminated(std::optional<bool> value);
  static TerminationStatus divergence(DivergenceBy by);
  static TerminationStatus fault(std::string reason);

  bool is_terminated() const { return kind == StatusKind::Terminated; }
  bool is_divergence() const { return kind == StatusKind::Divergence; }
  bool is_fault() const { return kind == StatusKind::Fault; }
};

// Semantic status equality: kind and delivered value. The divergence
// detector and the fault text are diagnostics, not semantics.
bool same_status(const TerminationStatus& a, const TerminationStatus& b);

enum class MechanismKind : std::uint8_t {
  Direct,
  Interpreted,
  CompiledObject,
  CompiledIntermediate,
  JitFragments,
  Oracle,
  Manual,
  Simulation,
};

std::string_view mechanism_kind_name(MechanismKind k);
std::optional<MechanismKind> mechanism_kind_from_name(std::string_view name);

enum class PagingMode : std::uint8_t { Hardware, CodeControlled };

struct PagingFlags {
  PagingMode mode = PagingMode::Hardware;
  std::optional<double> mean_swap_interval;  // present iff paging occurred
  bool operator==(const PagingFlags&) const = default;
};

struct MechanismFlags {
  bool pipelined = false;
  std::uint32_t concurrent_threads = 1;
  bool managed = false;
  bool dedicated_hardware = false;
  PagingFlags paging;
  bool operator==(const MechanismFlags&) const = default;
};

struct MachineSpec {
  std::string name = "host-engine";
  std::uint64_t max_loaded_len = 1 << 20;
  InterfaceSpec iface;
  MechanismFlags flags;  // the machine's intrinsic traits, used by the scorer
  bool operator==(const MachineSpec&) const = default;
};

struct MechanismDescriptor {
  MechanismKind kind = MechanismKind::Direct;
  MachineSpec machine;
  MechanismFlags flags;
  bool uniform_certified = false;
  bool operator==(const MechanismDescriptor&) const = default;
};

enum class ProvenanceRelation : std::uint8_t { PrimaryResultOf, CompiledFrom };

std::string_view provenance_relation_name(ProvenanceRelation r);

struct Provenance {
  std::string parent_run_id;
  ProvenanceRelation relation = ProvenanceRelation::PrimaryResultOf;
  bool operator==(const Provenance&) const = default;
};

struct Run {
  std::string run_id;
  InstructionSequence subject;
  MechanismDescriptor mechanism;
  std::vector<RunEvent> events;
  TerminationStatus status;
  ServiceFamily final_family;
  std::optional<Provenance> provenance;
};

std::string fresh_run_id();

// Append-only store of runs keyed by run_id; callers serialize writes.
class ProvenanceStore {
 public:
  void add(Run run);
  const Run* find(std::string_view run_id) const;
  std::size_t size() const { return runs_.size(); }
  auto begin() const { return runs_.begin(); }
  auto end() const { return runs_.end(); }

 private:
  std::map<std::string, Run, std::less<>> runs_;
};

// ---- progressions as comparable traces -------------------------------

struct TraceEntry {
  std::string focus;
  Method method = Method::Get;
  bool reply = false;
  ServiceKind kind = ServiceKind::Cotarget;
  bool operator==(const TraceEntry&) const = default;
};

struct TargetProjection {
  std::vector<TraceEntry> actions;  // target actions only, in order
  TerminationStatus status;
};

// X!H: the boolean result of the run; nullopt marks "meaningless".
std::optional<bool> result_of(const Run& run);

// X•H: the effect the run had on its family.
const ServiceFamily& effect_of(const Run& run);

// Order-preserving restriction to target actions plus the status.
TargetProjection target_projection(const Run& run);

bool same_projection(const TargetProjection& a, const TargetProjection& b);

// All actions (both kinds) in order, without indices.
std::vector<TraceEntry> action_trace(const Run& run);

// Strict event equality including ordinals; for differential testing.
bool same_events(const Run& a, const Run& b);

// Semantic equivalence of two runs of the same program under finite fuel:
// equal statuses, and equal action traces — except that two divergent runs
// compare by agreement on their common prefix, since fuel cuts infinite
// traces at mechanism-dependent points.
bool trace_equivalent(const Run& a, const Run& b);

// The same comparison restricted to target actions.
bool target_equivalent(const Run& a, const Run& b);

}  // namespace pisie
