#pragma once

// The direct step engine and its differential-testing oracle. run_direct
// steps a sequence in operational-semantics order; oracle_run is a second,
// independently written implementation that first extracts the behavior
// tree of the sequence and then walks it against the family.

#include <cstdint>
#include <optional>

#include "pisie/run.hpp"

namespace pisie {

struct EngineConfig {
  std::uint64_t fuel = 100000;  // max number of instruction dispatches
  bool cycle_detection = false;
  std::optional<std::uint32_t> loaded_window;  // nullopt = whole program loaded
  PagingMode paging_mode = PagingMode::Hardware;
  bool simulation_mode = false;   // record target actions without applying them
  bool cotarget_reorder = false;  // step the canonically reordered program
};

// Directly put `seq` into effect over `fam`. Co-targets are reset before
// stepping. pc starts at 1; falling off either end of a window triggers a
// page swap when a loaded_window is configured; #0/\#0 diverge; pc > len
// terminates without a boolean; pc < 1 or an ill-formed basic action is a
// Fault status.
Run run_direct(const InstructionSequence& seq, const ServiceFamily& fam,
               const EngineConfig& cfg = {});

// Reference semantics via thread extraction: unfold the sequence into a
// behavior tree, then walk it. Shares no stepping code with run_direct.
Run oracle_run(const InstructionSequence& seq, const ServiceFamily& fam,
               std::uint64_t fuel = 100000);

// Canonically reorder adjacent plain co-target actions on distinct services
// inside straight-line windows (no jumps, tests, targets, terminators, and
// no jump landing inside the window), ascending by service name. Preserves
// the target-level trace and the final family for every start state.
InstructionSequence cotarget_reorder(const InstructionSequence& seq,
                                     const InterfaceSpec& iface);

}  // namespace pisie
