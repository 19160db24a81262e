// Reference semantics for differential testing. Instead of stepping a pc,
// the sequence is first unfolded into a behavior graph by thread extraction:
// jump chains are absorbed into the nodes, each node remembering how many
// dispatches the chain costs so fuel accounting matches the step engine
// exactly. The graph is then walked against the family.

#include <cstdint>
#include <vector>

#include "pisie/engine.hpp"

namespace pisie {

namespace {

enum class NodeKind : std::uint8_t {
  Action,
  HaltNone,     // terminator '!' reached
  HaltTrue,
  HaltFalse,
  FallOff,      // position beyond the end, no terminator dispatched
  Diverge,      // jump-only cycle
  FaultBefore,  // position before the start
  FaultAction,  // ill-formed basic action
};

struct Node {
  NodeKind kind = NodeKind::FallOff;
  std::uint64_t jump_cost = 0;  // dispatches absorbed before this node acts
  // action payload
  std::string focus;
  std::string method_text;
  Method method = Method::Get;
  ServiceKind svc_kind = ServiceKind::Cotarget;
  std::size_t svc = 0;
  Op form = Op::Plain;
  std::size_t next_on_true = 0;   // node table index
  std::size_t next_on_false = 0;
};

struct BehaviorGraph {
  std::vector<Node> nodes;  // index = pc (0 unused), plus synthetic leaves
  std::size_t entry = 1;
};

// Follow jumps from position pc until an action, a terminator, an edge of
// the sequence, or a revisited jump (a cycle).
Node extract_at(const InstructionSequence& seq, const ServiceFamily& fam,
                std::int64_t pc) {
  Node node;
  const std::int64_t len = static_cast<std::int64_t>(seq.size());
  std::vector<std::int64_t> chain;
  std::uint64_t cost = 0;
  for (;;) {
    if (pc < 1) {
      node.kind = NodeKind::FaultBefore;
      node.jump_cost = cost;
      return node;
    }
    if (pc > len) {
      node.kind = NodeKind::FallOff;
      node.jump_cost = cost;
      return node;
    }
    const Instruction& ins = seq.at(std::size_t(pc));
    switch (ins.op) {
      case Op::FwdJump:
      case Op::BwdJump: {
        if (ins.offset == 0) {
          node.kind = NodeKind::Diverge;
          node.jump_cost = cost;  // the self-loop itself diverges on dispatch
          return node;
        }
        for (std::int64_t p : chain) {
          if (p == pc) {
            node.kind = NodeKind::Diverge;
            node.jump_cost = cost;
            return node;
          }
        }
        chain.push_back(pc);
        ++cost;
        pc += ins.op == Op::FwdJump ? std::int64_t(ins.offset)
                                    : -std::int64_t(ins.offset);
        break;
      }
      case Op::Halt:
        node.kind = NodeKind::HaltNone;
        node.jump_cost = cost;
        return node;
      case Op::HaltTrue:
        node.kind = NodeKind::HaltTrue;
        node.jump_cost = cost;
        return node;
      case Op::HaltFalse:
        node.kind = NodeKind::HaltFalse;
        node.jump_cost = cost;
        return node;
      case Op::Plain:
      case Op::PosTest:
      case Op::NegTest: {
        node.jump_cost = cost;
        node.focus = ins.focus;
        node.method_text = ins.method;
        auto idx = fam.index_of(ins.focus);
        auto m = method_from_name(ins.method);
        if (!idx || !m || !fam.allows(*idx, *m)) {
          node.kind = NodeKind::FaultAction;
          return node;
        }
        node.kind = NodeKind::Action;
        node.svc = *idx;
        node.svc_kind = fam.kind_at(*idx);
        node.method = *m;
        node.form = ins.op;
        node.next_on_true = std::size_t(pc) + 1;
        node.next_on_false = std::size_t(pc) + (ins.op == Op::PosTest ? 2 : 1);
        if (ins.op == Op::NegTest) node.next_on_true = std::size_t(pc) + 2;
        if (ins.op == Op::Plain) node.next_on_false = node.next_on_true;
        return node;
      }
    }
  }
}

BehaviorGraph unfold(const InstructionSequence& seq, const ServiceFamily& fam) {
  BehaviorGraph graph;
  // two positions past the end can be reached by a skipped steering point
  graph.nodes.resize(seq.size() + 3);
  for (std::size_t pc = 1; pc < graph.nodes.size(); ++pc) {
    graph.nodes[pc] = extract_at(seq, fam, std::int64_t(pc));
  }
  return graph;
}

MechanismDescriptor oracle_descriptor(const ServiceFamily& fam) {
  MechanismDescriptor d;
  d.kind = MechanismKind::Oracle;
  d.machine.name = "host-engine";
  d.machine.iface = fam.iface();
  return d;
}

}  // namespace

Run oracle_run(const InstructionSequence& seq, const ServiceFamily& fam,
               std::uint64_t fuel) {
  ServiceFamily start = reset_cotargets(fam);
  BehaviorGraph graph = unfold(seq, start);
  std::vector<std::uint8_t> values = start.values();

  std::vector<RunEvent> events;
  TerminationStatus status = TerminationStatus::terminated(std::nullopt);
  std::uint64_t remaining = fuel;
  std::size_t at = graph.entry;

  for (;;) {
    // a steering point can land at len+2; anything beyond entered the table
    if (at >= graph.nodes.size()) {
      status = TerminationStatus::terminated(std::nullopt);
      break;
    }
    const Node& node = graph.nodes[at];
    switch (node.kind) {
      case NodeKind::FallOff:
        if (remaining < node.jump_cost) {
          status = TerminationStatus::divergence(DivergenceBy::Fuel);
        } else {
          status = TerminationStatus::terminated(std::nullopt);
        }
        goto done;
      case NodeKind::HaltNone:
      case NodeKind::HaltTrue:
      case NodeKind::HaltFalse:
        if (remaining < node.jump_cost + 1) {
          status = TerminationStatus::divergence(DivergenceBy::Fuel);
        } else if (node.kind == NodeKind::HaltNone) {
          status = TerminationStatus::terminated(std::nullopt);
        } else {
          status = TerminationStatus::terminated(node.kind == NodeKind::HaltTrue);
        }
        goto done;
      case NodeKind::Diverge:
        status = TerminationStatus::divergence(
            remaining > node.jump_cost ? DivergenceBy::Cycle : DivergenceBy::Fuel);
        goto done;
      case NodeKind::FaultBefore:
        if (remaining < node.jump_cost) {
          status = TerminationStatus::divergence(DivergenceBy::Fuel);
        } else {
          status = TerminationStatus::fault("pc before start of sequence");
        }
        goto done;
      case NodeKind::FaultAction:
        if (remaining < node.jump_cost + 1) {
          status = TerminationStatus::divergence(DivergenceBy::Fuel);
        } else if (!start.index_of(node.focus)) {
          status = TerminationStatus::fault("unknown focus: " + node.focus);
        } else {
          status = TerminationStatus::fault("unknown method " + node.method_text +
                                            " on service " + node.focus);
        }
        goto done;
      case NodeKind::Action: {
        if (remaining < node.jump_cost + 1) {
          status = TerminationStatus::divergence(DivergenceBy::Fuel);
          goto done;
        }
        remaining -= node.jump_cost + 1;
        bool reply;
        switch (node.method) {
          case Method::Get: reply = values[node.svc] != 0; break;
          case Method::SetTrue: values[node.svc] = 1; reply = true; break;
          case Method::SetFalse: values[node.svc] = 0; reply = false; break;
          default: reply = false; break;
        }
        events.push_back(RunEvent::action(events.size() + 1, node.focus, node.method,
                                          reply, node.svc_kind));
        at = reply ? node.next_on_true : node.next_on_false;
        break;
      }
    }
  }
done:

  Run run;
  run.run_id = fresh_run_id();
  run.subject = seq;
  run.mechanism = oracle_descriptor(start);
  run.events = std::move(events);
  run.status = status;
  run.final_family = start.with_values(std::move(values));
  return run;
}

}  // namespace pisie
