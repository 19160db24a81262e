#include "pisie/trace_io.hpp"

#include <fstream>
#include <sstream>

#include "pisie/errors.hpp"

namespace pisie {

using nlohmann::json;

nlohmann::json family_to_json(const FamilyFile& file) {
  json services = json::object();
  for (const auto& [name, svc] : file.spec.services) {
    json methods = json::array();
    for (Method m : svc.methods) methods.push_back(std::string(method_name(m)));
    services[name] = {{"kind", std::string(service_kind_name(svc.kind))},
                      {"methods", methods}};
  }
  json init = json::object();
  for (const auto& [name, value] : file.init) init[name] = value;
  return json{{"services", services}, {"init", init}};
}

FamilyFile family_from_json(const nlohmann::json& j) {
  FamilyFile file;
  for (const auto& [name, svc] : j.at("services").items()) {
    ServiceSpec spec;
    const std::string kind = svc.at("kind").get<std::string>();
    if (kind == "target") {
      spec.kind = ServiceKind::Target;
    } else if (kind == "cotarget") {
      spec.kind = ServiceKind::Cotarget;
    } else {
      throw std::runtime_error("service kind must be target or cotarget: " + kind);
    }
    for (const auto& m : svc.at("methods")) {
      auto method = method_from_name(m.get<std::string>());
      if (!method) throw std::runtime_error("unknown method: " + m.get<std::string>());
      spec.methods.push_back(*method);
    }
    if (spec.methods.empty())
      throw std::runtime_error("service needs at least one method: " + name);
    file.spec.services[name] = std::move(spec);
  }
  if (j.contains("init")) {
    for (const auto& [name, value] : j.at("init").items()) {
      file.init[name] = value.get<bool>();
    }
  }
  return file;
}

nlohmann::json layout_to_json(const EncodingLayout& layout) {
  return json{{"max_len", layout.max_len},
              {"opcode_bits", layout.opcode_bits},
              {"operand_bits", layout.operand_bits},
              {"prefixes",
               {{"mem", layout.mem_prefix},
                {"pc", layout.pc_prefix},
                {"scratch", layout.scratch_prefix}}}};
}

EncodingLayout layout_from_json(const nlohmann::json& j, const InterfaceSpec& iface) {
  std::string mem = "m", pc = "p", scratch = "s";
  if (j.contains("prefixes")) {
    const auto& p = j.at("prefixes");
    mem = p.value("mem", "m");
    pc = p.value("pc", "p");
    scratch = p.value("scratch", "s");
  }
  return build_layout(iface, j.at("max_len").get<std::uint64_t>(),
                      j.at("opcode_bits").get<std::uint32_t>(),
                      j.at("operand_bits").get<std::uint32_t>(), mem, pc, scratch);
}

nlohmann::json descriptor_to_json(const MechanismDescriptor& d) {
  json paging = {{"mode", d.flags.paging.mode == PagingMode::Hardware
                              ? "hardware"
                              : "code_controlled"}};
  if (d.flags.paging.mean_swap_interval) {
    paging["mean_swap_interval"] = *d.flags.paging.mean_swap_interval;
  } else {
    paging["mean_swap_interval"] = nullptr;
  }
  FamilyFile iface_file{d.machine.iface, {}};
  return json{{"kind", std::string(mechanism_kind_name(d.kind))},
              {"machine",
               {{"name", d.machine.name},
                {"max_loaded_len", d.machine.max_loaded_len},
                {"iface", family_to_json(iface_file)["services"]}}},
              {"flags",
               {{"pipelined", d.flags.pipelined},
                {"concurrent_threads", d.flags.concurrent_threads},
                {"managed", d.flags.managed},
                {"dedicated_hardware", d.flags.dedicated_hardware},
                {"paging", paging}}},
              {"uniform_certified", d.uniform_certified}};
}

MechanismDescriptor descriptor_from_json(const nlohmann::json& j) {
  MechanismDescriptor d;
  auto kind = mechanism_kind_from_name(j.at("kind").get<std::string>());
  if (!kind) throw std::runtime_error("unknown mechanism kind");
  d.kind = *kind;
  const auto& machine = j.at("machine");
  d.machine.name = machine.at("name").get<std::string>();
  d.machine.max_loaded_len = machine.at("max_loaded_len").get<std::uint64_t>();
  d.machine.iface = family_from_json(json{{"services", machine.at("iface")}}).spec;
  const auto& flags = j.at("flags");
  d.flags.pipelined = flags.at("pipelined").get<bool>();
  d.flags.concurrent_threads = flags.at("concurrent_threads").get<std::uint32_t>();
  d.flags.managed = flags.at("managed").get<bool>();
  d.flags.dedicated_hardware = flags.at("dedicated_hardware").get<bool>();
  const auto& paging = flags.at("paging");
  d.flags.paging.mode = paging.at("mode").get<std::string>() == "hardware"
                            ? PagingMode::Hardware
                            : PagingMode::CodeControlled;
  if (!paging.at("mean_swap_interval").is_null()) {
    d.flags.paging.mean_swap_interval = paging.at("mean_swap_interval").get<double>();
  }
  d.uniform_certified = j.at("uniform_certified").get<bool>();
  return d;
}

nlohmann::json run_to_json(const Run& run) {
  json events = json::array();
  for (const RunEvent& ev : run.events) {
    switch (ev.type) {
      case EventType::Action:
        events.push_back({{"i", ev.index},
                          {"ev", "action"},
                          {"focus", ev.focus},
                          {"method", std::string(method_name(ev.method))},
                          {"reply", ev.reply},
                          {"kind", std::string(service_kind_name(ev.kind))}});
        break;
      case EventType::PageSwap:
        events.push_back({{"ev", "page_swap"},
                          {"from", {ev.from_lo, ev.from_hi}},
                          {"to", {ev.to_lo, ev.to_hi}}});
        break;
      case EventType::Note:
        events.push_back({{"ev", "note"}, {"tag", ev.tag}});
        break;
    }
  }

  json status;
  switch (run.status.kind) {
    case StatusKind::Terminated:
      status = {{"kind", "terminated"},
                {"value", run.status.value ? json(*run.status.value) : json(nullptr)}};
      break;
    case StatusKind::Divergence:
      status = {{"kind", "divergence"},
                {"by", run.status.by == DivergenceBy::Fuel ? "fuel" : "cycle"}};
      break;
    case StatusKind::Fault:
      status = {{"kind", "fault"}, {"reason", run.status.fault_reason}};
      break;
  }

  json final_state = json::object();
  for (const auto& [name, value] : run.final_family.state()) final_state[name] = value;

  json provenance = nullptr;
  if (run.provenance) {
    provenance = {{"parent", run.provenance->parent_run_id},
                  {"relation", std::string(provenance_relation_name(
                                   run.provenance->relation))}};
  }

  return json{{"run_id", run.run_id},
              {"subject", render_program(run.subject)},
              {"mechanism", descriptor_to_json(run.mechanism)},
              {"events", events},
              {"status", status},
              {"final_state", final_state},
              {"provenance", provenance}};
}

Run run_from_json(const nlohmann::json& j) {
  Run run;
  run.run_id = j.at("run_id").get<std::string>();
  run.subject = parse_program(j.at("subject").get<std::string>());
  run.mechanism = descriptor_from_json(j.at("mechanism"));

  std::uint64_t index = 0;
  for (const auto& ev : j.at("events")) {
    ++index;
    const std::string type = ev.at("ev").get<std::string>();
    if (type == "action") {
      auto method = method_from_name(ev.at("method").get<std::string>());
      if (!method) throw std::runtime_error("unknown method in trace");
      run.events.push_back(RunEvent::action(
          index, ev.at("focus").get<std::string>(), *method,
          ev.at("reply").get<bool>(),
          ev.at("kind").get<std::string>() == "target" ? ServiceKind::Target
                                                       : ServiceKind::Cotarget));
    } else if (type == "page_swap") {
      run.events.push_back(RunEvent::page_swap(
          index, ev.at("from")[0].get<std::uint64_t>(),
          ev.at("from")[1].get<std::uint64_t>(), ev.at("to")[0].get<std::uint64_t>(),
          ev.at("to")[1].get<std::uint64_t>()));
    } else if (type == "note") {
      run.events.push_back(RunEvent::note(index, ev.at("tag").get<std::string>()));
    } else {
      throw std::runtime_error("unknown event type in trace: " + type);
    }
  }

  const auto& status = j.at("status");
  const std::string kind = status.at("kind").get<std::string>();
  if (kind == "terminated") {
    run.status = TerminationStatus::terminated(
        status.at("value").is_null() ? std::optional<bool>()
                                     : std::optional<bool>(status.at("value").get<bool>()));
  } else if (kind == "divergence") {
    run.status = TerminationStatus::divergence(
        status.at("by").get<std::string>() == "cycle" ? DivergenceBy::Cycle
                                                      : DivergenceBy::Fuel);
  } else if (kind == "fault") {
    run.status = TerminationStatus::fault(status.at("reason").get<std::string>());
  } else {
    throw std::runtime_error("unknown status kind in trace: " + kind);
  }

  std::map<std::string, bool> final_state;
  for (const auto& [name, value] : j.at("final_state").items()) {
    final_state[name] = value.get<bool>();
  }
  run.final_family = make_family(run.mechanism.machine.iface, final_state);

  if (!j.at("provenance").is_null()) {
    const auto& p = j.at("provenance");
    Provenance prov;
    prov.parent_run_id = p.at("parent").get<std::string>();
    prov.relation = p.at("relation").get<std::string>() == "compiled_from"
                        ? ProvenanceRelation::CompiledFrom
                        : ProvenanceRelation::PrimaryResultOf;
    run.provenance = prov;
  }
  return run;
}

nlohmann::json report_to_json(const std::string& run_id, const Classification& cls,
                              const ExecutionalityReport& exec,
                              const WellFoundedReport& wf) {
  return json{{"run_id", run_id},
              {"classification",
               {{"is_pisie", cls.is_pisie},
                {"is_dpisie", cls.is_dpisie},
                {"is_interpretation", cls.is_interpretation},
                {"is_execution", cls.is_execution},
                {"rationale", cls.rationale}}},
              {"executionality",
               {{"score", exec.score},
                {"positive", exec.positive_indicators},
                {"negative", exec.negative_indicators},
                {"dominated_by_negative", exec.dominated_by_negative}}},
              {"wellfounded", {{"ok", wf.ok}, {"violations", wf.violations}}}};
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << content;
}

nlohmann::json read_json_file(const std::string& path) {
  return json::parse(read_text_file(path));
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

}  // namespace pisie
