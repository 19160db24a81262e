#pragma once

// File formats: .fam.json families, .layout.json encoding layouts,
// .trace.json runs, .report.json classification reports.

#include <string>

#include "json.hpp"
#include "pisie/compile.hpp"
#include "pisie/mechanism.hpp"
#include "pisie/run.hpp"

namespace pisie {

struct FamilyFile {
  InterfaceSpec spec;
  std::map<std::string, bool> init;
};

nlohmann::json family_to_json(const FamilyFile& file);
FamilyFile family_from_json(const nlohmann::json& j);

nlohmann::json layout_to_json(const EncodingLayout& layout);
// The file stores dimensions and prefixes; the opcode table is canonical
// over the interface the layout is used with.
EncodingLayout layout_from_json(const nlohmann::json& j, const InterfaceSpec& iface);

nlohmann::json descriptor_to_json(const MechanismDescriptor& d);
MechanismDescriptor descriptor_from_json(const nlohmann::json& j);

nlohmann::json run_to_json(const Run& run);
Run run_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const std::string& run_id, const Classification& cls,
                              const ExecutionalityReport& exec,
                              const WellFoundedReport& wf);

// file helpers (throw std::runtime_error on IO failure)
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);
nlohmann::json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace pisie
