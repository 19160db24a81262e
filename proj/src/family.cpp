#include "pisie/family.hpp"

#include <algorithm>
#include <stdexcept>

#include "pisie/errors.hpp"

namespace pisie {

std::string_view method_name(Method m) {
  switch (m) {
    case Method::Get: return "get";
    case Method::SetTrue: return "set:t";
    case Method::SetFalse: return "set:f";
  }
  return "?";
}

std::optional<Method> method_from_name(std::string_view name) {
  if (name == "get") return Method::Get;
  if (name == "set:t") return Method::SetTrue;
  if (name == "set:f") return Method::SetFalse;
  return std::nullopt;
}

std::string_view service_kind_name(ServiceKind k) {
  return k == ServiceKind::Target ? "target" : "cotarget";
}

bool ServiceSpec::allows(Method m) const {
  return std::find(methods.begin(), methods.end(), m) != methods.end();
}

ServiceSpec all_methods(ServiceKind kind) {
  return ServiceSpec{kind, {Method::Get, Method::SetTrue, Method::SetFalse}};
}

bool InterfaceSpec::has_service(std::string_view name) const {
  return services.find(name) != services.end();
}

const ServiceSpec* InterfaceSpec::find(std::string_view name) const {
  auto it = services.find(name);
  return it == services.end() ? nullptr : &it->second;
}

const InterfaceSpec& ServiceFamily::iface() const {
  static const InterfaceSpec empty;
  return meta_ ? meta_->spec : empty;
}

std::size_t ServiceFamily::service_count() const { return values_.size(); }

const std::string& ServiceFamily::service_name(std::size_t i) const {
  return meta_->names[i];
}

ServiceKind ServiceFamily::kind_at(std::size_t i) const { return meta_->kinds[i]; }

bool ServiceFamily::allows(std::size_t i, Method m) const {
  return (meta_->method_mask[i] >> static_cast<unsigned>(m)) & 1u;
}

std::optional<std::size_t> ServiceFamily::index_of(std::string_view name) const {
  if (!meta_) return std::nullopt;
  auto it = std::lower_bound(meta_->names.begin(), meta_->names.end(), name);
  if (it == meta_->names.end() || *it != name) return std::nullopt;
  return static_cast<std::size_t>(it - meta_->names.begin());
}

bool ServiceFamily::state_of(std::string_view name) const {
  auto i = index_of(name);
  if (!i) throw UnknownService(std::string(name));
  return value_at(*i);
}

std::map<std::string, bool> ServiceFamily::state() const {
  std::map<std::string, bool> out;
  for (std::size_t i = 0; i < values_.size(); ++i) out[meta_->names[i]] = value_at(i);
  return out;
}

std::map<std::string, bool> ServiceFamily::initial_state() const {
  std::map<std::string, bool> out;
  for (std::size_t i = 0; i < initial_.size(); ++i) out[meta_->names[i]] = initial_at(i);
  return out;
}

ServiceFamily ServiceFamily::with_values(std::vector<std::uint8_t> v) const {
  ServiceFamily out = *this;
  out.values_ = std::move(v);
  return out;
}

ServiceFamily ServiceFamily::reinitialized(std::vector<std::uint8_t> v) const {
  ServiceFamily out = *this;
  out.values_ = std::move(v);
  out.initial_ = out.values_;
  return out;
}

bool ServiceFamily::operator==(const ServiceFamily& other) const {
  if (values_ != other.values_ || initial_ != other.initial_) return false;
  if (meta_ == other.meta_) return true;
  if (!meta_ || !other.meta_) return meta_ == other.meta_;
  return meta_->spec == other.meta_->spec;
}

ServiceFamily make_family(const InterfaceSpec& spec,
                          const std::map<std::string, bool>& init) {
  for (const auto& [name, svc] : spec.services) {
    if (svc.methods.empty())
      throw std::invalid_argument("service needs at least one method: " + name);
  }
  for (const auto& [name, _] : init) {
    if (!spec.has_service(name)) throw UnknownService(name);
  }
  auto meta = std::make_shared<ServiceFamily::Meta>();
  meta->spec = spec;
  for (const auto& [name, svc] : spec.services) {
    meta->names.push_back(name);
    meta->kinds.push_back(svc.kind);
    std::uint8_t mask = 0;
    for (Method m : svc.methods) mask |= std::uint8_t(1u << static_cast<unsigned>(m));
    meta->method_mask.push_back(mask);
  }
  ServiceFamily fam;
  fam.meta_ = std::move(meta);
  fam.values_.resize(fam.meta_->names.size(), 0);
  for (std::size_t i = 0; i < fam.values_.size(); ++i) {
    auto it = init.find(fam.meta_->names[i]);
    if (it != init.end() && it->second) fam.values_[i] = 1;
  }
  fam.initial_ = fam.values_;
  return fam;
}

std::pair<Reply, ServiceFamily> apply_action(const ServiceFamily& fam,
                                             std::string_view focus,
                                             std::string_view method) {
  auto idx = fam.index_of(focus);
  if (!idx) throw UnknownService(std::string(focus));
  auto m = method_from_name(method);
  if (!m || !fam.allows(*idx, *m)) {
    throw UnknownMethod(std::string(focus), std::string(method));
  }
  std::vector<std::uint8_t> values = fam.values();
  bool reply = false;
  switch (*m) {
    case Method::Get: reply = values[*idx] != 0; break;
    case Method::SetTrue: values[*idx] = 1; reply = true; break;
    case Method::SetFalse: values[*idx] = 0; reply = false; break;
  }
  return {Reply{reply}, fam.with_values(std::move(values))};
}

ServiceFamily reset_cotargets(const ServiceFamily& fam) {
  std::vector<std::uint8_t> values = fam.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (fam.kind_at(i) == ServiceKind::Cotarget) values[i] = fam.initial_values()[i];
  }
  return fam.with_values(std::move(values));
}

}  // namespace pisie
