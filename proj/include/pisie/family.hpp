#pragma once

// Boolean-register service families. Services are partitioned into target
// services (external, the point of a run) and co-target services (local
// bookkeeping). A basic action is focus.method with method one of get,
// set:t, set:f; every action replies a boolean.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pisie {

enum class ServiceKind : std::uint8_t { Target, Cotarget };
enum class Method : std::uint8_t { Get, SetTrue, SetFalse };

std::string_view method_name(Method m);
std::optional<Method> method_from_name(std::string_view name);
std::string_view service_kind_name(ServiceKind k);

struct ServiceSpec {
  ServiceKind kind = ServiceKind::Cotarget;
  std::vector<Method> methods;  // nonempty, kept sorted and unique
  bool allows(Method m) const;
  bool operator==(const ServiceSpec&) const = default;
};

ServiceSpec all_methods(ServiceKind kind);

struct InterfaceSpec {
  std::map<std::string, ServiceSpec, std::less<>> services;
  bool has_service(std::string_view name) const;
  const ServiceSpec* find(std::string_view name) const;
  bool operator==(const InterfaceSpec&) const = default;
};

struct Reply {
  bool value = false;
};

// Immutable after construction; copies share the interface metadata and
// carry their own register contents, so passing families around is cheap.
class ServiceFamily {
 public:
  ServiceFamily() = default;

  const InterfaceSpec& iface() const;
  std::size_t service_count() const;
  const std::string& service_name(std::size_t i) const;
  ServiceKind kind_at(std::size_t i) const;
  bool allows(std::size_t i, Method m) const;
  std::optional<std::size_t> index_of(std::string_view name) const;

  bool value_at(std::size_t i) const { return values_[i] != 0; }
  bool initial_at(std::size_t i) const { return initial_[i] != 0; }
  const std::vector<std::uint8_t>& values() const { return values_; }
  const std::vector<std::uint8_t>& initial_values() const { return initial_; }

  bool state_of(std::string_view name) const;  // throws UnknownService
  std::map<std::string, bool> state() const;
  std::map<std::string, bool> initial_state() const;

  // Same interface and initial state, different register contents.
  ServiceFamily with_values(std::vector<std::uint8_t> v) const;

  // Same interface, both contents and initial state replaced; index order.
  ServiceFamily reinitialized(std::vector<std::uint8_t> v) const;

  // Identity of the shared interface metadata; families built from one
  // another (with_values, reinitialized, reset_cotargets) share it.
  const void* meta_key() const { return meta_.get(); }

  bool operator==(const ServiceFamily& other) const;

  friend ServiceFamily make_family(const InterfaceSpec& spec,
                                   const std::map<std::string, bool>& init);

 private:
  struct Meta {
    InterfaceSpec spec;
    std::vector<std::string> names;  // sorted, index order
    std::vector<ServiceKind> kinds;
    std::vector<std::uint8_t> method_mask;  // bit per Method
  };
  std::shared_ptr<const Meta> meta_;
  std::vector<std::uint8_t> values_;
  std::vector<std::uint8_t> initial_;
};

// Missing init entries default to false; unknown names throw UnknownService.
ServiceFamily make_family(const InterfaceSpec& spec,
                          const std::map<std::string, bool>& init = {});

// get: reply contents, no change. set:t / set:f: write, reply the written
// value. Throws UnknownService / UnknownMethod for ill-formed actions.
std::pair<Reply, ServiceFamily> apply_action(const ServiceFamily& fam,
                                             std::string_view focus,
                                             std::string_view method);

// Co-target services back to their initial state, targets untouched.
ServiceFamily reset_cotargets(const ServiceFamily& fam);

}  // namespace pisie
