#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pisie {

struct SyntaxError : std::runtime_error {
  std::size_t position;  // 1-based byte offset into the source text
  SyntaxError(std::size_t pos, const std::string& msg)
      : std::runtime_error("syntax error at offset " + std::to_string(pos) + ": " + msg),
        position(pos) {}
};

struct UnknownService : std::runtime_error {
  explicit UnknownService(const std::string& name)
      : std::runtime_error("unknown service: " + name) {}
};

struct UnknownMethod : std::runtime_error {
  UnknownMethod(const std::string& service, const std::string& method)
      : std::runtime_error("unknown method " + method + " on service " + service) {}
};

struct ProgramTooLong : std::runtime_error {
  ProgramTooLong(std::size_t len, std::size_t max_len)
      : std::runtime_error("program of length " + std::to_string(len) +
                           " exceeds layout capacity " + std::to_string(max_len)) {}
};

struct UnencodableInstruction : std::runtime_error {
  explicit UnencodableInstruction(const std::string& what)
      : std::runtime_error("unencodable instruction: " + what) {}
};

struct LayoutTooSmall : std::runtime_error {
  explicit LayoutTooSmall(const std::string& what)
      : std::runtime_error("layout too small: " + what) {}
};

struct UnboundVariable : std::runtime_error {
  explicit UnboundVariable(const std::string& name)
      : std::runtime_error("unbound variable: " + name) {}
};

struct DanglingProvenance : std::runtime_error {
  explicit DanglingProvenance(const std::string& run_id)
      : std::runtime_error("provenance parent not found in store: " + run_id) {}
};

struct EmptySample : std::runtime_error {
  EmptySample() : std::runtime_error("certification sample is empty") {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pisie
