#pragma once

#include <stdexcept>
#include <string>

namespace dds {

/// Broad error classes. The CLI maps each class to its own exit code.
enum class ErrorKind {
  validation,     ///< malformed input data or arguments
  configuration,  ///< invalid pipeline configuration
  alignment,      ///< image or model ids do not line up
  numeric,        ///< degenerate numeric input (zero variance, zero norm, ...)
  io,             ///< file missing, unreadable or unparsable
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace dds
