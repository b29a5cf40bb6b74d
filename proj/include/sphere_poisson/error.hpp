#pragma once

#include <stdexcept>
#include <string>

namespace sphere_poisson {

enum class ErrorKind {
  kInvalidInput,   // malformed arguments, range or norm violations
  kSingularGram,   // Gram matrix not positive definite
  kGuardExceeded,  // enumeration would be too large; use the sampled/MITM path
};

// Single exception type for the library; `kind()` lets front ends map
// failures onto exit codes without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void throw_invalid(const std::string& what) {
  throw Error(ErrorKind::kInvalidInput, what);
}

}  // namespace sphere_poisson
