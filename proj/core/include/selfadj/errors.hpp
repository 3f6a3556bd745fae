#pragma once

#include <stdexcept>
#include <string>

namespace selfadj {

/// Category attached to every library exception. The CLI maps these onto
/// process exit codes.
enum class ErrorKind {
  Domain,          // argument outside the interval / potential domain
  Integration,     // non-integrable potential on the requested span
  Convergence,     // step underflow, Picard non-contraction, root finder stall
  Usage,           // mismatched inputs (different q or E, incompatible frames)
  Validation,      // malformed configuration or out-of-range parameter
  Classification,  // inconclusive limit-point / limit-circle evidence
  Unsupported,     // configuration outside the supported model
  Integrability,   // divergent quadrature toward a singular endpoint
  DegenerateFrame, // fundamental system with vanishing Wronskian
  TrivialSolution, // decomposition of the zero solution
  Configuration,   // numerically unusable controls (cutoffs too small, ...)
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) fail(kind, message);
}

}  // namespace selfadj
