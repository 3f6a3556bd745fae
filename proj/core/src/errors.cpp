#include "selfadj/errors.hpp"

namespace selfadj {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Integration: return "integration";
    case ErrorKind::Convergence: return "convergence";
    case ErrorKind::Usage: return "usage";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Classification: return "classification";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::Integrability: return "integrability";
    case ErrorKind::DegenerateFrame: return "degenerate-frame";
    case ErrorKind::TrivialSolution: return "trivial-solution";
    case ErrorKind::Configuration: return "configuration";
  }
  return "unknown";
}

void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, std::string(to_string(kind)) + " error: " + message);
}

}  // namespace selfadj
