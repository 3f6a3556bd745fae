#pragma once

#include <optional>
#include <vector>

#include "selfadj/errors.hpp"
#include "selfadj/ivp.hpp"
#include "selfadj/potential.hpp"

namespace selfadj {

enum class Endpoint { Left, Right };
enum class Verdict { LPC, LCC };
enum class ClassificationMethod { Analytic, Numerical };

const char* to_string(Endpoint e) noexcept;
const char* to_string(Verdict v) noexcept;
const char* to_string(ClassificationMethod m) noexcept;

/// Evidence gathered by the numerical path: windowed integrals of |f1|^2 and
/// |f2|^2 over [x_{k+1}, x_k] (or [x_k, x_{k+1}] toward the right) for the
/// geometric window sequence x_k.
struct WindowDiagnostics {
  double anchor = 0.0;
  std::vector<double> edges;
  std::vector<double> mass_f1;
  std::vector<double> mass_f2;
  /// Latest consecutive-window ratio per solution (0 when unavailable).
  double ratio_f1 = 0.0;
  double ratio_f2 = 0.0;
};

struct EndpointClassification {
  Endpoint endpoint;
  Verdict verdict;
  ClassificationMethod method;
  WindowDiagnostics diagnostics;
};

struct ClassificationControls {
  IvpControls ivp{};
  /// Interior anchor for the fundamental system; chosen from the interval
  /// when unset.
  std::optional<double> anchor;
  /// Window contraction toward a finite endpoint (x_k - a = (x0 - a) rho^k).
  double shrink = 0.5;
  /// Window growth toward an infinite endpoint.
  double grow = 2.0;
  int min_windows = 8;
  int max_windows = 60;
  /// Relative Cauchy tolerance on the tail-extrapolated integral.
  double cauchy_tol = 1e-6;
  /// Cumulative integral growth factor over `divergence_windows` windows
  /// that counts as divergence.
  double divergence_growth = 10.0;
  int divergence_windows = 3;
  /// Window ratios at or above 1 - stall_slack mean the windowed masses no
  /// longer decrease, so the integral diverges.
  double stall_slack = 1e-9;
  /// Ratios must sit below 1 - convergence_margin to count as convergent.
  double convergence_margin = 1e-6;
  bool force_numerical = false;
};

/// Limit-point / limit-circle verdict at one endpoint of q's interval.
/// Throws ErrorKind::Classification (with the diagnostics in the message)
/// when the windowed evidence is inconclusive.
EndpointClassification classify_endpoint(const Potential& q, double energy, Endpoint endpoint,
                                         const ClassificationControls& controls = {});

class ClassificationError : public Error {
 public:
  ClassificationError(const std::string& what, WindowDiagnostics diag)
      : Error(ErrorKind::Classification, what), diagnostics_(std::move(diag)) {}
  const WindowDiagnostics& diagnostics() const noexcept { return diagnostics_; }

 private:
  WindowDiagnostics diagnostics_;
};

enum class ExtensionKind { EssentiallySelfAdjoint, OneParameterFamily };
const char* to_string(ExtensionKind k) noexcept;

struct ExtensionStructure {
  ExtensionKind kind;
  EndpointClassification left;
  EndpointClassification right;
};

/// Requires LPC at the right endpoint (unsupported otherwise). Uses E = 0.
ExtensionStructure extension_structure(const Potential& q, const ClassificationControls& controls = {});

/// Default anchor: 1 on (0, inf), midpoint of a finite interval, one unit
/// inside a half-infinite one.
double default_anchor(const Interval& d);

namespace detail {
/// Windowed square-integrability toward `endpoint` of the solution with data
/// `state` at x0. Throws ClassificationError when the evidence is inconclusive.
bool square_integrable(const Potential& q, double energy, Endpoint endpoint, double x0, Point state,
                       const ClassificationControls& controls);
}  // namespace detail

}  // namespace selfadj
