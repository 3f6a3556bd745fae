#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "selfadj/endpoint.hpp"
#include "selfadj/ivp.hpp"
#include "selfadj/potential.hpp"
#include "selfadj/quadrature.hpp"
#include "selfadj/solution.hpp"

namespace selfadj {

/// Boundary angle, always stored in [0, pi).
class BoundaryParameter {
 public:
  /// Throws a validation error unless 0 <= theta < pi.
  explicit BoundaryParameter(double theta);
  /// Reduces any finite angle modulo pi.
  static BoundaryParameter canonical(double theta);
  double value() const noexcept { return theta_; }
  friend bool operator==(const BoundaryParameter&, const BoundaryParameter&) = default;

 private:
  double theta_;
};

/// Smallest distance between two angles on the circle R / pi Z.
double angle_distance(double a, double b);

/// The Frobenius pair (psi1, psi2) of one inverse-square channel.
struct FrobeniusFrame {
  double kappa;
};

/// A canonical fundamental system built numerically at an anchor.
struct NumericFrame {
  std::shared_ptr<const FundamentalSystem> system;
};

using Frame = std::variant<FrobeniusFrame, NumericFrame>;

Frame numeric_frame(FundamentalSystem fs);
/// (f1, f2) of a frame as evaluators.
std::pair<Solution, Solution> frame_pair(const Frame& frame);
/// Anchor of a numeric frame; nullopt for Frobenius frames.
std::optional<double> frame_anchor(const Frame& frame);

/// C and theta with f = C (f1 cos theta + f2 sin theta).
struct ThetaDecomposition {
  double C;
  BoundaryParameter theta;
  double c1;
  double c2;
};

/// Wronskian-ratio decomposition of a nontrivial solution f in the frame
/// (f1, f2). The Wronskians are taken at `at`, or at a point inside every
/// operand's range when unset.
ThetaDecomposition theta_decompose(const Solution& f, const Solution& f1, const Solution& f2,
                                   std::optional<double> at = std::nullopt, double trivial_tol = 1e-14);
ThetaDecomposition theta_decompose(const Solution& f, const Frame& frame,
                                   std::optional<double> at = std::nullopt, double trivial_tol = 1e-14);

/// A self-adjoint realisation of l_q: the closure when the left end is
/// limit point, otherwise the restriction selected by a boundary solution.
class ExtensionDescriptor {
 public:
  struct Closure {};
  struct Theta {
    BoundaryParameter theta;
    Frame frame;
  };
  using Kind = std::variant<Closure, Theta>;

  const Potential& potential() const noexcept { return q_; }
  const Kind& kind() const noexcept { return kind_; }
  bool is_closure() const noexcept { return std::holds_alternative<Closure>(kind_); }
  const Theta* theta() const noexcept { return std::get_if<Theta>(&kind_); }
  /// f1 cos(theta) + f2 sin(theta); nullopt for the closure.
  std::optional<Solution> boundary_solution() const;

 private:
  ExtensionDescriptor(Potential q, Kind kind) : q_(std::move(q)), kind_(std::move(kind)) {}
  friend ExtensionDescriptor extension_closure(const Potential&, const ClassificationControls&);
  friend ExtensionDescriptor extension_from_theta(const Potential&, BoundaryParameter, const Frame&,
                                                  const ClassificationControls&);

  Potential q_;
  Kind kind_;
};

/// Requires an essentially self-adjoint q.
ExtensionDescriptor extension_closure(const Potential& q, const ClassificationControls& controls = {});
/// Requires a one-parameter family for q; the frame must belong to q.
ExtensionDescriptor extension_from_theta(const Potential& q, BoundaryParameter theta, const Frame& frame,
                                         const ClassificationControls& controls = {});
/// The extension whose boundary solution is proportional to f.
ExtensionDescriptor extension_from_boundary_solution(const Potential& q, const Solution& f, const Frame& frame,
                                                     const ClassificationControls& controls = {});

/// Same extension of the same q. Boundary solutions are compared in the
/// first descriptor's frame with the given angular tolerance.
bool extensions_equal(const ExtensionDescriptor& e1, const ExtensionDescriptor& e2, double tol = 1e-10);

/// A trial function g with two derivatives, given as callables, plus the
/// sample grid on which results are reported.
struct TestFunction {
  std::function<double(double)> g;
  std::function<double(double)> dg;
  std::function<double(double)> d2g;
  std::vector<double> grid;
  /// g vanishes identically for x >= support_end.
  double support_end = kInfinity;
  std::string label;

  /// C-infinity step: 1 on (-inf, r0], 0 on [r1, inf).
  static TestFunction cutoff(double r0, double r1, std::vector<double> grid);
  /// cutoff(r0, r1) times a closed-form Frobenius combination.
  static TestFunction cutoff_times(const ClosedForm& f, double r0, double r1, std::vector<double> grid);
  /// Smooth bump supported on [lo, hi].
  static TestFunction bump(double lo, double hi, std::vector<double> grid);
};

struct SigmaControls {
  IvpControls ivp{};
  /// sigma counts as trivial when |C1|, |C2| < tol_sigma * scale(g).
  double tol_sigma = 1e-8;
  /// Geometric window factor toward the left endpoint.
  double shrink = 0.5;
  int max_windows = 200;
  /// Relative size of a window contribution at which the tail is dropped.
  double tail_tol = 1e-17;
  int gauss_order = 24;
  /// Point where the inner (endpoint) integral hands over to the grid.
  std::optional<double> match_point;
};

struct SigmaDecomposition {
  std::vector<double> grid;
  std::vector<double> g;
  std::vector<double> rho;
  /// g - rho on the grid.
  std::vector<double> sigma_raw;
  /// Projection of sigma_raw onto the solution space, sampled on the grid.
  std::vector<double> sigma;
  /// sigma = c1 f1 + c2 f2 in the frame used.
  double c1;
  double c2;
  /// max |sigma_raw - sigma| over the grid.
  double projection_defect;
  /// Scale used by the triviality test.
  double scale;
  bool trivial;
  /// Present when sigma is nontrivial.
  std::optional<ThetaDecomposition> decomposition;
};

/// g = rho_g + sigma_g with rho_g built from integrals of phi = -g'' + q g
/// from the left endpoint and sigma_g a zero-energy solution.
SigmaDecomposition rho_sigma(const TestFunction& g, const Potential& q, const Frame& frame,
                             const SigmaControls& controls = {});

enum class Membership { InClosure, InExtensionOnly, Outside };
const char* to_string(Membership m) noexcept;

struct MembershipResult {
  Membership membership;
  SigmaDecomposition sigma;
};

MembershipResult domain_membership(const TestFunction& g, const ExtensionDescriptor& e,
                                   const SigmaControls& controls = {});

/// lim_{x -> a} W(g, u)(x) by Richardson extrapolation over x_k = a + (x0 - a) rho^k.
Extrapolated boundary_wronskian(const TestFunction& g, const Solution& u, double x0, double rho = 0.5,
                                int levels = 12);

}  // namespace selfadj
