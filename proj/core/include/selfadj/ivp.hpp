#pragma once

#include <vector>

#include "selfadj/potential.hpp"
#include "selfadj/solution.hpp"

namespace selfadj {

enum class IvpMethod { AdaptiveRK, Picard };

struct IvpControls {
  double rel_tol = 1e-10;
  double abs_tol = 1e-13;
  double max_step = kInfinity;
  IvpMethod method = IvpMethod::AdaptiveRK;
  int picard_max_sweeps = 200;
  /// Contraction bound per Picard segment: length * integral |q - E| < this.
  double picard_contraction = 0.5;
  /// Chebyshev degree used inside each Picard segment.
  int picard_degree = 24;
  /// Refuse to start closer than this to a singular endpoint.
  double start_cutoff = 1e-8;
  int max_steps = 2'000'000;

  void validate() const;
};

/// Solve -u'' + (q - E) u = 0 from (x0, u0, du0) to x_target (either side).
Trajectory solve_ivp(const Potential& q, double energy, double x0, double u0, double du0,
                     double x_target, const IvpControls& controls = {});

/// Several initial conditions integrated together so all trajectories share
/// one sample grid. The grid covers [min(x0, x_target), max(x0, x_target)].
std::vector<Trajectory> solve_ivp_system(const Potential& q, double energy, double x0,
                                         const std::vector<Point>& initial, double x_target,
                                         const IvpControls& controls = {});

/// Canonical fundamental system at x0: f1(x0)=1, f1'(x0)=0, f2(x0)=0, f2'(x0)=1,
/// sampled on a shared grid spanning [x_lo, x_hi] (x0 inside).
struct FundamentalSystem {
  Potential q;
  double energy;
  double x0;
  Trajectory f1;
  Trajectory f2;
  IvpControls controls;

  /// Re-solve so the span also covers x. Returns a new value.
  FundamentalSystem extended_to(double x) const;
};

FundamentalSystem fundamental_system(const Potential& q, double energy, double x0,
                                     const IvpControls& controls, double x_lo, double x_hi);

/// Default span: half-way from x0 toward each endpoint (or +-1 for infinite ones).
FundamentalSystem fundamental_system(const Potential& q, double energy, double x0,
                                     const IvpControls& controls = {});

namespace detail {
std::vector<Trajectory> picard_solve(const Potential& q, double energy, double x0,
                                     const std::vector<Point>& initial, double x_target,
                                     const IvpControls& controls);
/// Checks span admissibility (interior, away from singular endpoints).
void check_span(const Potential& q, double x0, double x_target, const IvpControls& controls);
}  // namespace detail

}  // namespace selfadj
