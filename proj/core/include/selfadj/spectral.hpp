#pragma once

#include <optional>
#include <string>
#include <vector>

#include "selfadj/extensions.hpp"
#include "selfadj/ivp.hpp"
#include "selfadj/solution.hpp"

namespace selfadj {

struct EnergyWindow {
  double e_min;
  double e_max;
  /// e_min < e_max, both finite, e_max < 0.
  void validate() const;
};

struct SpectralControls {
  IvpControls ivp = default_ivp();
  /// Right cutoff R = cutoff_kr / sqrt(-E).
  double cutoff_kr = 30.0;
  /// Left seed r_seed = seed_kr / sqrt(-E), measured from the left endpoint.
  double seed_kr = 1e-2;
  /// Matching point x_match = match_kr / sqrt(-E).
  double match_kr = 1.0;
  int mesh_per_decade = 64;
  /// Relative bracket width at which bisection stops.
  double bracket_rel = 1e-12;
  /// Roots closer than this (relative) are merged.
  double merge_rel = 1e-9;
  double residual_bound = 1e-5;
  double mismatch_bound = 1e-8;

  void validate() const;
  static IvpControls default_ivp() {
    IvpControls c;
    c.rel_tol = 1e-12;
    c.abs_tol = 1e-14;
    return c;
  }
};

/// Both shooting solutions at the matching point.
struct Shot {
  double energy;
  double k;
  double r_seed;
  double x_match;
  double cutoff;
  Point left;
  Point right;
  /// W(u_left, u_right)(x_match) / (k |u_left| |u_right|) with
  /// |u| = sqrt(u^2 + (u'/k)^2).
  double mismatch;
};

/// Integrates the boundary solution out from the left endpoint and the
/// decaying solution in from the right cutoff, and compares them.
Shot shoot(const ExtensionDescriptor& e, double energy, const SpectralControls& controls = {});
double shoot_mismatch(const ExtensionDescriptor& e, double energy, const SpectralControls& controls = {});

struct MismatchSample {
  double energy;
  double mismatch;
};

struct EigenResult {
  double energy;
  /// Stitched eigenfunction sampled on [r_seed, R], scaled to unit L2 norm
  /// on (a, R]. For Frobenius frames and closures the piece below r_seed
  /// comes from the series; numeric frames omit it.
  Trajectory eigenfunction;
  double residual;
  double mismatch;
  double cutoff;
  double r_seed;
  std::vector<MismatchSample> history;
};

struct EigenFailure {
  double lo;
  double hi;
  std::string message;
};

struct EigenSearch {
  std::vector<EigenResult> eigenvalues;
  std::vector<EigenFailure> failures;
  int mesh_points = 0;
};

/// All roots of the mismatch inside the window, ascending.
EigenSearch eigenvalues_below(const ExtensionDescriptor& e, const EnergyWindow& w,
                              const SpectralControls& controls = {});

/// Negative energy of the bound state of the inverse-square channel kappa with
/// boundary parameter theta, from matching the small-r expansion of
/// sqrt(r) K_|kappa|(sqrt(-E) r) to psi_{kappa,theta}.
std::optional<double> bound_state_oracle(double kappa, BoundaryParameter theta);

/// Eigenvalues shifted by p^2.
std::vector<double> shifted_spectrum(const std::vector<double>& channel_eigs, double p);

/// L2 norm of -u'' + (q - E) u in weak form (derivative jump across each
/// sample interval minus the integral of (q - E) u), divided by |E| ||u||.
/// Energy zero uses scale 1.
double eigen_residual(const Trajectory& u, const Potential& q);

}  // namespace selfadj
