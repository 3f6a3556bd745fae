#pragma once

#include <functional>
#include <span>
#include <vector>

namespace selfadj {

/// Gauss-Legendre nodes/weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Rules are built once per order (1..128) and shared read-only afterwards.
const GaussRule& gauss_legendre(int n);

/// Fixed-order Gauss-Legendre on [a, b].
double integrate(const std::function<double(double)>& f, double a, double b, int order = 20);

/// Gauss-Legendre in the variable t = ln(x) on [a, b], 0 < a < b. Suited to
/// power-law integrands near a singular endpoint at zero.
double integrate_log(const std::function<double(double)>& f, double a, double b, int order = 24);

/// Chebyshev-Lobatto points on [-1, 1] in ascending order (n+1 points).
std::vector<double> chebyshev_points(int n);

/// Row-major (n+1)x(n+1) matrix Q with (Q f)_i = integral_{-1}^{t_i} p_f(s) ds,
/// p_f the interpolant of f at the ascending Chebyshev-Lobatto points.
const std::vector<double>& chebyshev_cumulative_matrix(int n);

/// Richardson extrapolation of a sequence s_k sampled at h_k = h0 * rho^k,
/// assuming s(h) = s0 + c1 h^p1 + c2 h^p2 ... with the supplied orders.
/// Returns the extrapolated value and the last correction as an error estimate.
struct Extrapolated {
  double value;
  double error;
};
Extrapolated richardson(std::span<const double> values, double rho, std::span<const double> orders);

}  // namespace selfadj
