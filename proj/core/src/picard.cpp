// Picard iteration for -u'' + v u = 0, v = q - E:
//   g_n(x) = du0 + int_{x0}^{x} v f_{n-1},   f_n(x) = u0 + int_{x0}^{x} g_n,
// i.e. f_n = f_0 + int int v f_{n-1}. On a segment of length L the sup-norm
// error contracts by L * int_seg |v| per sweep, so segments are cut until that
// product is below controls.picard_contraction. Inside a segment functions are
// represented at Chebyshev-Lobatto points and integrated spectrally.

#include <algorithm>
#include <cmath>

#include "selfadj/errors.hpp"
#include "selfadj/ivp.hpp"
#include "selfadj/quadrature.hpp"

namespace selfadj::detail {
namespace {

double abs_integral(const Potential& q, double energy, double a, double b) {
  const double lo = std::min(a, b), hi = std::max(a, b);
  return integrate([&](double x) { return std::abs(q(x) - energy); }, lo, hi, 32);
}

// Segment boundaries from x0 toward x_target.
std::vector<double> segments(const Potential& q, double energy, double x0, double x_target,
                             const IvpControls& c) {
  const double lo = std::min(x0, x_target), hi = std::max(x0, x_target);
  std::vector<double> stops = q.breakpoints(lo, hi);
  if (x_target < x0) std::reverse(stops.begin(), stops.end());
  stops.push_back(x_target);

  std::vector<double> cuts{x0};
  double x = x0;
  for (double stop : stops) {
    while (x != stop) {
      double len = std::min(std::abs(stop - x), c.max_step);
      const double dir = stop > x ? 1.0 : -1.0;
      for (int halvings = 0;; ++halvings) {
        if (halvings > 200) fail(ErrorKind::Convergence, "cannot satisfy the Picard contraction bound");
        const double end = x + dir * len;
        const double mass = abs_integral(q, energy, x, end);
        // len * mass < 1/2 also keeps sqrt|v| * len below one on average, so
        // the degree-24 interpolant resolves the segment to rounding level.
        if (len * mass < c.picard_contraction) break;
        len *= 0.5;
      }
      x = (std::abs(stop - x) <= len) ? stop : x + dir * len;
      cuts.push_back(x);
    }
  }
  return cuts;
}

}  // namespace

std::vector<Trajectory> picard_solve(const Potential& q, double energy, double x0,
                                     const std::vector<Point>& initial, double x_target,
                                     const IvpControls& c) {
  const int deg = c.picard_degree;
  const int m = deg + 1;
  const auto& cum = chebyshev_cumulative_matrix(deg);
  const auto nodes = chebyshev_points(deg);
  const auto cuts = segments(q, energy, x0, x_target, c);

  std::vector<double> xs{x0};
  std::vector<std::vector<double>> us(initial.size()), dus(initial.size());
  for (std::size_t k = 0; k < initial.size(); ++k) {
    us[k].push_back(initial[k].u);
    dus[k].push_back(initial[k].du);
  }
  std::vector<Point> start = initial;

  std::vector<double> seg_x(m), v(m), f(m), g(m), vf(m), f_new(m), g_new(m);
  auto apply = [&](const std::vector<double>& in, std::vector<double>& out, double half) {
    for (int i = 0; i < m; ++i) {
      double s = 0.0;
      for (int j = 0; j < m; ++j) s += cum[static_cast<std::size_t>(i * m + j)] * in[j];
      out[i] = half * s;
    }
  };

  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double a = cuts[s], b = cuts[s + 1];
    const double half = 0.5 * (b - a);  // signed; dx = half * dt
    for (int i = 0; i < m; ++i) {
      seg_x[i] = a + (nodes[i] + 1.0) * half;
      v[i] = q(seg_x[i]) - energy;
    }
    seg_x[0] = a;
    seg_x[deg] = b;
    for (std::size_t k = 0; k < initial.size(); ++k) {
      const double u0 = start[k].u, du0 = start[k].du;
      for (int i = 0; i < m; ++i) {
        f[i] = u0 + du0 * (seg_x[i] - a);
        g[i] = du0;
      }
      double prev_change = kInfinity;
      int stalls = 0;
      bool converged = false;
      for (int sweep = 0; sweep < c.picard_max_sweeps; ++sweep) {
        for (int i = 0; i < m; ++i) vf[i] = v[i] * f[i];
        apply(vf, g_new, half);
        for (int i = 0; i < m; ++i) g_new[i] += du0;
        apply(g_new, f_new, half);
        double change = 0.0, scale = 0.0;
        for (int i = 0; i < m; ++i) {
          f_new[i] += u0;
          change = std::max(change, std::abs(f_new[i] - f[i]));
          scale = std::max(scale, std::abs(f_new[i]) + std::abs(half) * std::abs(g_new[i]));
        }
        f.swap(f_new);
        g.swap(g_new);
        if (change <= 4e-16 * std::max(scale, 1e-300)) {
          converged = true;
          break;
        }
        // Rounding floor: the update stopped shrinking.
        if (change >= prev_change) {
          if (++stalls >= 3 && change <= 1e-12 * scale) {
            converged = true;
            break;
          }
        } else {
          stalls = 0;
        }
        prev_change = change;
      }
      if (!converged)
        fail(ErrorKind::Convergence, "Picard iteration did not contract on segment [" +
                                         std::to_string(a) + ", " + std::to_string(b) + "]");
      for (int i = 1; i < m; ++i) {
        us[k].push_back(f[i]);
        dus[k].push_back(g[i]);
      }
      start[k] = {f[deg], g[deg]};
    }
    for (int i = 1; i < m; ++i) xs.push_back(seg_x[i]);
  }

  std::vector<Trajectory> out;
  for (std::size_t k = 0; k < initial.size(); ++k)
    out.emplace_back(xs, std::move(us[k]), std::move(dus[k]), energy, q);
  return out;
}

}  // namespace selfadj::detail
