#include "selfadj/quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "selfadj/errors.hpp"

namespace selfadj {
namespace {

constexpr int kMaxGauss = 128;
constexpr int kMaxCheb = 64;

GaussRule build_gauss(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0, p1 = x;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

std::vector<double> build_cheb_matrix(int n) {
  const auto t = chebyshev_points(n);
  const int m = n + 1;
  std::vector<double> q(static_cast<std::size_t>(m * m));
  // Column j: integrate the Lagrange basis function l_j via its Chebyshev
  // coefficients, then evaluate the antiderivative at every node.
  for (int j = 0; j < m; ++j) {
    std::vector<double> a(m + 1, 0.0);
    for (int k = 0; k <= n; ++k) {
      // f = e_j sampled at t_i = -cos(pi i/n) = cos(pi (n-i)/n).
      const int i = n - j;  // index in descending cos ordering
      double w = (i == 0 || i == n) ? 0.5 : 1.0;
      a[k] = (2.0 / n) * w * std::cos(std::numbers::pi * k * i / n);
    }
    a[0] *= 0.5;
    a[n] *= 0.5;
    // Antiderivative coefficients b_k, k = 1..n+1.
    std::vector<double> b(m + 1, 0.0);
    for (int k = 1; k <= n + 1; ++k) {
      const double am1 = (k - 1 == 0) ? 2.0 * a[0] : a[k - 1];
      const double ap1 = (k + 1 <= n) ? a[k + 1] : 0.0;
      b[k] = (am1 - ap1) / (2.0 * k);
    }
    // F(-1) = 0 fixes b_0: sum b_k T_k(-1) = sum b_k (-1)^k.
    double s = 0.0;
    for (int k = 1; k <= n + 1; ++k) s += b[k] * ((k % 2) ? -1.0 : 1.0);
    b[0] = -s;
    for (int i = 0; i < m; ++i) {
      const double x = t[i];
      // Clenshaw-free direct evaluation via cos(k acos x).
      const double th = std::acos(std::clamp(x, -1.0, 1.0));
      double v = 0.0;
      for (int k = 0; k <= n + 1; ++k) v += b[k] * std::cos(k * th);
      q[static_cast<std::size_t>(i * m + j)] = v;
    }
  }
  return q;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  require(n >= 1 && n <= kMaxGauss, ErrorKind::Validation, "Gauss-Legendre order out of range");
  static const std::array<GaussRule, kMaxGauss + 1> rules = [] {
    std::array<GaussRule, kMaxGauss + 1> r;
    for (int k = 1; k <= kMaxGauss; ++k) r[k] = build_gauss(k);
    return r;
  }();
  return rules[n];
}

double integrate(const std::function<double(double)>& f, double a, double b, int order) {
  const auto& g = gauss_legendre(order);
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * f(c + h * g.nodes[i]);
  return s * h;
}

double integrate_log(const std::function<double(double)>& f, double a, double b, int order) {
  require(a > 0.0 && b > a, ErrorKind::Domain, "log-variable quadrature needs 0 < a < b");
  const double la = std::log(a), lb = std::log(b);
  return integrate(
      [&f](double t) {
        const double x = std::exp(t);
        return f(x) * x;
      },
      la, lb, order);
}

std::vector<double> chebyshev_points(int n) {
  std::vector<double> t(n + 1);
  for (int i = 0; i <= n; ++i) t[i] = -std::cos(std::numbers::pi * i / n);
  return t;
}

const std::vector<double>& chebyshev_cumulative_matrix(int n) {
  require(n >= 2 && n <= kMaxCheb, ErrorKind::Validation, "Chebyshev degree out of range");
  static const std::array<std::vector<double>, kMaxCheb + 1> mats = [] {
    std::array<std::vector<double>, kMaxCheb + 1> m;
    for (int k = 2; k <= kMaxCheb; ++k) m[k] = build_cheb_matrix(k);
    return m;
  }();
  return mats[n];
}

Extrapolated richardson(std::span<const double> values, double rho, std::span<const double> orders) {
  require(!values.empty(), ErrorKind::Validation, "Richardson needs at least one value");
  std::vector<double> t(values.begin(), values.end());
  double err = 0.0;
  const std::size_t levels = std::min(orders.size(), t.size() - 1);
  for (std::size_t lvl = 0; lvl < levels; ++lvl) {
    const double f = std::pow(rho, orders[lvl]);
    std::vector<double> next(t.size() - 1);
    for (std::size_t i = 0; i + 1 < t.size(); ++i) next[i] = (t[i + 1] - f * t[i]) / (1.0 - f);
    err = std::abs(next.back() - t.back());
    t = std::move(next);
  }
  return {t.back(), err};
}

}  // namespace selfadj
