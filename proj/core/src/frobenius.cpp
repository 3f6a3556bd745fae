#include "selfadj/frobenius.hpp"

#include <cmath>
#include <vector>

#include "selfadj/errors.hpp"

namespace selfadj {
namespace {

constexpr int kMaxTerms = 400;

struct SeriesSums {
  double value = 0.0;  // sum c_j r^(2j)
  double deriv = 0.0;  // sum (s + 2j) c_j r^(2j), to be divided by r later
};

}  // namespace

std::pair<ClosedForm, ClosedForm> frobenius_pair(double kappa) {
  return {ClosedForm(kappa, 1.0, 0.0), ClosedForm(kappa, 0.0, 1.0)};
}

ClosedForm frobenius_boundary_solution(double kappa, double theta) {
  return ClosedForm(kappa, std::cos(theta), std::sin(theta));
}

Point frobenius_series(double a, double energy, double r) {
  require(a > -1.0, ErrorKind::Domain, "Frobenius series needs exponent a > -1");
  require(r > 0.0, ErrorKind::Domain, "Frobenius series needs r > 0");
  const double s = 0.5 + a;
  const double r2 = r * r;
  double term = 1.0;  // c_j r^(2j)
  double value = 1.0;
  double deriv = s;
  int j = 1;
  for (; j < kMaxTerms; ++j) {
    term *= -energy * r2 / (4.0 * j * (j + a));
    value += term;
    deriv += (s + 2.0 * j) * term;
    if (std::abs(term) <= 1e-17 * std::abs(value) && std::abs(term) * (s + 2.0 * j) <= 1e-17 * std::abs(deriv)) break;
  }
  require(j < kMaxTerms, ErrorKind::Convergence, "Frobenius series did not converge");
  const double lead = std::pow(r, s);
  return {lead * value, lead * deriv / r};
}

Point frobenius_log_series(double energy, double r) {
  require(r > 0.0, ErrorKind::Domain, "Frobenius series needs r > 0");
  const double r2 = r * r;
  const double lr = std::log(r);
  // F = sqrt(r) sum c_j r^2j,  G = sqrt(r) sum d_j r^2j,  u = ln r F + G.
  double c = 1.0, d = 0.0;
  double pw = 1.0;
  double f = 1.0, fd = 0.5, g = 0.0, gd = 0.0;
  int j = 1;
  for (; j < kMaxTerms; ++j) {
    const double cj = -energy * c / (4.0 * j * j);
    const double dj = -(4.0 * j * cj + energy * d) / (4.0 * j * j);
    c = cj;
    d = dj;
    pw *= r2;
    const double tf = c * pw, tg = d * pw;
    f += tf;
    fd += (0.5 + 2.0 * j) * tf;
    g += tg;
    gd += (0.5 + 2.0 * j) * tg;
    const double mag = std::abs(f) + std::abs(g) + std::abs(fd) + std::abs(gd);
    if ((std::abs(tf) + std::abs(tg)) * (1.0 + 2.0 * j) <= 1e-17 * mag) break;
  }
  require(j < kMaxTerms, ErrorKind::Convergence, "Frobenius log series did not converge");
  const double sr = std::sqrt(r);
  // F(r) = sr*f, F'(r) = sr*fd/r ; same for G.
  const double F = sr * f, dF = sr * fd / r;
  const double G = sr * g, dG = sr * gd / r;
  return {lr * F + G, lr * dF + F / r + dG};
}

Point frobenius_boundary_series(double kappa, double c1, double c2, double energy, double r) {
  Point p1, p2;
  if (kappa == 0.0) {
    p1 = frobenius_series(0.0, energy, r);
    p2 = frobenius_log_series(energy, r);
  } else {
    p1 = frobenius_series(kappa, energy, r);
    p2 = c2 == 0.0 ? Point{} : frobenius_series(-kappa, energy, r);
  }
  return {c1 * p1.u + c2 * p2.u, c1 * p1.du + c2 * p2.du};
}

namespace {

// Coefficients times eps^(2j) of sum_j c_j r^(2j), c_0 = 1, for exponent a.
std::vector<double> scaled_coefficients(double a, double energy, double eps) {
  std::vector<double> out{1.0};
  const double x = eps * eps;
  for (int j = 1; j < kMaxTerms; ++j) {
    out.push_back(out.back() * -energy * x / (4.0 * j * (j + a)));
    if (std::abs(out.back()) <= 1e-18) return out;
  }
  fail(ErrorKind::Convergence, "Frobenius series did not converge");
}

// sum_ij x_i y_j / (p + 2i + 2j + 1): eps^-(p+1) times the integral of r^p X(r) Y(r).
double cross(const std::vector<double>& x, const std::vector<double>& y, double p) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) s += x[i] * y[j] / (p + 2.0 * (i + j) + 1.0);
  return s;
}

}  // namespace

double frobenius_boundary_norm2(double kappa, double c1, double c2, double energy, double eps) {
  require(eps > 0.0 && std::isfinite(eps), ErrorKind::Domain, "integration limit must be positive");
  if (kappa != 0.0) {
    const double s1 = 0.5 + kappa, s2 = 0.5 - kappa;
    const auto a = scaled_coefficients(kappa, energy, eps);
    double total = c1 * c1 * std::pow(eps, 2 * s1 + 1) * cross(a, a, 2 * s1);
    if (c2 != 0.0) {
      require(std::abs(kappa) < 1.0, ErrorKind::Domain, "second Frobenius solution is not square integrable");
      const auto b = scaled_coefficients(-kappa, energy, eps);
      total += 2 * c1 * c2 * eps * eps * cross(a, b, 1.0);
      total += c2 * c2 * std::pow(eps, 2 * s2 + 1) * cross(b, b, 2 * s2);
    }
    return total;
  }
  // u = A + ln(r) B with A = sqrt r sum alpha_j r^2j, B = sqrt r sum beta_j r^2j.
  const double x = eps * eps;
  std::vector<double> alpha{c1}, beta{c2};
  double c = 1.0, d = 0.0, pw = 1.0;
  for (int j = 1; j < kMaxTerms; ++j) {
    const double cj = -energy * c / (4.0 * j * j);
    const double dj = -(4.0 * j * cj + energy * d) / (4.0 * j * j);
    c = cj;
    d = dj;
    pw *= x;
    alpha.push_back((c1 * c + c2 * d) * pw);
    beta.push_back(c2 * c * pw);
    if (std::abs(c * pw) + std::abs(d * pw) <= 1e-18) break;
  }
  const double L = std::log(eps);
  double total = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i)
    for (std::size_t j = 0; j < alpha.size(); ++j) {
      const double m = 2.0 + 2.0 * (i + j);  // n + 1 for r^n, n = 1 + 2i + 2j
      const double i0 = 1.0 / m, i1 = L / m - 1.0 / (m * m), i2 = L * L / m - 2.0 * L / (m * m) + 2.0 / (m * m * m);
      total += alpha[i] * alpha[j] * i0 + 2.0 * alpha[i] * beta[j] * i1 + beta[i] * beta[j] * i2;
    }
  return x * total;
}

}  // namespace selfadj
