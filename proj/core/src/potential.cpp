#include "selfadj/potential.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "selfadj/errors.hpp"

namespace selfadj {
namespace {

std::string hex(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

std::string interval_key(const Interval& d) { return "(" + hex(d.a) + "," + hex(d.b) + ")"; }

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string kind_key(const Potential::Kind& kind) {
  return std::visit(
      overloaded{
          [](const Potential::InverseSquare& k) { return "isq[" + hex(k.kappa * k.kappa) + "]"; },
          [](const Potential::Constant& k) { return "const[" + hex(k.c) + "]"; },
          [](const Potential::Tabulated& k) {
            std::string s = "table[";
            for (std::size_t i = 0; i < k.grid.size(); ++i)
              s += hex(k.grid[i]) + ":" + hex(k.values[i]) + ";";
            return s + "]";
          },
          [](const Potential::Sum& k) {
            std::string s = "sum[";
            for (const auto& t : k.terms) s += t.key() + ";";
            return s + "]";
          },
      },
      kind);
}

}  // namespace

Interval::Interval(double left, double right) : a(left), b(right) {
  require(!std::isnan(left) && !std::isnan(right) && left < right, ErrorKind::Validation,
          "interval requires a < b");
}

Potential::Potential(Kind kind, Interval domain)
    : kind_(std::move(kind)), domain_(domain), key_(kind_key(kind_) + interval_key(domain_)) {}

Potential Potential::inverse_square(double kappa) {
  require(std::isfinite(kappa), ErrorKind::Validation, "kappa must be finite");
  return Potential(InverseSquare{kappa}, Interval(0.0, kInfinity));
}

Potential Potential::constant(double c, Interval domain) {
  require(std::isfinite(c), ErrorKind::Validation, "constant potential must be finite");
  return Potential(Constant{c}, domain);
}

Potential Potential::tabulated(std::vector<double> grid, std::vector<double> values,
                               Interval domain) {
  require(grid.size() >= 2 && grid.size() == values.size(), ErrorKind::Validation,
          "tabulated potential needs matching grid/value arrays of length >= 2");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    require(std::isfinite(grid[i]) && std::isfinite(values[i]), ErrorKind::Validation,
            "tabulated potential entries must be finite");
    require(i == 0 || grid[i] > grid[i - 1], ErrorKind::Validation,
            "tabulated grid must be strictly increasing");
  }
  require(grid.front() >= domain.a && grid.back() <= domain.b, ErrorKind::Validation,
          "tabulated grid must lie inside the domain");
  return Potential(Tabulated{std::move(grid), std::move(values)}, domain);
}

Potential Potential::sum(std::vector<Potential> terms) {
  require(!terms.empty(), ErrorKind::Validation, "sum potential needs at least one term");
  const Interval d = terms.front().domain();
  for (const auto& t : terms)
    require(t.domain() == d, ErrorKind::Validation, "sum terms must share one domain");
  return Potential(Sum{std::move(terms)}, d);
}

double Potential::operator()(double x) const {
  if (!domain_.interior(x)) fail(ErrorKind::Domain, "x = " + std::to_string(x) + " outside the potential domain");
  return std::visit(
      overloaded{
          [x](const InverseSquare& k) { return (k.kappa * k.kappa - 0.25) / (x * x); },
          [](const Constant& k) { return k.c; },
          [x](const Tabulated& k) {
            if (x < k.grid.front() || x > k.grid.back())
              fail(ErrorKind::Domain, "x = " + std::to_string(x) + " outside the potential table");
            auto it = std::upper_bound(k.grid.begin(), k.grid.end(), x);
            if (it == k.grid.end()) return k.values.back();
            const auto i = static_cast<std::size_t>(it - k.grid.begin());
            const double t = (x - k.grid[i - 1]) / (k.grid[i] - k.grid[i - 1]);
            return (1.0 - t) * k.values[i - 1] + t * k.values[i];
          },
          [x](const Sum& k) {
            double s = 0.0;
            for (const auto& t : k.terms) s += t(x);
            return s;
          },
      },
      kind_);
}

std::optional<double> Potential::inverse_square_kappa() const {
  if (const auto* k = std::get_if<InverseSquare>(&kind_)) return k->kappa;
  return std::nullopt;
}

bool Potential::left_singular() const {
  if (!domain_.left_finite()) return true;
  return std::visit(overloaded{
                        [](const InverseSquare& k) { return k.kappa * k.kappa != 0.25; },
                        [](const Constant&) { return false; },
                        [](const Tabulated&) { return false; },
                        [](const Sum& k) {
                          return std::any_of(k.terms.begin(), k.terms.end(),
                                             [](const Potential& t) { return t.left_singular(); });
                        },
                    },
                    kind_);
}

bool Potential::right_singular() const { return !domain_.right_finite(); }

std::vector<double> Potential::breakpoints(double lo, double hi) const {
  std::vector<double> out;
  std::visit(overloaded{
                 [](const InverseSquare&) {},
                 [](const Constant&) {},
                 [&](const Tabulated& k) {
                   for (double g : k.grid)
                     if (g > lo && g < hi) out.push_back(g);
                 },
                 [&](const Sum& k) {
                   for (const auto& t : k.terms) {
                     auto b = t.breakpoints(lo, hi);
                     out.insert(out.end(), b.begin(), b.end());
                   }
                 },
             },
             kind_);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double evaluate_potential(const Potential& q, double x) { return q(x); }

}  // namespace selfadj
