#pragma once

#include <string>
#include <variant>
#include <vector>

#include "selfadj/potential.hpp"

namespace selfadj {

/// Value and first derivative of a solution at one point.
struct Point {
  double u = 0.0;
  double du = 0.0;
};

/// Sampled solution of -u'' + q u = E u.
///
/// Samples are kept in ascending x regardless of integration direction.
/// Between samples u is the quintic Hermite interpolant through
/// (u, u', u'') at both neighbours, with u'' = (q - E) u taken from the
/// equation itself; u' is the derivative of that interpolant.
class Trajectory {
 public:
  Trajectory(std::vector<double> xs, std::vector<double> us, std::vector<double> dus,
             double energy, const Potential& q);

  std::size_t size() const noexcept { return xs_.size(); }
  const std::vector<double>& xs() const noexcept { return xs_; }
  const std::vector<double>& us() const noexcept { return us_; }
  const std::vector<double>& dus() const noexcept { return dus_; }
  const std::vector<double>& d2us() const noexcept { return d2us_; }
  double energy() const noexcept { return energy_; }
  const std::string& potential_key() const noexcept { return potential_key_; }

  double lo() const noexcept { return xs_.front(); }
  double hi() const noexcept { return xs_.back(); }
  bool contains(double x) const noexcept { return x >= lo() && x <= hi(); }

  Point eval(double x) const;

  /// a*this + b*other on the shared grid; both must come from one solve.
  Trajectory combined(double a, const Trajectory& other, double b) const;

 private:
  Trajectory() = default;

  std::vector<double> xs_, us_, dus_, d2us_;
  double energy_ = 0.0;
  std::string potential_key_;
};

/// Exact evaluator c1*psi1 + c2*psi2 for the zero-energy inverse-square
/// equation, where (psi1, psi2) is the Frobenius pair of kappa:
///   kappa != 0: (r^(1/2+kappa), r^(1/2-kappa))
///   kappa == 0: (r^(1/2),       r^(1/2) ln r)
struct ClosedForm {
  explicit ClosedForm(double kappa, double c1 = 1.0, double c2 = 0.0);

  double kappa;
  double c1;
  double c2;

  Point eval(double r) const;
  const std::string& potential_key() const noexcept { return key; }

 private:
  std::string key;
};

/// Either a sampled trajectory or a closed-form Frobenius combination.
/// Anything that accepts a Solution accepts both.
class Solution {
 public:
  Solution(Trajectory t) : impl_(std::move(t)) {}  // NOLINT(google-explicit-constructor)
  Solution(ClosedForm c) : impl_(c) {}             // NOLINT(google-explicit-constructor)

  Point eval(double x) const;
  double lo() const;
  double hi() const;
  bool contains(double x) const { return x >= lo() && x <= hi(); }
  double energy() const;
  const std::string& potential_key() const;

  const Trajectory* trajectory() const { return std::get_if<Trajectory>(&impl_); }
  const ClosedForm* closed_form() const { return std::get_if<ClosedForm>(&impl_); }

 private:
  std::variant<Trajectory, ClosedForm> impl_;
};

/// a*s + b*t. Closed forms must share kappa; trajectories must share a grid.
Solution combine(double a, const Solution& s, double b, const Solution& t);

/// W(u, v)(x) = u v' - u' v. Both solutions must solve the same (q, E).
double wronskian(const Solution& u, const Solution& v, double x);

/// Same as above for raw point data.
inline double wronskian(const Point& u, const Point& v) { return u.u * v.du - u.du * v.u; }

}  // namespace selfadj
