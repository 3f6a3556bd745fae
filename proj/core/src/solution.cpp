#include "selfadj/solution.hpp"

#include <algorithm>
#include <cmath>

#include "selfadj/errors.hpp"

namespace selfadj {
namespace {

// Quintic Hermite on [x0, x1] through (f, f', f'') at both ends.
// Returns the interpolant and its derivative at x.
Point quintic(double x0, double x1, double f0, double f1, double d0, double d1, double s0,
              double s1, double x) {
  const double h = x1 - x0;
  const double t = (x - x0) / h;
  const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
  const double h0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
  const double h1 = t - 6 * t3 + 8 * t4 - 3 * t5;
  const double h2 = 0.5 * (t2 - 3 * t3 + 3 * t4 - t5);
  const double h3 = 10 * t3 - 15 * t4 + 6 * t5;
  const double h4 = -4 * t3 + 7 * t4 - 3 * t5;
  const double h5 = 0.5 * (t3 - 2 * t4 + t5);
  const double g0 = -30 * t2 + 60 * t3 - 30 * t4;
  const double g1 = 1 - 18 * t2 + 32 * t3 - 15 * t4;
  const double g2 = 0.5 * (2 * t - 9 * t2 + 12 * t3 - 5 * t4);
  const double g3 = 30 * t2 - 60 * t3 + 30 * t4;
  const double g4 = -12 * t2 + 28 * t3 - 15 * t4;
  const double g5 = 0.5 * (3 * t2 - 8 * t3 + 5 * t4);
  const double u = f0 * h0 + h * d0 * h1 + h * h * s0 * h2 + f1 * h3 + h * d1 * h4 + h * h * s1 * h5;
  const double du = (f0 * g0 + f1 * g3) / h + d0 * g1 + d1 * g4 + h * (s0 * g2 + s1 * g5);
  return {u, du};
}

}  // namespace

Trajectory::Trajectory(std::vector<double> xs, std::vector<double> us, std::vector<double> dus,
                       double energy, const Potential& q)
    : xs_(std::move(xs)), us_(std::move(us)), dus_(std::move(dus)), energy_(energy),
      potential_key_(q.key()) {
  require(xs_.size() >= 2 && xs_.size() == us_.size() && xs_.size() == dus_.size(),
          ErrorKind::Validation, "trajectory needs >= 2 samples with matching arrays");
  if (xs_.front() > xs_.back()) {
    std::reverse(xs_.begin(), xs_.end());
    std::reverse(us_.begin(), us_.end());
    std::reverse(dus_.begin(), dus_.end());
  }
  for (std::size_t i = 1; i < xs_.size(); ++i)
    require(xs_[i] > xs_[i - 1], ErrorKind::Validation, "trajectory samples must be strictly monotone");
  d2us_.resize(xs_.size());
  for (std::size_t i = 0; i < xs_.size(); ++i) d2us_[i] = (q(xs_[i]) - energy_) * us_[i];
}

Point Trajectory::eval(double x) const {
  if (!contains(x))
    fail(ErrorKind::Domain, "x = " + std::to_string(x) + " outside trajectory range [" +
                                std::to_string(lo()) + ", " + std::to_string(hi()) + "]");
  auto it = std::lower_bound(xs_.begin(), xs_.end(), x);
  auto i = static_cast<std::size_t>(it - xs_.begin());
  if (i < xs_.size() && xs_[i] == x) return {us_[i], dus_[i]};
  const std::size_t j = i - 1;
  return quintic(xs_[j], xs_[i], us_[j], us_[i], dus_[j], dus_[i], d2us_[j], d2us_[i], x);
}

Trajectory Trajectory::combined(double a, const Trajectory& other, double b) const {
  require(xs_ == other.xs_, ErrorKind::Usage, "trajectory combination needs a shared grid");
  require(potential_key_ == other.potential_key_ && energy_ == other.energy_, ErrorKind::Usage,
          "trajectory combination needs the same (q, E)");
  Trajectory out;
  out.xs_ = xs_;
  out.energy_ = energy_;
  out.potential_key_ = potential_key_;
  const std::size_t n = xs_.size();
  out.us_.resize(n);
  out.dus_.resize(n);
  out.d2us_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.us_[i] = a * us_[i] + b * other.us_[i];
    out.dus_[i] = a * dus_[i] + b * other.dus_[i];
    out.d2us_[i] = a * d2us_[i] + b * other.d2us_[i];
  }
  return out;
}

ClosedForm::ClosedForm(double kappa_, double c1_, double c2_)
    : kappa(kappa_), c1(c1_), c2(c2_), key(Potential::inverse_square(kappa_).key()) {}

Point ClosedForm::eval(double r) const {
  if (!(r > 0.0) || !std::isfinite(r))
    fail(ErrorKind::Domain, "closed-form solution evaluated at r = " + std::to_string(r));
  const double sr = std::sqrt(r);
  if (kappa == 0.0) {
    const double lr = std::log(r);
    const double p1 = sr, d1 = 0.5 / sr;
    const double p2 = sr * lr, d2 = (lr + 2.0) / (2.0 * sr);
    return {c1 * p1 + c2 * p2, c1 * d1 + c2 * d2};
  }
  const double p1 = std::pow(r, 0.5 + kappa);
  const double p2 = std::pow(r, 0.5 - kappa);
  return {c1 * p1 + c2 * p2, c1 * (0.5 + kappa) * p1 / r + c2 * (0.5 - kappa) * p2 / r};
}


Point Solution::eval(double x) const {
  return std::visit([x](const auto& s) { return s.eval(x); }, impl_);
}

double Solution::lo() const {
  if (const auto* t = trajectory()) return t->lo();
  return 0.0;
}

double Solution::hi() const {
  if (const auto* t = trajectory()) return t->hi();
  return kInfinity;
}

double Solution::energy() const {
  if (const auto* t = trajectory()) return t->energy();
  return 0.0;
}

const std::string& Solution::potential_key() const {
  return std::visit([](const auto& s) -> const std::string& { return s.potential_key(); }, impl_);
}

Solution combine(double a, const Solution& s, double b, const Solution& t) {
  if (const auto* cs = s.closed_form()) {
    const auto* ct = t.closed_form();
    require(ct != nullptr && ct->kappa == cs->kappa, ErrorKind::Usage,
            "closed forms combine only within one Frobenius frame");
    return ClosedForm{cs->kappa, a * cs->c1 + b * ct->c1, a * cs->c2 + b * ct->c2};
  }
  const auto* ts = s.trajectory();
  const auto* tt = t.trajectory();
  require(tt != nullptr, ErrorKind::Usage, "cannot combine a trajectory with a closed form");
  return ts->combined(a, *tt, b);
}

double wronskian(const Solution& u, const Solution& v, double x) {
  require(u.potential_key() == v.potential_key() && u.energy() == v.energy(), ErrorKind::Usage,
          "Wronskian of solutions for different (q, E)");
  return wronskian(u.eval(x), v.eval(x));
}

}  // namespace selfadj
