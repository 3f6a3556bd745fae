#include "selfadj/ivp.hpp"

#include <algorithm>
#include <cmath>

#include <boost/numeric/odeint/stepper/controlled_runge_kutta.hpp>
#include <boost/numeric/odeint/stepper/runge_kutta_fehlberg78.hpp>

#include "selfadj/errors.hpp"

namespace selfadj {

namespace odeint = boost::numeric::odeint;

void IvpControls::validate() const {
  require(rel_tol > 0.0 && abs_tol > 0.0, ErrorKind::Validation, "tolerances must be positive");
  require(max_step > 0.0, ErrorKind::Validation, "max_step must be positive");
  require(picard_max_sweeps > 0, ErrorKind::Validation, "picard_max_sweeps must be positive");
  require(picard_contraction > 0.0 && picard_contraction < 1.0, ErrorKind::Validation,
          "Picard contraction bound must lie in (0, 1)");
  require(picard_degree >= 4 && picard_degree <= 64, ErrorKind::Validation,
          "Picard degree must lie in [4, 64]");
  require(start_cutoff > 0.0, ErrorKind::Validation, "start_cutoff must be positive");
}

namespace detail {

void check_span(const Potential& q, double x0, double x_target, const IvpControls& controls) {
  const Interval& d = q.domain();
  require(std::isfinite(x0) && std::isfinite(x_target), ErrorKind::Domain,
          "integration endpoints must be finite");
  require(d.interior(x0), ErrorKind::Domain, "x0 outside the interior of the domain");
  require(d.interior(x_target), ErrorKind::Integration,
          "integration span leaves the open interval (q not integrable up to the endpoint)");
  const double lo = std::min(x0, x_target);
  const double hi = std::max(x0, x_target);
  if (q.left_singular() && d.left_finite())
    require(lo - d.a >= controls.start_cutoff * std::max(1.0, std::abs(d.a)), ErrorKind::Domain,
            "span comes closer to the singular left endpoint than start_cutoff");
  if (q.right_singular() && d.right_finite())
    require(d.b - hi >= controls.start_cutoff * std::max(1.0, std::abs(d.b)), ErrorKind::Domain,
            "span comes closer to the singular right endpoint than start_cutoff");
}

}  // namespace detail

namespace {

using State = std::vector<double>;

constexpr double kLocalTolFactor = 1e-2;

std::vector<Trajectory> rk_solve(const Potential& q, double energy, double x0,
                                 const std::vector<Point>& initial, double x_target,
                                 const IvpControls& c) {
  const std::size_t n = initial.size();
  State y(2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    y[2 * k] = initial[k].u;
    y[2 * k + 1] = initial[k].du;
  }
  std::vector<double> xs{x0};
  std::vector<std::vector<double>> us(n), dus(n);
  for (std::size_t k = 0; k < n; ++k) {
    us[k].push_back(initial[k].u);
    dus[k].push_back(initial[k].du);
  }
  if (x_target == x0) fail(ErrorKind::Validation, "empty integration span");

  auto rhs = [&q, energy, n](const State& s, State& ds, double x) {
    const double v = q(x) - energy;
    for (std::size_t k = 0; k < n; ++k) {
      ds[2 * k] = s[2 * k + 1];
      ds[2 * k + 1] = v * s[2 * k];
    }
  };

  using Stepper = odeint::runge_kutta_fehlberg78<State>;
  using Checker = odeint::default_error_checker<double, odeint::range_algebra, odeint::default_operations>;
  // rel_tol bounds the global error, so the per-step target is tighter.
  const double local_rel = std::max(kLocalTolFactor * c.rel_tol, 1e-15);
  odeint::controlled_runge_kutta<Stepper, Checker> stepper(Checker(c.abs_tol, local_rel, 1.0, 0.0));

  const double dir = x_target > x0 ? 1.0 : -1.0;
  const double span = std::abs(x_target - x0);
  // Table nodes are hit exactly so no step or interpolation interval straddles a kink.
  std::vector<double> stops = q.breakpoints(std::min(x0, x_target), std::max(x0, x_target));
  if (dir < 0) std::reverse(stops.begin(), stops.end());
  stops.push_back(x_target);
  std::size_t next = 0;
  double x = x0;
  double dt = dir * std::min({span, c.max_step, 1e-2 * span});
  int steps = 0;
  while (dir * (x_target - x) > 0.0) {
    if (++steps > c.max_steps) fail(ErrorKind::Convergence, "maximum number of RK steps exceeded");
    const double stop = stops[next];
    const double remaining = stop - x;
    if (std::abs(dt) > c.max_step) dt = dir * c.max_step;
    bool last = false;
    if (std::abs(dt) >= std::abs(remaining) * (1.0 - 1e-12)) {
      dt = remaining;
      last = true;
    }
    const double dt_before = dt;
    const auto res = stepper.try_step(rhs, y, x, dt);
    if (res == odeint::fail) {
      if (std::abs(dt) < 1e-14 * std::max(1.0, std::abs(x)))
        fail(ErrorKind::Convergence, "RK step size underflow near x = " + std::to_string(x));
      continue;
    }
    if (last && dt_before == remaining) {
      x = stop;
      ++next;
    }
    for (double v : y)
      if (!std::isfinite(v)) fail(ErrorKind::Integration, "non-finite solution near x = " + std::to_string(x));
    xs.push_back(x);
    for (std::size_t k = 0; k < n; ++k) {
      us[k].push_back(y[2 * k]);
      dus[k].push_back(y[2 * k + 1]);
    }
  }
  std::vector<Trajectory> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) out.emplace_back(xs, std::move(us[k]), std::move(dus[k]), energy, q);
  return out;
}

// Merge a leftward and rightward solve sharing x0 into one ascending grid.
Trajectory merge(const Trajectory& left, const Trajectory& right, double energy, const Potential& q) {
  std::vector<double> xs = left.xs(), us = left.us(), dus = left.dus();
  xs.insert(xs.end(), right.xs().begin() + 1, right.xs().end());
  us.insert(us.end(), right.us().begin() + 1, right.us().end());
  dus.insert(dus.end(), right.dus().begin() + 1, right.dus().end());
  return Trajectory(std::move(xs), std::move(us), std::move(dus), energy, q);
}

}  // namespace

std::vector<Trajectory> solve_ivp_system(const Potential& q, double energy, double x0,
                                         const std::vector<Point>& initial, double x_target,
                                         const IvpControls& controls) {
  controls.validate();
  require(!initial.empty(), ErrorKind::Validation, "no initial conditions supplied");
  require(std::isfinite(energy), ErrorKind::Validation, "energy must be finite");
  detail::check_span(q, x0, x_target, controls);
  if (controls.method == IvpMethod::Picard)
    return detail::picard_solve(q, energy, x0, initial, x_target, controls);
  return rk_solve(q, energy, x0, initial, x_target, controls);
}

Trajectory solve_ivp(const Potential& q, double energy, double x0, double u0, double du0,
                     double x_target, const IvpControls& controls) {
  return std::move(solve_ivp_system(q, energy, x0, {{u0, du0}}, x_target, controls).front());
}

FundamentalSystem fundamental_system(const Potential& q, double energy, double x0,
                                     const IvpControls& controls, double x_lo, double x_hi) {
  require(x_lo <= x0 && x0 <= x_hi && x_lo < x_hi, ErrorKind::Validation,
          "fundamental system span must contain x0");
  const std::vector<Point> ic{{1.0, 0.0}, {0.0, 1.0}};
  if (x_lo == x0) {
    auto r = solve_ivp_system(q, energy, x0, ic, x_hi, controls);
    return {q, energy, x0, std::move(r[0]), std::move(r[1]), controls};
  }
  if (x_hi == x0) {
    auto l = solve_ivp_system(q, energy, x0, ic, x_lo, controls);
    return {q, energy, x0, std::move(l[0]), std::move(l[1]), controls};
  }
  auto l = solve_ivp_system(q, energy, x0, ic, x_lo, controls);
  auto r = solve_ivp_system(q, energy, x0, ic, x_hi, controls);
  return {q, energy, x0, merge(l[0], r[0], energy, q), merge(l[1], r[1], energy, q), controls};
}

FundamentalSystem fundamental_system(const Potential& q, double energy, double x0,
                                     const IvpControls& controls) {
  const Interval& d = q.domain();
  require(d.interior(x0), ErrorKind::Domain, "x0 outside the interior of the domain");
  const double lo = d.left_finite() ? x0 - 0.5 * (x0 - d.a) : x0 - 1.0;
  const double hi = d.right_finite() ? x0 + 0.5 * (d.b - x0) : x0 + 1.0;
  return fundamental_system(q, energy, x0, controls, lo, hi);
}

FundamentalSystem FundamentalSystem::extended_to(double x) const {
  return fundamental_system(q, energy, x0, controls, std::min(x, f1.lo()), std::max(x, f1.hi()));
}

}  // namespace selfadj
