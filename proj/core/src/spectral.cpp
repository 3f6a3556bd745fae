#include "selfadj/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/bessel.hpp>

#include "selfadj/errors.hpp"
#include "selfadj/frobenius.hpp"
#include "selfadj/quadrature.hpp"

namespace selfadj {

void EnergyWindow::validate() const {
  require(std::isfinite(e_min) && std::isfinite(e_max) && e_min < e_max, ErrorKind::Validation,
          "energy window needs finite e_min < e_max");
  require(e_max < 0.0, ErrorKind::Unsupported,
          "only negative energies are searched; [0, inf) is continuous spectrum");
}

void SpectralControls::validate() const {
  ivp.validate();
  require(cutoff_kr >= 15.0, ErrorKind::Configuration,
          "right cutoff too small: sqrt(-E) R must be at least 15 for the decaying branch to dominate");
  require(cutoff_kr <= 500.0, ErrorKind::Configuration, "right cutoff beyond sqrt(-E) R = 500 underflows");
  require(seed_kr > 0.0 && seed_kr < match_kr && match_kr < cutoff_kr, ErrorKind::Validation,
          "need 0 < seed_kr < match_kr < cutoff_kr");
  require(mesh_per_decade >= 2, ErrorKind::Validation, "mesh_per_decade must be at least 2");
  require(bracket_rel > 0.0 && merge_rel > 0.0, ErrorKind::Validation, "root tolerances must be positive");
}

namespace {

struct ShotData {
  Shot shot;
  std::optional<Trajectory> left;
  std::optional<Trajectory> right;
  /// Left solution squared, integrated from the endpoint to r_seed.
  double inner_norm2 = 0.0;
};

Point normalized(Point p, double k) {
  const double n = std::hypot(p.u, p.du / k);
  require(n > 0.0, ErrorKind::TrivialSolution, "trivial seed");
  return {p.u / n, p.du / n};
}

Point left_seed(const ExtensionDescriptor& e, double energy, double r) {
  const Potential& q = e.potential();
  if (const auto* t = e.theta()) {
    const double c = std::cos(t->theta.value()), s = std::sin(t->theta.value());
    if (const auto* fr = std::get_if<FrobeniusFrame>(&t->frame))
      return frobenius_boundary_series(fr->kappa, c, s, energy, r);
    // General frames: zero-energy boundary data at the seed point.
    const auto h = e.boundary_solution();
    require(h->contains(r), ErrorKind::Domain, "numeric frame does not cover the seed radius; extend it first");
    return h->eval(r);
  }
  const auto kappa = q.inverse_square_kappa();
  require(kappa.has_value(), ErrorKind::Unsupported,
          "shooting for the closure needs an inverse-square potential at the left endpoint");
  return frobenius_series(std::abs(*kappa), energy, r);
}

// Integral of the unnormalised left seed solution squared over (a, a + eps).
// Zero for numeric frames, whose boundary solution is only known away from a.
double left_seed_norm2(const ExtensionDescriptor& e, double energy, double eps) {
  if (const auto* t = e.theta()) {
    if (const auto* fr = std::get_if<FrobeniusFrame>(&t->frame))
      return frobenius_boundary_norm2(fr->kappa, std::cos(t->theta.value()), std::sin(t->theta.value()), energy, eps);
    return 0.0;
  }
  return frobenius_boundary_norm2(std::abs(*e.potential().inverse_square_kappa()), 1.0, 0.0, energy, eps);
}

Point right_seed(const Potential& q, double k, double R) {
  if (const auto kappa = q.inverse_square_kappa()) {
    const double nu = std::abs(*kappa);
    const double z = k * R;
    const double K = boost::math::cyl_bessel_k(nu, z);
    const double dK = -0.5 * (boost::math::cyl_bessel_k(nu - 1.0, z) + boost::math::cyl_bessel_k(nu + 1.0, z));
    require(K > 0.0, ErrorKind::Configuration, "decaying seed underflowed at the right cutoff");
    // sqrt(R) K(kR), scaled by 1/K.
    const double sr = std::sqrt(R);
    return {sr, 0.5 / sr + sr * k * dK / K};
  }
  const double v = k * k + q(R);
  require(v > 0.0, ErrorKind::Configuration, "q - E must be positive at the right cutoff");
  return {1.0, -std::sqrt(v)};
}

ShotData shoot_impl(const ExtensionDescriptor& e, double energy, const SpectralControls& c, bool keep) {
  c.validate();
  require(std::isfinite(energy), ErrorKind::Validation, "energy must be finite");
  require(energy < 0.0, ErrorKind::Unsupported, "no decaying seed for E >= 0 (continuous spectrum)");
  const Interval& d = e.potential().domain();
  require(d.left_finite() && !d.right_finite(), ErrorKind::Unsupported,
          "shooting supports half-lines (a, inf) only");
  const Potential& q = e.potential();
  const double k = std::sqrt(-energy);
  const double a = d.a;
  ShotData out;
  Shot& s = out.shot;
  s.energy = energy;
  s.k = k;
  s.r_seed = a + c.seed_kr / k;
  s.x_match = a + c.match_kr / k;
  s.cutoff = a + c.cutoff_kr / k;

  const Point seed = left_seed(e, energy, s.r_seed);
  const Point l0 = normalized(seed, k);
  const Point r0 = normalized(right_seed(q, k, s.cutoff), k);
  auto lt = solve_ivp(q, energy, s.r_seed, l0.u, l0.du, s.x_match, c.ivp);
  auto rt = solve_ivp(q, energy, s.cutoff, r0.u, r0.du, s.x_match, c.ivp);
  s.left = lt.eval(s.x_match);
  s.right = rt.eval(s.x_match);
  const double nl = std::hypot(s.left.u, s.left.du / k);
  const double nr = std::hypot(s.right.u, s.right.du / k);
  s.mismatch = wronskian(s.left, s.right) / (k * nl * nr);
  if (keep) {
    const double n2 = seed.u * seed.u + seed.du * seed.du / (k * k);
    out.inner_norm2 = left_seed_norm2(e, energy, s.r_seed - a) / n2;
    out.left = std::move(lt);
    out.right = std::move(rt);
  }
  return out;
}

// Unit-norm eigenfunction stitched at x_match; returns it with the relative
// derivative jump at the stitch.
std::pair<Trajectory, double> stitch(const ShotData& d, const Potential& q) {
  const Trajectory& L = *d.left;
  const Trajectory& R = *d.right;
  const double scale = d.shot.left.u / d.shot.right.u;
  std::vector<double> xs = L.xs(), us = L.us(), dus = L.dus();
  for (std::size_t i = 1; i < R.size(); ++i) {
    xs.push_back(R.xs()[i]);
    us.push_back(scale * R.us()[i]);
    dus.push_back(scale * R.dus()[i]);
  }
  // The shared matching point keeps the left derivative.
  Trajectory raw(xs, us, dus, d.shot.energy, q);
  double norm2 = d.inner_norm2;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i)
    norm2 += integrate([&raw](double x) { const double u = raw.eval(x).u; return u * u; }, xs[i], xs[i + 1], 8);
  const double n = std::sqrt(norm2);
  double sign = 1.0;
  for (double u : us) {
    if (u != 0.0) {
      sign = u > 0.0 ? 1.0 : -1.0;
      break;
    }
  }
  for (auto& u : us) u *= sign / n;
  for (auto& du : dus) du *= sign / n;
  const double k = d.shot.k;
  const double jump = scale * d.shot.right.du - d.shot.left.du;
  const double ref = std::hypot(d.shot.left.u, d.shot.left.du / k) * k;
  return {Trajectory(std::move(xs), std::move(us), std::move(dus), d.shot.energy, q), std::abs(jump) / ref};
}

}  // namespace

Shot shoot(const ExtensionDescriptor& e, double energy, const SpectralControls& controls) {
  return shoot_impl(e, energy, controls, false).shot;
}

double shoot_mismatch(const ExtensionDescriptor& e, double energy, const SpectralControls& controls) {
  return shoot(e, energy, controls).mismatch;
}

double eigen_residual(const Trajectory& u, const Potential& q) {
  require(u.potential_key() == q.key(), ErrorKind::Usage, "trajectory was not solved against this potential");
  const auto& xs = u.xs();
  const double E = u.energy();
  double sum = 0.0, norm2 = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double a = xs[i], b = xs[i + 1];
    const double integral = integrate([&](double x) { return (q(x) - E) * u.eval(x).u; }, a, b, 8);
    const double defect = (u.dus()[i + 1] - u.dus()[i]) - integral;
    sum += defect * defect / (b - a);
    norm2 += integrate([&u](double x) { const double v = u.eval(x).u; return v * v; }, a, b, 8);
  }
  const double scale = E != 0.0 ? std::abs(E) : 1.0;
  return std::sqrt(sum) / (scale * std::sqrt(norm2));
}

EigenSearch eigenvalues_below(const ExtensionDescriptor& e, const EnergyWindow& w, const SpectralControls& c) {
  w.validate();
  c.validate();
  EigenSearch out;
  const double l_hi = std::log10(-w.e_min), l_lo = std::log10(-w.e_max);
  const int n = std::max(2, static_cast<int>(std::ceil((l_hi - l_lo) * c.mesh_per_decade)) + 1);
  out.mesh_points = n;
  std::vector<double> es(n), ms(n);
  std::vector<std::string> errs(n);
  for (int i = 0; i < n; ++i) {
    // Ascending in E: from e_min up to e_max.
    const double t = static_cast<double>(i) / (n - 1);
    es[i] = i == 0 ? w.e_min : (i == n - 1 ? w.e_max : -std::pow(10.0, l_hi + (l_lo - l_hi) * t));
    try {
      ms[i] = shoot_mismatch(e, es[i], c);
    } catch (const Error& ex) {
      if (ex.kind() == ErrorKind::Configuration || ex.kind() == ErrorKind::Unsupported) throw;
      ms[i] = std::nan("");
      errs[i] = ex.what();
    }
  }
  std::vector<double> roots_seen;
  for (int i = 0; i + 1 < n; ++i) {
    if (std::isnan(ms[i]) || std::isnan(ms[i + 1])) {
      const std::string& msg = errs[i].empty() ? errs[i + 1] : errs[i];
      if (!msg.empty() && (out.failures.empty() || out.failures.back().message != msg || out.failures.back().hi != es[i]))
        out.failures.push_back({es[i], es[i + 1], msg});
      else if (!out.failures.empty())
        out.failures.back().hi = es[i + 1];
      continue;
    }
    const bool at_node = ms[i] == 0.0;
    if (!(at_node || ms[i] * ms[i + 1] < 0.0)) continue;
    std::vector<MismatchSample> hist{{es[i], ms[i]}, {es[i + 1], ms[i + 1]}};
    double lo = es[i], hi = es[i + 1], mlo = ms[i], mhi = ms[i + 1];
    double root = lo;
    try {
      if (!at_node) {
        int iter = 0;
        while (hi - lo > c.bracket_rel * std::abs(0.5 * (lo + hi))) {
          if (++iter > 200) fail(ErrorKind::Convergence, "bisection did not shrink the bracket");
          const double mid = 0.5 * (lo + hi);
          if (mid <= lo || mid >= hi) break;
          const double mm = shoot_mismatch(e, mid, c);
          hist.push_back({mid, mm});
          if (mm == 0.0) {
            lo = hi = mid;
            mlo = mhi = 0.0;
            break;
          }
          if ((mm < 0.0) == (mlo < 0.0)) {
            lo = mid;
            mlo = mm;
          } else {
            hi = mid;
            mhi = mm;
          }
        }
        root = lo == hi ? lo : lo - mlo * (hi - lo) / (mhi - mlo);
        if (!(root >= lo && root <= hi)) root = 0.5 * (lo + hi);
      }
      bool merged = false;
      for (double r : roots_seen) merged = merged || std::abs(r - root) <= c.merge_rel * std::abs(root);
      if (merged) continue;
      roots_seen.push_back(root);
      auto data = shoot_impl(e, root, c, true);
      hist.push_back({root, data.shot.mismatch});
      auto [u, jump] = stitch(data, e.potential());
      const double res = std::max(eigen_residual(u, e.potential()), jump);
      out.eigenvalues.push_back({root, std::move(u), res, data.shot.mismatch, data.shot.cutoff, data.shot.r_seed,
                                 std::move(hist)});
    } catch (const Error& ex) {
      out.failures.push_back({es[i], es[i + 1], ex.what()});
    }
  }
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end(),
            [](const EigenResult& x, const EigenResult& y) { return x.energy < y.energy; });
  return out;
}

std::optional<double> bound_state_oracle(double kappa, BoundaryParameter theta) {
  const double nu = std::abs(kappa);
  require(nu > 0.0 && nu < 1.0, ErrorKind::Validation, "oracle needs 0 < |kappa| < 1");
  const double th = theta.value();
  constexpr double half_pi = 0.5 * std::numbers::pi;
  if (!(th > half_pi)) return std::nullopt;
  const double slope = kappa > 0.0 ? -std::cos(th) / std::sin(th) : -std::sin(th) / std::cos(th);
  const double rhs = slope * std::tgamma(1.0 + nu) / std::tgamma(1.0 - nu);
  if (!(rhs > 0.0)) return std::nullopt;
  const double k = 2.0 * std::pow(rhs, 0.5 / nu);
  return -k * k;
}

std::vector<double> shifted_spectrum(const std::vector<double>& channel_eigs, double p) {
  std::vector<double> out;
  out.reserve(channel_eigs.size());
  for (double e : channel_eigs) out.push_back(e + p * p);
  return out;
}

}  // namespace selfadj
