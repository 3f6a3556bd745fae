#include "selfadj/endpoint.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <sstream>

#include "selfadj/errors.hpp"
#include "selfadj/frobenius.hpp"
#include "selfadj/quadrature.hpp"

namespace selfadj {

const char* to_string(Endpoint e) noexcept { return e == Endpoint::Left ? "left" : "right"; }
const char* to_string(Verdict v) noexcept { return v == Verdict::LPC ? "LPC" : "LCC"; }
const char* to_string(ClassificationMethod m) noexcept {
  return m == ClassificationMethod::Analytic ? "analytic" : "numerical";
}
const char* to_string(ExtensionKind k) noexcept {
  return k == ExtensionKind::EssentiallySelfAdjoint ? "essentially-self-adjoint" : "one-parameter-family";
}

double default_anchor(const Interval& d) {
  if (d.a == 0.0 && !d.right_finite()) return 1.0;
  if (d.left_finite() && d.right_finite()) return 0.5 * (d.a + d.b);
  if (d.left_finite()) return d.a + 1.0;
  if (d.right_finite()) return d.b - 1.0;
  return 0.0;
}

namespace {

enum class Trend { Undecided, Converged, Diverged };

Trend assess(const std::vector<double>& m, const ClassificationControls& c, double& last_ratio) {
  const std::size_t k = m.size();
  for (double v : m)
    if (!std::isfinite(v)) return Trend::Diverged;
  if (k < 2) return Trend::Undecided;
  std::vector<double> ratio(k, 0.0);
  for (std::size_t j = 1; j < k; ++j) ratio[j] = m[j - 1] > 0.0 ? m[j] / m[j - 1] : (m[j] > 0.0 ? kInfinity : 0.0);
  last_ratio = ratio[k - 1];
  std::vector<double> cum(k);
  double s = 0.0;
  for (std::size_t j = 0; j < k; ++j) cum[j] = (s += m[j]);
  if (s > 1e300) return Trend::Diverged;

  // Early windows still carry the transient from the anchor's initial data.
  if (k < static_cast<std::size_t>(c.min_windows)) return Trend::Undecided;
  const auto d = static_cast<std::size_t>(c.divergence_windows);
  if (k > d) {
    bool stalled = true;
    for (std::size_t j = k - d; j < k; ++j) stalled = stalled && ratio[j] >= 1.0 - c.stall_slack;
    if (stalled) return Trend::Diverged;
    if (cum[k - 1 - d] > 0.0 && cum[k - 1] / cum[k - 1 - d] > c.divergence_growth) return Trend::Diverged;
  }

  double rmax = 0.0, rmin = kInfinity;
  for (std::size_t j = k - 3; j < k; ++j) {
    rmax = std::max(rmax, ratio[j]);
    rmin = std::min(rmin, ratio[j]);
  }
  if (!(rmax <= 1.0 - c.convergence_margin)) return Trend::Undecided;
  if (rmax - rmin > 0.1 * (1.0 - rmax) + 1e-12 && rmax > 1e-3) return Trend::Undecided;
  auto tail_sum = [&](std::size_t j) {
    const double r = ratio[j];
    return cum[j] + m[j] * r / (1.0 - r);
  };
  const double now = tail_sum(k - 1), before = tail_sum(k - 2);
  if (std::abs(now - before) <= c.cauchy_tol * std::abs(now)) return Trend::Converged;
  return Trend::Undecided;
}

// Supplies masses of u^2 over successive windows for each tracked solution.
class WindowSource {
 public:
  virtual ~WindowSource() = default;
  virtual std::vector<double> mass(double from, double to) = 0;
};

class ExactSource : public WindowSource {
 public:
  explicit ExactSource(std::vector<std::function<Point(double)>> fs) : fs_(std::move(fs)) {}
  std::vector<double> mass(double from, double to) override {
    const double lo = std::min(from, to), hi = std::max(from, to);
    std::vector<double> out;
    for (const auto& f : fs_) out.push_back(integrate_log([&f](double x) { const double u = f(x).u; return u * u; }, lo, hi, 24));
    return out;
  }

 private:
  std::vector<std::function<Point(double)>> fs_;
};

double trajectory_mass(const Trajectory& t) {
  double s = 0.0;
  const auto& xs = t.xs();
  for (std::size_t i = 0; i + 1 < xs.size(); ++i)
    s += integrate([&t](double x) { const double u = t.eval(x).u; return u * u; }, xs[i], xs[i + 1], 8);
  return s;
}

class MarchingSource : public WindowSource {
 public:
  MarchingSource(const Potential& q, double energy, double x0, std::vector<Point> states, const IvpControls& ivp)
      : q_(q), energy_(energy), ivp_(ivp), state_(std::move(states)), x_(x0) {}
  std::vector<double> mass(double from, double to) override {
    require(from == x_, ErrorKind::Usage, "windows must be contiguous");
    auto traj = solve_ivp_system(q_, energy_, from, state_, to, ivp_);
    std::vector<double> out;
    for (std::size_t i = 0; i < traj.size(); ++i) {
      state_[i] = traj[i].eval(to);
      out.push_back(trajectory_mass(traj[i]));
    }
    x_ = to;
    return out;
  }

 private:
  Potential q_;
  double energy_;
  IvpControls ivp_;
  std::vector<Point> state_;
  double x_;
};

// Coefficients (c1, c2) with c1 p1 + c2 p2 matching (u, du) at one point.
std::pair<double, double> match(const Point& p1, const Point& p2, const Point& target) {
  const double w = wronskian(p1, p2);
  require(std::abs(w) > 0.0, ErrorKind::DegenerateFrame, "dependent Frobenius pair");
  return {wronskian(target, p2) / w, wronskian(p1, target) / w};
}

std::unique_ptr<WindowSource> make_source(const Potential& q, double energy, Endpoint endpoint, double x0,
                                          const std::vector<Point>& states, const ClassificationControls& c) {
  const auto kappa = q.inverse_square_kappa();
  if (kappa && endpoint == Endpoint::Left && (energy == 0.0 || std::abs(*kappa) < 1.0)) {
    // Extend toward r = 0 with exact E-continued Frobenius solutions rather
    // than integrating into the r^-2 singularity.
    const double k = *kappa;
    std::function<Point(double)> base1 = [k, energy](double r) { return frobenius_series(std::abs(k), energy, r); };
    std::function<Point(double)> base2;
    if (k == 0.0)
      base2 = [energy](double r) { return frobenius_log_series(energy, r); };
    else
      base2 = [k, energy](double r) { return frobenius_series(-std::abs(k), energy, r); };
    if (energy == 0.0) {
      const auto [p1, p2] = frobenius_pair(std::abs(k));
      base1 = [p1](double r) { return p1.eval(r); };
      base2 = [p2](double r) { return p2.eval(r); };
    }
    const Point b1 = base1(x0), b2 = base2(x0);
    std::vector<std::function<Point(double)>> fs;
    for (const Point& st : states) {
      const auto [a1, a2] = match(b1, b2, st);
      fs.emplace_back([=](double r) {
        const Point u = base1(r), v = base2(r);
        return Point{a1 * u.u + a2 * v.u, a1 * u.du + a2 * v.du};
      });
    }
    return std::make_unique<ExactSource>(std::move(fs));
  }
  return std::make_unique<MarchingSource>(q, energy, x0, states, c.ivp);
}

struct WindowRun {
  WindowDiagnostics diag;
  std::vector<std::vector<double>> masses;
  std::vector<Trend> trends;
  std::string stop_reason;
};

// Extends each solution from its data at the anchor over the window sequence
// until every trend is converged or some trend diverged.
WindowRun run_windows(const Potential& q, double energy, Endpoint endpoint, double x0,
                      const std::vector<Point>& states, const ClassificationControls& c) {
  const Interval& d = q.domain();
  require(d.interior(x0), ErrorKind::Domain, "classification anchor outside the interval");
  require(c.shrink > 0.0 && c.shrink < 1.0 && c.grow > 1.0, ErrorKind::Validation,
          "window factors must satisfy 0 < shrink < 1 < grow");

  auto edge = [&](int k) {
    const double scale = x0 != 0.0 ? std::abs(x0) : 1.0;
    if (endpoint == Endpoint::Left) {
      if (d.left_finite()) return d.a + (x0 - d.a) * std::pow(c.shrink, k);
      return x0 - (std::pow(c.grow, k) - 1.0) * scale;
    }
    if (d.right_finite()) return d.b - (d.b - x0) * std::pow(c.shrink, k);
    return x0 + (std::pow(c.grow, k) - 1.0) * scale;
  };

  auto source = make_source(q, energy, endpoint, x0, states, c);
  WindowRun run;
  run.diag.anchor = x0;
  run.diag.edges.push_back(edge(0));
  run.masses.assign(states.size(), {});
  run.trends.assign(states.size(), Trend::Undecided);
  run.stop_reason = "window budget exhausted";
  std::vector<double> ratios(states.size(), 0.0);
  for (int k = 0; k < c.max_windows; ++k) {
    const double from = edge(k), to = edge(k + 1);
    if (from == to) {
      run.stop_reason = "window edges collapsed at double precision";
      break;
    }
    std::vector<double> m;
    try {
      m = source->mass(from, to);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Integration) {
        // Overflowing solutions are divergence evidence.
        run.diag.edges.push_back(to);
        for (std::size_t i = 0; i < states.size(); ++i) run.masses[i].push_back(kInfinity);
        run.trends[0] = Trend::Diverged;
        break;
      }
      if (e.kind() == ErrorKind::Domain || e.kind() == ErrorKind::Convergence) {
        run.stop_reason = e.what();
        break;
      }
      throw;
    }
    run.diag.edges.push_back(to);
    bool any_diverged = false, all_converged = true;
    for (std::size_t i = 0; i < states.size(); ++i) {
      run.masses[i].push_back(m[i]);
      run.trends[i] = assess(run.masses[i], c, ratios[i]);
      any_diverged = any_diverged || run.trends[i] == Trend::Diverged;
      all_converged = all_converged && run.trends[i] == Trend::Converged;
    }
    if (any_diverged || all_converged) break;
  }
  if (!run.masses.empty()) run.diag.mass_f1 = run.masses[0];
  if (run.masses.size() > 1) run.diag.mass_f2 = run.masses[1];
  run.diag.ratio_f1 = ratios.empty() ? 0.0 : ratios[0];
  run.diag.ratio_f2 = ratios.size() > 1 ? ratios[1] : 0.0;
  return run;
}

[[noreturn]] void inconclusive(Endpoint endpoint, const WindowRun& run) {
  std::ostringstream os;
  os << "inconclusive " << to_string(endpoint) << "-endpoint evidence after "
     << run.diag.edges.size() - 1 << " windows (" << run.stop_reason << "); last ratios "
     << run.diag.ratio_f1 << ", " << run.diag.ratio_f2;
  throw ClassificationError("classification error: " + os.str(), run.diag);
}

EndpointClassification numerical(const Potential& q, double energy, Endpoint endpoint,
                                 const ClassificationControls& c) {
  const double x0 = c.anchor.value_or(default_anchor(q.domain()));
  const WindowRun run = run_windows(q, energy, endpoint, x0, {{1.0, 0.0}, {0.0, 1.0}}, c);
  const auto diverged = [](Trend t) { return t == Trend::Diverged; };
  const auto converged = [](Trend t) { return t == Trend::Converged; };
  if (std::any_of(run.trends.begin(), run.trends.end(), diverged))
    return {endpoint, Verdict::LPC, ClassificationMethod::Numerical, run.diag};
  if (std::all_of(run.trends.begin(), run.trends.end(), converged))
    return {endpoint, Verdict::LCC, ClassificationMethod::Numerical, run.diag};
  inconclusive(endpoint, run);
}

}  // namespace

EndpointClassification classify_endpoint(const Potential& q, double energy, Endpoint endpoint,
                                         const ClassificationControls& controls) {
  require(std::isfinite(energy), ErrorKind::Validation, "energy must be finite");
  controls.ivp.validate();
  if (const auto kappa = q.inverse_square_kappa(); kappa && !controls.force_numerical) {
    const Verdict v = endpoint == Endpoint::Right ? Verdict::LPC
                      : std::abs(*kappa) < 1.0   ? Verdict::LCC
                                                 : Verdict::LPC;
    return {endpoint, v, ClassificationMethod::Analytic, {}};
  }
  return numerical(q, energy, endpoint, controls);
}

ExtensionStructure extension_structure(const Potential& q, const ClassificationControls& controls) {
  auto right = classify_endpoint(q, 0.0, Endpoint::Right, controls);
  if (right.verdict != Verdict::LPC)
    fail(ErrorKind::Unsupported, "right endpoint is limit-circle; only LPC at the right end is supported");
  auto left = classify_endpoint(q, 0.0, Endpoint::Left, controls);
  const auto kind = left.verdict == Verdict::LPC ? ExtensionKind::EssentiallySelfAdjoint
                                                 : ExtensionKind::OneParameterFamily;
  return {kind, std::move(left), std::move(right)};
}

namespace detail {

bool square_integrable(const Potential& q, double energy, Endpoint endpoint, double x0, Point state,
                       const ClassificationControls& controls) {
  const WindowRun run = run_windows(q, energy, endpoint, x0, {state}, controls);
  if (run.trends[0] == Trend::Diverged) return false;
  if (run.trends[0] == Trend::Converged) return true;
  inconclusive(endpoint, run);
}

}  // namespace detail

}  // namespace selfadj
