#include "selfadj/extensions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "selfadj/errors.hpp"
#include "selfadj/frobenius.hpp"

namespace selfadj {

namespace {

constexpr double kPi = std::numbers::pi;

using Evaluator = std::function<Point(double)>;

// Smooth step pieces built from h(t) = exp(-1/t).
struct Step {
  double s, ds, d2s;
};

double h0(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }
double h1(double t) { return t > 0.0 ? h0(t) / (t * t) : 0.0; }
double h2(double t) { return t > 0.0 ? h0(t) * (1.0 - 2.0 * t) / (t * t * t * t) : 0.0; }

// S(t) = h(t) / (h(t) + h(1 - t)): 0 for t <= 0, 1 for t >= 1.
Step smooth_step(double t) {
  if (t <= 0.0) return {0.0, 0.0, 0.0};
  if (t >= 1.0) return {1.0, 0.0, 0.0};
  const double A = h0(t), B = h0(1.0 - t);
  const double dA = h1(t), dB = -h1(1.0 - t);
  const double d2A = h2(t), d2B = h2(1.0 - t);
  const double D = A + B;
  const double N = dA * B - A * dB;
  const double dN = d2A * B - A * d2B;
  return {A / D, N / (D * D), (dN * D - 2.0 * N * (dA + dB)) / (D * D * D)};
}

// 1 on (-inf, r0], 0 on [r1, inf).
Step cutoff_at(double r, double r0, double r1) {
  const double L = r1 - r0;
  const Step s = smooth_step((r1 - r) / L);
  return {s.s, -s.ds / L, s.d2s / (L * L)};
}

std::pair<double, double> coefficients(const Point& f, const Point& f1, const Point& f2) {
  const double w = wronskian(f1, f2);
  const double n1 = std::hypot(f1.u, f1.du), n2 = std::hypot(f2.u, f2.du);
  if (!(std::abs(w) > 1e-13 * n1 * n2))
    fail(ErrorKind::DegenerateFrame, "frame solutions are linearly dependent (|W| = " + std::to_string(std::abs(w)) + ")");
  return {wronskian(f, f2) / w, wronskian(f1, f) / w};
}

ThetaDecomposition decompose_coefficients(double c1, double c2) {
  const double norm = std::hypot(c1, c2);
  const bool in_u = c2 > 0.0 || (c2 == 0.0 && c1 > 0.0);
  const double C = in_u ? norm : -norm;
  double theta = std::atan2(c2 / C, c1 / C);
  if (theta < 0.0) theta = 0.0;
  if (theta >= kPi) theta = 0.0;
  return {C, BoundaryParameter(theta), c1, c2};
}

double pick_point(const std::vector<const Solution*>& sols) {
  double lo = 0.0, hi = kInfinity;
  bool bounded_lo = false;
  for (const Solution* s : sols) {
    if (s->trajectory()) bounded_lo = true;
    lo = std::max(lo, s->lo());
    hi = std::min(hi, s->hi());
  }
  require(lo <= hi, ErrorKind::Usage, "solutions share no common range");
  if (!bounded_lo && lo == 0.0 && hi == kInfinity) return 1.0;
  if (hi == kInfinity) return lo + 1.0;
  return 0.5 * (lo + hi);
}

// Inner-piece evaluators: exact closed forms for inverse-square potentials.
std::pair<Evaluator, Evaluator> exact_pair(const Frame& frame, const Potential& q) {
  if (const auto* fr = std::get_if<FrobeniusFrame>(&frame)) {
    const auto [p1, p2] = frobenius_pair(fr->kappa);
    return {[p1](double r) { return p1.eval(r); }, [p2](double r) { return p2.eval(r); }};
  }
  const auto kappa = q.inverse_square_kappa();
  if (!kappa) return {};
  const double x0 = std::get<NumericFrame>(frame).system->x0;
  const auto [p1, p2] = frobenius_pair(*kappa);
  const Point b1 = p1.eval(x0), b2 = p2.eval(x0);
  const auto [a11, a12] = coefficients({1.0, 0.0}, b1, b2);
  const auto [a21, a22] = coefficients({0.0, 1.0}, b1, b2);
  const ClosedForm g1(*kappa, a11, a12), g2(*kappa, a21, a22);
  return {[g1](double r) { return g1.eval(r); }, [g2](double r) { return g2.eval(r); }};
}

double phi_of(const TestFunction& g, const Potential& q, double x) {
  const double gv = g.g(x);
  const double d2 = g.d2g(x);
  if (gv == 0.0) return -d2;
  return -d2 + q(x) * gv;
}

}  // namespace

BoundaryParameter::BoundaryParameter(double theta) : theta_(theta) {
  require(std::isfinite(theta) && theta >= 0.0 && theta < kPi, ErrorKind::Validation,
          "boundary parameter must lie in [0, pi), got " + std::to_string(theta));
}

BoundaryParameter BoundaryParameter::canonical(double theta) {
  require(std::isfinite(theta), ErrorKind::Validation, "boundary parameter must be finite");
  double t = std::fmod(theta, kPi);
  if (t < 0.0) t += kPi;
  if (t >= kPi) t = 0.0;
  return BoundaryParameter(t);
}

double angle_distance(double a, double b) {
  const double d = std::fmod(std::abs(a - b), kPi);
  return std::min(d, kPi - d);
}

Frame numeric_frame(FundamentalSystem fs) {
  return NumericFrame{std::make_shared<const FundamentalSystem>(std::move(fs))};
}

std::pair<Solution, Solution> frame_pair(const Frame& frame) {
  if (const auto* fr = std::get_if<FrobeniusFrame>(&frame)) {
    const auto [p1, p2] = frobenius_pair(fr->kappa);
    return {Solution(p1), Solution(p2)};
  }
  const auto& fs = *std::get<NumericFrame>(frame).system;
  return {Solution(fs.f1), Solution(fs.f2)};
}

std::optional<double> frame_anchor(const Frame& frame) {
  if (const auto* nf = std::get_if<NumericFrame>(&frame)) return nf->system->x0;
  return std::nullopt;
}

ThetaDecomposition theta_decompose(const Solution& f, const Solution& f1, const Solution& f2,
                                   std::optional<double> at, double trivial_tol) {
  const double x = at.value_or(pick_point({&f, &f1, &f2}));
  require(f.contains(x) && f1.contains(x) && f2.contains(x), ErrorKind::Domain,
          "decomposition point outside a solution's range");
  require(f.potential_key() == f1.potential_key() && f.potential_key() == f2.potential_key() &&
              f.energy() == f1.energy() && f.energy() == f2.energy(),
          ErrorKind::Usage, "decomposition needs solutions of one equation");
  const Point pf = f.eval(x);
  const auto [c1, c2] = coefficients(pf, f1.eval(x), f2.eval(x));
  if (!(std::hypot(c1, c2) > trivial_tol)) fail(ErrorKind::TrivialSolution, "cannot decompose the trivial solution");
  return decompose_coefficients(c1, c2);
}

ThetaDecomposition theta_decompose(const Solution& f, const Frame& frame, std::optional<double> at,
                                   double trivial_tol) {
  const auto [f1, f2] = frame_pair(frame);
  if (!at) {
    if (const auto x0 = frame_anchor(frame); x0 && f.contains(*x0)) at = x0;
  }
  return theta_decompose(f, f1, f2, at, trivial_tol);
}

std::optional<Solution> ExtensionDescriptor::boundary_solution() const {
  const auto* t = theta();
  if (!t) return std::nullopt;
  const double c = std::cos(t->theta.value()), s = std::sin(t->theta.value());
  if (const auto* fr = std::get_if<FrobeniusFrame>(&t->frame)) return Solution(ClosedForm(fr->kappa, c, s));
  const auto& fs = *std::get<NumericFrame>(t->frame).system;
  return Solution(fs.f1.combined(c, fs.f2, s));
}

ExtensionDescriptor extension_closure(const Potential& q, const ClassificationControls& controls) {
  const auto s = extension_structure(q, controls);
  require(s.kind == ExtensionKind::EssentiallySelfAdjoint, ErrorKind::Validation,
          "left endpoint is limit-circle; an extension needs a boundary parameter");
  return ExtensionDescriptor(q, ExtensionDescriptor::Closure{});
}

ExtensionDescriptor extension_from_theta(const Potential& q, BoundaryParameter theta, const Frame& frame,
                                         const ClassificationControls& controls) {
  if (const auto* fr = std::get_if<FrobeniusFrame>(&frame)) {
    require(Potential::inverse_square(fr->kappa) == q, ErrorKind::Usage,
            "Frobenius frame does not belong to the potential");
  } else {
    const auto& nf = std::get<NumericFrame>(frame);
    require(nf.system != nullptr && nf.system->q == q && nf.system->energy == 0.0, ErrorKind::Usage,
            "numeric frame must be a zero-energy fundamental system of the potential");
  }
  const auto s = extension_structure(q, controls);
  require(s.kind == ExtensionKind::OneParameterFamily, ErrorKind::Validation,
          "left endpoint is limit-point; the only self-adjoint extension is the closure");
  return ExtensionDescriptor(q, ExtensionDescriptor::Theta{theta, frame});
}

ExtensionDescriptor extension_from_boundary_solution(const Potential& q, const Solution& f, const Frame& frame,
                                                     const ClassificationControls& controls) {
  return extension_from_theta(q, theta_decompose(f, frame).theta, frame, controls);
}

bool extensions_equal(const ExtensionDescriptor& e1, const ExtensionDescriptor& e2, double tol) {
  require(e1.potential() == e2.potential(), ErrorKind::Usage, "extensions of different potentials");
  if (e1.is_closure() || e2.is_closure()) return e1.is_closure() && e2.is_closure();
  const auto* t1 = e1.theta();
  const auto* t2 = e2.theta();
  const auto* fa = std::get_if<FrobeniusFrame>(&t1->frame);
  const auto* fb = std::get_if<FrobeniusFrame>(&t2->frame);
  if (fa && fb && fa->kappa == fb->kappa) return angle_distance(t1->theta.value(), t2->theta.value()) <= tol;
  const auto d = theta_decompose(*e2.boundary_solution(), t1->frame);
  return angle_distance(d.theta.value(), t1->theta.value()) <= tol;
}

TestFunction TestFunction::cutoff(double r0, double r1, std::vector<double> grid) {
  require(r0 < r1, ErrorKind::Validation, "cutoff needs r0 < r1");
  TestFunction t;
  t.g = [=](double r) { return cutoff_at(r, r0, r1).s; };
  t.dg = [=](double r) { return cutoff_at(r, r0, r1).ds; };
  t.d2g = [=](double r) { return cutoff_at(r, r0, r1).d2s; };
  t.grid = std::move(grid);
  t.support_end = r1;
  t.label = "cutoff";
  return t;
}

TestFunction TestFunction::cutoff_times(const ClosedForm& f, double r0, double r1, std::vector<double> grid) {
  require(r0 < r1, ErrorKind::Validation, "cutoff needs r0 < r1");
  const double k = f.kappa;
  TestFunction t;
  t.g = [=](double r) { return cutoff_at(r, r0, r1).s * f.eval(r).u; };
  t.dg = [=](double r) {
    const Step c = cutoff_at(r, r0, r1);
    const Point p = f.eval(r);
    return c.ds * p.u + c.s * p.du;
  };
  t.d2g = [=](double r) {
    const Step c = cutoff_at(r, r0, r1);
    const Point p = f.eval(r);
    const double d2 = (k * k - 0.25) / (r * r) * p.u;
    return c.d2s * p.u + 2.0 * c.ds * p.du + c.s * d2;
  };
  t.grid = std::move(grid);
  t.support_end = r1;
  t.label = "cutoff-times-solution";
  return t;
}

TestFunction TestFunction::bump(double lo, double hi, std::vector<double> grid) {
  require(lo < hi, ErrorKind::Validation, "bump needs lo < hi");
  const double mid = 0.5 * (lo + hi);
  // (1 - cutoff(lo, mid)) * cutoff(mid, hi)
  auto parts = [=](double x) {
    const Step a = cutoff_at(x, lo, mid);
    const Step b = cutoff_at(x, mid, hi);
    return std::pair<Step, Step>{{1.0 - a.s, -a.ds, -a.d2s}, b};
  };
  TestFunction t;
  t.g = [=](double x) { const auto [a, b] = parts(x); return a.s * b.s; };
  t.dg = [=](double x) { const auto [a, b] = parts(x); return a.ds * b.s + a.s * b.ds; };
  t.d2g = [=](double x) {
    const auto [a, b] = parts(x);
    return a.d2s * b.s + 2.0 * a.ds * b.ds + a.s * b.d2s;
  };
  t.grid = std::move(grid);
  t.support_end = hi;
  t.label = "bump";
  return t;
}

const char* to_string(Membership m) noexcept {
  switch (m) {
    case Membership::InClosure: return "in-closure";
    case Membership::InExtensionOnly: return "in-extension-only";
    case Membership::Outside: return "outside";
  }
  return "?";
}

namespace {

// Gauss rule on halves until the halves agree with the whole.
double adaptive_gauss(const std::function<double(double)>& f, double lo, double hi, int order, int depth = 0) {
  const double whole = integrate(f, lo, hi, order);
  const double mid = 0.5 * (lo + hi);
  const double left = integrate(f, lo, mid, order), right = integrate(f, mid, hi, order);
  const double halves = left + right;
  if (depth >= 24 || std::abs(halves - whole) <= 1e-15 * std::max(1.0, std::abs(halves))) return halves;
  return adaptive_gauss(f, lo, mid, order, depth + 1) + adaptive_gauss(f, mid, hi, order, depth + 1);
}

}  // namespace

SigmaDecomposition rho_sigma(const TestFunction& g, const Potential& q, const Frame& frame,
                             const SigmaControls& controls) {
  require(g.g && g.dg && g.d2g, ErrorKind::Validation, "test function needs g, g' and g''");
  require(!g.grid.empty(), ErrorKind::Validation, "test function needs a sample grid");
  require(std::is_sorted(g.grid.begin(), g.grid.end()) &&
              std::adjacent_find(g.grid.begin(), g.grid.end()) == g.grid.end(),
          ErrorKind::Validation, "sample grid must be strictly increasing");
  require(controls.shrink > 0.0 && controls.shrink < 1.0 && controls.tol_sigma > 0.0, ErrorKind::Validation,
          "invalid sigma controls");
  const Interval& d = q.domain();
  require(d.left_finite(), ErrorKind::Unsupported, "rho/sigma needs a finite left endpoint");
  for (double x : g.grid) require(d.interior(x), ErrorKind::Domain, "sample grid leaves the interval");
  const double a = d.a;
  const double xm = controls.match_point.value_or(g.grid.front());
  require(xm > a && xm <= g.grid.front(), ErrorKind::Validation, "match point must lie in (a, first sample]");

  // Evaluators on the grid piece and on the inner piece.
  Evaluator outer1, outer2, inner1, inner2;
  auto [exact1, exact2] = exact_pair(frame, q);
  if (std::holds_alternative<FrobeniusFrame>(frame)) {
    outer1 = inner1 = exact1;
    outer2 = inner2 = exact2;
  } else {
    const auto& fs = *std::get<NumericFrame>(frame).system;
    const double lo = std::min({xm, fs.x0, fs.f1.lo()});
    const double hi = std::max({g.grid.back(), fs.x0, fs.f1.hi()});
    IvpControls ivp = controls.ivp;
    if (!std::isfinite(ivp.max_step)) ivp.max_step = (hi - lo) / 400.0;
    // Same canonical system, re-solved with dense enough samples for
    // off-sample evaluation at quadrature nodes.
    auto dense = std::make_shared<const FundamentalSystem>(fundamental_system(q, 0.0, fs.x0, ivp, lo, hi));
    outer1 = [dense](double x) { return dense->f1.eval(x); };
    outer2 = [dense](double x) { return dense->f2.eval(x); };
    if (exact1) {
      inner1 = exact1;
      inner2 = exact2;
    } else {
      const double reach = a + (xm - a) * std::pow(controls.shrink, 64);
      const double start = std::max(reach, a + ivp.start_cutoff * std::max(1.0, std::abs(a)));
      auto deep = std::make_shared<const FundamentalSystem>(
          fundamental_system(q, 0.0, fs.x0, ivp, std::min(start, lo), hi));
      inner1 = [deep](double x) { return deep->f1.eval(x); };
      inner2 = [deep](double x) { return deep->f2.eval(x); };
    }
  }

  const int order = controls.gauss_order;
  const auto integrand = [&](const Evaluator& f) {
    return [&g, &q, &f](double x) {
      const double p = phi_of(g, q, x);
      return p == 0.0 ? 0.0 : p * f(x).u;
    };
  };

  // Inner integrals over (a, xm] by geometric windows.
  double I1 = 0.0, I2 = 0.0;
  {
    const auto in1 = integrand(inner1);
    const auto in2 = integrand(inner2);
    int quiet = 0;
    double prev = -1.0;
    int stalled = 0;
    bool done = false;
    for (int k = 0; k < controls.max_windows; ++k) {
      const double hi = a + (xm - a) * std::pow(controls.shrink, k);
      const double lo = a + (xm - a) * std::pow(controls.shrink, k + 1);
      if (!(lo < hi)) {
        done = true;
        break;
      }
      double w1, w2;
      try {
        w1 = integrate_log([&](double y) { return in1(a + y); }, lo - a, hi - a, order);
        w2 = integrate_log([&](double y) { return in2(a + y); }, lo - a, hi - a, order);
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::Domain) fail(ErrorKind::Integrability, std::string("frame does not reach the endpoint: ") + e.what());
        throw;
      }
      if (!std::isfinite(w1) || !std::isfinite(w2)) fail(ErrorKind::Integrability, "non-finite integrand near the left endpoint");
      I1 += w1;
      I2 += w2;
      const double size = std::abs(w1) + std::abs(w2);
      const double total = std::abs(I1) + std::abs(I2);
      quiet = size <= controls.tail_tol * total || size == 0.0 ? quiet + 1 : 0;
      if (prev > 0.0 && size >= (1.0 - 1e-9) * prev) {
        ++stalled;
      } else {
        stalled = 0;
      }
      if (k >= 8 && stalled >= 3) fail(ErrorKind::Integrability, "integral of phi * f diverges at the left endpoint");
      prev = size;
      if (quiet >= 3) {
        done = true;
        break;
      }
    }
    if (!done) fail(ErrorKind::Integrability, "integral of phi * f did not settle near the left endpoint");
  }

  // Cumulative integrals along the grid.
  const std::size_t n = g.grid.size();
  std::vector<double> J1(n), J2(n);
  {
    const auto o1 = integrand(outer1);
    const auto o2 = integrand(outer2);
    auto piece = [&](double lo, double hi, double& s1, double& s2) {
      if (lo == hi) return;
      std::vector<double> cuts{lo};
      for (double b : q.breakpoints(lo, hi)) cuts.push_back(b);
      cuts.push_back(hi);
      for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        s1 += adaptive_gauss(o1, cuts[i], cuts[i + 1], order);
        s2 += adaptive_gauss(o2, cuts[i], cuts[i + 1], order);
      }
    };
    double s1 = I1, s2 = I2;
    piece(xm, g.grid[0], s1, s2);
    J1[0] = s1;
    J2[0] = s2;
    for (std::size_t j = 1; j < n; ++j) {
      piece(g.grid[j - 1], g.grid[j], s1, s2);
      J1[j] = s1;
      J2[j] = s2;
    }
  }

  SigmaDecomposition out;
  out.grid = g.grid;
  out.g.resize(n);
  out.rho.resize(n);
  out.sigma_raw.resize(n);
  out.sigma.resize(n);
  const Point w1 = outer1(xm), w2 = outer2(xm);
  const double W = wronskian(w1, w2);
  coefficients({1.0, 0.0}, w1, w2);  // degenerate-frame check

  // Anchor for the projection: the grid sample closest to the frame anchor.
  std::size_t jc = n / 2;
  if (const auto x0 = frame_anchor(frame)) {
    jc = static_cast<std::size_t>(std::lower_bound(g.grid.begin(), g.grid.end(), *x0) - g.grid.begin());
    if (jc == n) jc = n - 1;
  }
  const double xc = g.grid[jc];
  const Point gc{g.g(xc), g.dg(xc)};
  const Point f1c = outer1(xc), f2c = outer2(xc);
  out.c1 = (wronskian(gc, f2c) - J2[jc]) / W;
  out.c2 = (wronskian(f1c, gc) + J1[jc]) / W;

  double scale = 0.0, defect = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double x = g.grid[j];
    const Point p1 = outer1(x), p2 = outer2(x);
    out.g[j] = g.g(x);
    out.rho[j] = (p1.u * J2[j] - p2.u * J1[j]) / W;
    out.sigma_raw[j] = out.g[j] - out.rho[j];
    out.sigma[j] = out.c1 * p1.u + out.c2 * p2.u;
    defect = std::max(defect, std::abs(out.sigma_raw[j] - out.sigma[j]));
    scale = std::max(scale, std::abs(out.g[j]));
  }
  out.projection_defect = defect;
  out.scale = scale;
  const double bound = controls.tol_sigma * scale;
  out.trivial = std::abs(out.c1) <= bound && std::abs(out.c2) <= bound;
  if (!out.trivial) out.decomposition = decompose_coefficients(out.c1, out.c2);
  return out;
}

MembershipResult domain_membership(const TestFunction& g, const ExtensionDescriptor& e,
                                   const SigmaControls& controls) {
  const Potential& q = e.potential();
  if (const auto* t = e.theta()) {
    auto sig = rho_sigma(g, q, t->frame, controls);
    if (sig.trivial) return {Membership::InClosure, std::move(sig)};
    // Component of sigma transverse to the boundary solution.
    const double th = t->theta.value();
    const double transverse = std::abs(-sig.c1 * std::sin(th) + sig.c2 * std::cos(th));
    const Membership m = transverse <= controls.tol_sigma * sig.scale ? Membership::InExtensionOnly : Membership::Outside;
    return {m, std::move(sig)};
  }
  // Closure: g lies in the closure domain iff sigma is left square-integrable.
  if (const auto kappa = q.inverse_square_kappa()) {
    auto sig = rho_sigma(g, q, FrobeniusFrame{std::abs(*kappa)}, controls);
    if (sig.trivial) return {Membership::InClosure, std::move(sig)};
    const bool recessive = std::abs(sig.c2) <= controls.tol_sigma * sig.scale;
    return {recessive ? Membership::InClosure : Membership::Outside, std::move(sig)};
  }
  const double x0 = default_anchor(q.domain());
  const Frame frame = numeric_frame(fundamental_system(q, 0.0, x0, controls.ivp));
  auto sig = rho_sigma(g, q, frame, controls);
  if (sig.trivial) return {Membership::InClosure, std::move(sig)};
  ClassificationControls cc;
  cc.ivp = controls.ivp;
  const Point state{sig.c1, sig.c2};  // data at x0 of c1 f1 + c2 f2
  const bool l2 = detail::square_integrable(q, 0.0, Endpoint::Left, x0, state, cc);
  return {l2 ? Membership::InClosure : Membership::Outside, std::move(sig)};
}

Extrapolated boundary_wronskian(const TestFunction& g, const Solution& u, double x0, double rho, int levels) {
  require(rho > 0.0 && rho < 1.0 && levels >= 2, ErrorKind::Validation, "invalid extrapolation controls");
  const double a = u.lo();
  std::vector<double> values;
  for (int k = 0; k < levels; ++k) {
    const double x = a + (x0 - a) * std::pow(rho, k);
    values.push_back(wronskian(Point{g.g(x), g.dg(x)}, u.eval(x)));
  }
  const std::vector<double> orders{1.0, 2.0, 3.0};
  return richardson(values, rho, orders);
}

}  // namespace selfadj
