#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "generators.hpp"
#include "selfadj/extensions.hpp"
#include "selfadj/frobenius.hpp"

using namespace selfadj;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> grid(double a, double b, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(a + (b - a) * i / (n - 1));
  return g;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::Usage;
}

}  // namespace

TEST(BoundaryParameter, RangeAndCanonicalForm) {
  EXPECT_EQ(BoundaryParameter(0.0).value(), 0.0);
  EXPECT_EQ(kind_of([] { (void)BoundaryParameter(kPi); }), ErrorKind::Validation);
  EXPECT_EQ(kind_of([] { (void)BoundaryParameter(-0.1); }), ErrorKind::Validation);
  EXPECT_NEAR(BoundaryParameter::canonical(kPi + 0.3).value(), 0.3, 1e-15);
  EXPECT_NEAR(BoundaryParameter::canonical(-0.3).value(), kPi - 0.3, 1e-15);
  EXPECT_NEAR(angle_distance(0.01, kPi - 0.01), 0.02, 1e-15);
}

TEST(ThetaDecompose, Examples) {
  const auto [f1, f2] = frobenius_pair(0.3);
  auto d = theta_decompose(f1, f1, f2);
  EXPECT_NEAR(d.C, 1.0, 1e-14);
  EXPECT_NEAR(d.theta.value(), 0.0, 1e-14);
  d = theta_decompose(ClosedForm(0.3, 0.0, -1.0), f1, f2);
  EXPECT_NEAR(d.C, -1.0, 1e-14);
  EXPECT_NEAR(d.theta.value(), kPi / 2, 1e-14);
  d = theta_decompose(ClosedForm(0.3, 1.0, 1.0), f1, f2);
  EXPECT_NEAR(d.C, std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(d.theta.value(), kPi / 4, 1e-14);
}

TEST(ThetaDecompose, TrivialSolutionIsAnError) {
  const auto [f1, f2] = frobenius_pair(0.3);
  EXPECT_EQ(kind_of([&] { theta_decompose(ClosedForm(0.3, 0.0, 0.0), f1, f2); }), ErrorKind::TrivialSolution);
}

TEST(ThetaDecompose, DegenerateFrameIsAnError) {
  const auto [f1, f2] = frobenius_pair(0.3);
  EXPECT_EQ(kind_of([&] { theta_decompose(f2, f1, f1); }), ErrorKind::DegenerateFrame);
}

TEST(ExtensionFromTheta, BoundarySolutions) {
  const auto q = Potential::inverse_square(0.5);
  auto e = extension_from_theta(q, BoundaryParameter(0.0), FrobeniusFrame{0.5});
  EXPECT_NEAR(e.boundary_solution()->eval(2.0).u, 2.0, 1e-15);
  e = extension_from_theta(q, BoundaryParameter(kPi / 2), FrobeniusFrame{0.5});
  EXPECT_NEAR(e.boundary_solution()->eval(2.0).u, 1.0, 1e-15);
  const auto e0 = extension_from_theta(Potential::inverse_square(0.0), BoundaryParameter(kPi / 4), FrobeniusFrame{0.0});
  const double r = 0.3;
  EXPECT_NEAR(e0.boundary_solution()->eval(r).u, (std::sqrt(r) + std::sqrt(r) * std::log(r)) / std::sqrt(2.0), 1e-15);
}

TEST(ExtensionFromTheta, LimitPointIsInvalid) {
  EXPECT_EQ(kind_of([] {
              extension_from_theta(Potential::inverse_square(1.5), BoundaryParameter(0.2), FrobeniusFrame{1.5});
            }),
            ErrorKind::Validation);
  EXPECT_TRUE(extension_closure(Potential::inverse_square(1.5)).is_closure());
  EXPECT_EQ(kind_of([] { extension_closure(Potential::inverse_square(0.5)); }), ErrorKind::Validation);
}

TEST(ExtensionFromTheta, FrameMustBelongToPotential) {
  EXPECT_EQ(kind_of([] {
              extension_from_theta(Potential::inverse_square(0.5), BoundaryParameter(0.2), FrobeniusFrame{0.25});
            }),
            ErrorKind::Usage);
}

TEST(ExtensionsEqual, Examples) {
  const auto q = Potential::inverse_square(0.5);
  const Frame fr = FrobeniusFrame{0.5};
  EXPECT_TRUE(extensions_equal(extension_from_theta(q, BoundaryParameter(0.3), fr),
                               extension_from_theta(q, BoundaryParameter(0.3), fr)));
  const auto e = extension_from_theta(q, BoundaryParameter(1.1), fr);
  const auto scaled = extension_from_boundary_solution(q, ClosedForm(0.5, -2 * std::cos(1.1), -2 * std::sin(1.1)), fr);
  EXPECT_TRUE(extensions_equal(e, scaled));
  EXPECT_FALSE(extensions_equal(extension_from_theta(q, BoundaryParameter(0.0), fr),
                                extension_from_theta(q, BoundaryParameter(kPi / 2), fr)));
  EXPECT_EQ(kind_of([&] {
              extensions_equal(e, extension_from_theta(Potential::inverse_square(0.25), BoundaryParameter(0.3),
                                                       FrobeniusFrame{0.25}));
            }),
            ErrorKind::Usage);
}

TEST(ExtensionsEqual, AcrossFrames) {
  const auto q = Potential::inverse_square(0.5);
  const auto e1 = extension_from_theta(q, BoundaryParameter(0.7), FrobeniusFrame{0.5});
  const Frame num = numeric_frame(fundamental_system(q, 0.0, 1.0));
  const auto e2 = extension_from_boundary_solution(q, *e1.boundary_solution(), num);
  EXPECT_TRUE(extensions_equal(e1, e2, 1e-9));
}

TEST(RhoSigma, SolutionInputHasZeroRho) {
  const auto q = Potential::inverse_square(0.25);
  const ClosedForm f(0.25, 0.7, -0.2);
  TestFunction g{[f](double x) { return f.eval(x).u; }, [f](double x) { return f.eval(x).du; },
                 [f](double x) { return (0.25 * 0.25 - 0.25) / (x * x) * f.eval(x).u; }, grid(0.1, 2.0, 20),
                 kInfinity, "solution"};
  const auto s = rho_sigma(g, q, FrobeniusFrame{0.25});
  for (std::size_t i = 0; i < s.grid.size(); ++i) {
    EXPECT_NEAR(s.rho[i], 0.0, 1e-12);
    EXPECT_NEAR(s.sigma[i], s.g[i], 1e-12);
  }
  EXPECT_NEAR(s.c1, 0.7, 1e-12);
  EXPECT_NEAR(s.c2, -0.2, 1e-12);
}

TEST(RhoSigma, FunctionVanishingNearEndpointHasTrivialSigma) {
  const auto q = Potential::inverse_square(0.5);
  const auto s = rho_sigma(TestFunction::bump(0.5, 1.5, grid(0.1, 2.0, 39)), q, FrobeniusFrame{0.5});
  EXPECT_TRUE(s.trivial);
  for (double v : s.sigma) EXPECT_NEAR(v, 0.0, 1e-10);
}

TEST(RhoSigma, CutoffOfConstantGivesOne) {
  const auto q = Potential::inverse_square(0.5);
  const auto s = rho_sigma(TestFunction::cutoff(0.5, 1.0, grid(0.05, 2.0, 40)), q, FrobeniusFrame{0.5});
  EXPECT_FALSE(s.trivial);
  for (std::size_t i = 0; i < s.grid.size(); ++i) {
    EXPECT_NEAR(s.sigma[i], 1.0, 1e-8);
    EXPECT_NEAR(s.rho[i] + s.sigma_raw[i], s.g[i], 1e-12);
  }
  ASSERT_TRUE(s.decomposition.has_value());
  EXPECT_NEAR(s.decomposition->theta.value(), kPi / 2, 1e-10);
}

TEST(RhoSigma, FrameIndependence) {
  const auto q = Potential::inverse_square(0.3);
  const auto g = TestFunction::cutoff_times(ClosedForm(0.3, 1.0, -0.5), 0.4, 1.2, grid(0.05, 2.0, 40));
  const auto a = rho_sigma(g, q, FrobeniusFrame{0.3});
  const auto b = rho_sigma(g, q, numeric_frame(fundamental_system(q, 0.0, 0.7)));
  const auto c = rho_sigma(g, q, numeric_frame(fundamental_system(q, 0.0, 1.6)));
  for (std::size_t i = 0; i < a.grid.size(); ++i) {
    EXPECT_NEAR(a.sigma[i], b.sigma[i], 1e-8);
    EXPECT_NEAR(a.sigma[i], c.sigma[i], 1e-8);
  }
}

TEST(RhoSigma, DivergentIntegralIsReported) {
  // g = 1/x near 0 with q = 0 gives phi ~ -2/x^3, not integrable against f1 = 1.
  const auto q = Potential::constant(0.0);
  TestFunction g{[](double x) { return 1.0 / x; }, [](double x) { return -1.0 / (x * x); },
                 [](double x) { return 2.0 / (x * x * x) + std::sin(1.0 / x); }, grid(0.5, 1.0, 5), kInfinity, "bad"};
  EXPECT_EQ(kind_of([&] { rho_sigma(g, q, numeric_frame(fundamental_system(q, 0.0, 1.0))); }), ErrorKind::Integrability);
}

TEST(Membership, Examples) {
  const auto q = Potential::inverse_square(0.5);
  const Frame fr = FrobeniusFrame{0.5};
  const auto g = TestFunction::cutoff(0.5, 1.0, grid(0.05, 2.0, 40));
  EXPECT_EQ(domain_membership(g, extension_from_theta(q, BoundaryParameter(kPi / 2), fr)).membership,
            Membership::InExtensionOnly);
  EXPECT_EQ(domain_membership(g, extension_from_theta(q, BoundaryParameter(0.0), fr)).membership, Membership::Outside);
  const auto bump = TestFunction::bump(0.5, 1.5, grid(0.1, 2.0, 20));
  for (double th : {0.0, 1.0, 2.0})
    EXPECT_EQ(domain_membership(bump, extension_from_theta(q, BoundaryParameter(th), fr)).membership,
              Membership::InClosure);
  EXPECT_EQ(domain_membership(bump, extension_closure(Potential::inverse_square(1.5))).membership,
            Membership::InClosure);
}

TEST(Membership, ClosureNeverExtensionOnly) {
  for (double kappa : {1.0, 1.5, 2.5}) {
    const auto e = extension_closure(Potential::inverse_square(kappa));
    const auto [p1, p2] = frobenius_pair(kappa);
    for (const auto& f : {ClosedForm(kappa, 1.0, 0.0), ClosedForm(kappa, 0.0, 1.0), ClosedForm(kappa, 1.0, 1.0)}) {
      const auto g = TestFunction::cutoff_times(f, 0.5, 1.0, grid(0.05, 2.0, 20));
      const auto m = domain_membership(g, e).membership;
      EXPECT_NE(m, Membership::InExtensionOnly);
      EXPECT_EQ(m, f.c2 == 0.0 ? Membership::InClosure : Membership::Outside) << kappa;
    }
  }
}

TEST(ExtensionsProperty, ThetaRoundTrip) {
  for (double kappa : {0.0, 0.4, -0.7}) {
    const auto q = Potential::inverse_square(kappa);
    const Frame fr = FrobeniusFrame{kappa};
    for (int i = 0; i < 32; ++i) {
      const double th = kPi * i / 32;
      const auto d = theta_decompose(*extension_from_theta(q, BoundaryParameter(th), fr).boundary_solution(), fr);
      EXPECT_NEAR(d.C, 1.0, 1e-10);
      EXPECT_LE(angle_distance(d.theta.value(), th), 1e-10);
    }
  }
}

TEST(ExtensionsProperty, CoefficientUniqueness) {
  proptest::Gen gen(31337);
  for (int trial = 0; trial < 200; ++trial) {
    const double kappa = gen.uniform(-0.95, 0.95);
    const double c1 = gen.uniform(-3, 3), c2 = gen.uniform(-3, 3);
    const auto [f1, f2] = frobenius_pair(kappa);
    const auto d = theta_decompose(ClosedForm(kappa, c1, c2), f1, f2, 0.8);
    EXPECT_NEAR(d.C * std::cos(d.theta.value()), c1, 1e-12 * (1 + std::abs(c1)));
    EXPECT_NEAR(d.C * std::sin(d.theta.value()), c2, 1e-12 * (1 + std::abs(c2)));
  }
}

TEST(ExtensionsProperty, MembershipIsExhaustive) {
  proptest::Gen gen(5);
  for (int trial = 0; trial < 12; ++trial) {
    const double kappa = gen.uniform(-0.9, 0.9);
    const auto q = Potential::inverse_square(kappa);
    const double th = gen.uniform(0.0, kPi - 1e-9);
    const auto e = extension_from_theta(q, BoundaryParameter(th), FrobeniusFrame{kappa});
    const double c1 = gen.coin() ? std::cos(th) : gen.uniform(-1, 1);
    const double c2 = gen.coin() ? std::sin(th) : gen.uniform(-1, 1);
    const auto g = TestFunction::cutoff_times(ClosedForm(kappa, c1, c2), 0.5, 1.0, grid(0.05, 2.0, 20));
    const auto r = domain_membership(g, e);
    const double transverse = std::abs(-c1 * std::sin(th) + c2 * std::cos(th));
    const Membership expect = transverse < 1e-12 ? Membership::InExtensionOnly : Membership::Outside;
    EXPECT_EQ(r.membership, expect);
  }
}

TEST(BoundaryWronskian, LimitAtEndpoint) {
  // W(g, psi2) for g = cutoff * psi1 tends to W(psi1, psi2) = -2 kappa.
  const double kappa = 0.3;
  const auto g = TestFunction::cutoff_times(ClosedForm(kappa, 1.0, 0.0), 0.5, 1.0, grid(0.1, 1.0, 4));
  const auto w = boundary_wronskian(g, ClosedForm(kappa, 0.0, 1.0), 0.4);
  EXPECT_NEAR(w.value, -2 * kappa, 1e-10);
}
