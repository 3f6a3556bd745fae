#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "selfadj/ab_transform.hpp"

using namespace selfadj;

namespace {

constexpr double kPi = std::numbers::pi;

// Fourier transform of chi(z) = (1 - (z/w)^2)^8 with kernel e^{ipz}, by
// high-order Gauss quadrature (chi is a polynomial on its support).
double chi_hat(double p, double w) {
  double s = 0.0;
  const int panels = 64;
  for (int k = 0; k < panels; ++k) {
    const double a = -w + 2 * w * k / panels, b = a + 2 * w / panels;
    const double xs[] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831, 0.9061798459386640};
    const double ws[] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
                         0.2369268850561891};
    for (int i = 0; i < 5; ++i) {
      const double z = 0.5 * (a + b) + 0.5 * (b - a) * xs[i];
      s += 0.5 * (b - a) * ws[i] * std::pow(1 - (z / w) * (z / w), 8) * std::cos(p * z);
    }
  }
  return s;
}

// The same transform as the trapezoid sum on the sample grid.
double chi_sum(double p, double w, const CylGrid& g) {
  double s = 0.0;
  for (int j = 0; j < g.n_z; ++j) {
    const double z = g.z(j);
    if (std::abs(z) < w) s += g.dz * std::pow(1 - (z / w) * (z / w), 8) * std::cos(p * z);
  }
  return s;
}

}  // namespace

TEST(Transform, SeparableInputHasDeltaStructure) {
  const auto f = CylTestFunction::separable(2, 2.0, 1.0, 1.5);
  const CylGrid g = CylGrid::make(0.25, 4.0, 64, 16, -4.0, 4.0, 64);
  const ChannelData T = transform_forward(sample(f, g));
  const std::size_t i2 = T.index_of_m(2);
  double off = 0.0;
  for (std::size_t im = 0; im < T.ms.size(); ++im)
    for (std::size_t ip = 0; ip < T.ps.size(); ++ip)
      for (std::size_t ir = 0; ir < T.r.size(); ++ir) {
        const Complex v = T.at(im, ip, ir);
        if (im != i2) {
          off = std::max(off, std::abs(v));
          continue;
        }
        // psi(r) * F chi(p); the (1/sqrt r) factor cancels against sqrt r.
        const double r = T.r[ir];
        const double t = (r - 2.0) / 1.0;
        const double psi = std::abs(t) < 1 ? std::pow(1 - t * t, 8) : 0.0;
        EXPECT_NEAR(v.real(), psi * chi_sum(T.ps[ip], 1.5, g), 1e-13);
        EXPECT_NEAR(v.real(), psi * chi_hat(T.ps[ip], 1.5), 1e-6);
        EXPECT_NEAR(v.imag(), 0.0, 1e-13);
      }
  EXPECT_LE(off, 1e-12);
}

TEST(Transform, ZeroInput) {
  const auto d = transform_checks(CylTestFunction::zero());
  EXPECT_EQ(d.parseval_defect, 0.0);
  EXPECT_EQ(d.intertwining_defect, 0.0);
  EXPECT_EQ(d.norm2_transformed, 0.0);
}

TEST(Transform, AngleIndependentInputOnlyFeedsChannelZero) {
  const auto f = CylTestFunction::separable(0, 2.0, 1.0, 2.0);
  const auto d = transform_checks(f);
  EXPECT_LE(d.leakage, 1e-12);
}

TEST(Transform, ConjugationSymmetryForRealInput) {
  const auto f = CylTestFunction::mixed(2.0, 1.0, 1.5);
  const CylGrid g = CylGrid::make(0.5, 3.5, 48, 16, -2.0, 2.0, 32);
  const auto s = sample(f, g);
  for (const auto& v : s.values) ASSERT_EQ(v.imag(), 0.0);
  const ChannelData T = transform_forward(s);
  // The dual grids run over -N/2 .. N/2 - 1; -m and -p exist except at the low edge.
  double worst = 0.0, scale = 0.0;
  for (std::size_t im = 1; im < T.ms.size(); ++im)
    for (std::size_t ip = 1; ip < T.ps.size(); ++ip) {
      const std::size_t jm = T.ms.size() - im, jp = T.ps.size() - ip;
      ASSERT_EQ(T.ms[jm], -T.ms[im]);
      ASSERT_NEAR(T.ps[jp], -T.ps[ip], 1e-12);
      for (std::size_t ir = 0; ir < T.r.size(); ++ir) {
        worst = std::max(worst, std::abs(T.at(im, ip, ir) - std::conj(T.at(jm, jp, ir))));
        scale = std::max(scale, std::abs(T.at(im, ip, ir)));
      }
    }
  EXPECT_LE(worst, 1e-13 * scale);
}

TEST(Transform, ParsevalAndIntertwining) {
  for (const auto& f : {CylTestFunction::separable(1, 2.0, 1.0, 2.0), CylTestFunction::mixed(2.0, 1.0, 2.0)}) {
    const auto d = transform_checks(f);
    EXPECT_LE(d.parseval_defect, 1e-10) << f.label;
    EXPECT_LE(d.intertwining_defect, 1e-3) << f.label;
    EXPECT_LE(d.leakage, 1e-8) << f.label;
  }
}

TEST(Transform, IntertwiningConvergesWithRadialResolution) {
  const auto f = CylTestFunction::separable(0, 2.0, 1.0, 2.0);
  TransformControls coarse, fine;
  coarse.n_r = 128;
  fine.n_r = 256;
  coarse.n_ang = fine.n_ang = 8;
  const double a = transform_checks(f, coarse).intertwining_defect;
  const double b = transform_checks(f, fine).intertwining_defect;
  EXPECT_LT(b, a / 10.0);  // fourth order in the log step
}

TEST(Transform, AppliedExpressionMatchesCylindricalForm) {
  // (H Psi) from the closed form against a finite-difference evaluation of
  // -Laplacian with the vector potential term, for the separable function.
  const double flux = 0.3;
  const auto f = CylTestFunction::separable(1, 2.0, 1.0, 2.0);
  const double r = 1.7, ang = 0.4, z = 0.3;
  auto P = [&](double rr, double aa, double zz) { return f.psi(rr, aa, zz); };
  // -Delta + (2 i flux / r^2)(y d_x - x d_y) + flux^2 / r^2, and y d_x - x d_y = -d_angle.
  auto fd = [&](double h) {
    const Complex prr = (P(r + h, ang, z) - 2.0 * P(r, ang, z) + P(r - h, ang, z)) / (h * h);
    const Complex pr = (P(r + h, ang, z) - P(r - h, ang, z)) / (2 * h);
    const Complex paa = (P(r, ang + h, z) - 2.0 * P(r, ang, z) + P(r, ang - h, z)) / (h * h);
    const Complex pa = (P(r, ang + h, z) - P(r, ang - h, z)) / (2 * h);
    const Complex pzz = (P(r, ang, z + h) - 2.0 * P(r, ang, z) + P(r, ang, z - h)) / (h * h);
    return -(prr + pr / r + paa / (r * r) + pzz) - Complex(0, 2 * flux) / (r * r) * pa +
           flux * flux / (r * r) * P(r, ang, z);
  };
  // One Richardson step removes the h^2 term of the central differences.
  const Complex expect = (4.0 * fd(1e-3) - fd(2e-3)) / 3.0;
  const Complex got = f.h_psi(r, ang, z, flux);
  EXPECT_NEAR(std::abs(got - expect), 0.0, 1e-7 * std::abs(got));
}

TEST(Transform, Preconditions) {
  TransformControls c;
  EXPECT_THROW(transform_checks(CylTestFunction::separable(0, 1.0, 1.0, 1.0), c), Error);
  try {
    transform_checks(CylTestFunction::separable(0, 1.0, 1.0, 1.0), c);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Validation);
  }
  c.r_min = 1.5;
  EXPECT_THROW(transform_checks(CylTestFunction::separable(0, 2.0, 1.0, 1.0), c), Error);
  CylGrid g = CylGrid::make(0.5, 2.0, 16, 8, -1.0, 1.0, 16);
  g.angles[3] += 0.01;
  try {
    transform_forward(CylSamples{g, std::vector<Complex>(16 * 8 * 16)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Unsupported);
  }
}

TEST(Transform, ChannelWindowCoversDeclaredHarmonics) {
  const CylGrid g = CylGrid::make(0.5, 2.0, 16, 8, -1.0, 1.0, 16);
  const ChannelData T = transform_forward(CylSamples{g, std::vector<Complex>(16 * 8 * 16)});
  EXPECT_EQ(T.ms.front(), -4);
  EXPECT_EQ(T.ms.back(), 3);
  EXPECT_THROW(T.index_of_m(4), Error);
  EXPECT_NEAR(T.ps[1] - T.ps[0], 2 * kPi / 2.0, 1e-12);
}
