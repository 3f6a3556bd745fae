#include "selfadj/ab_transform.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "selfadj/errors.hpp"
#include "selfadj/quadrature.hpp"

namespace selfadj {

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// (1 - t^2)^8 on |t| < 1 and its first two derivatives.
struct Bump {
  double v, d1, d2;
};
Bump bump(double t) {
  if (!(std::abs(t) < 1.0)) return {0.0, 0.0, 0.0};
  const double s = 1.0 - t * t;
  const double s6 = std::pow(s, 6);
  return {s6 * s * s, -16.0 * t * s6 * s, -16.0 * s6 * s + 224.0 * t * t * s6};
}

double bump_square_integral() {
  const auto& rule = gauss_legendre(64);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * std::pow(bump(rule.nodes[i]).v, 2);
  return s;
}

struct Harmonic {
  std::int64_t n;
  Complex c;
  double center;
  double width;
};

CylTestFunction from_harmonics(std::string label, std::vector<Harmonic> hs, double w_z) {
  CylTestFunction f;
  f.label = std::move(label);
  f.z_half = w_z;
  f.r_lo = kInfinity;
  f.r_hi = 0.0;
  for (const auto& h : hs) {
    require(h.width > 0.0 && w_z > 0.0, ErrorKind::Validation, "bump widths must be positive");
    f.r_lo = std::min(f.r_lo, h.center - h.width);
    f.r_hi = std::max(f.r_hi, h.center + h.width);
    if (std::find(f.harmonics.begin(), f.harmonics.end(), h.n) == f.harmonics.end()) f.harmonics.push_back(h.n);
  }
  std::sort(f.harmonics.begin(), f.harmonics.end());
  f.psi = [hs, w_z](double r, double ang, double z) {
    const double chi = bump(z / w_z).v;
    if (chi == 0.0) return Complex{};
    Complex s{};
    for (const auto& h : hs) {
      const double radial = bump((r - h.center) / h.width).v;
      if (radial != 0.0) s += h.c * std::exp(-kI * (static_cast<double>(h.n) * ang)) * radial;
    }
    return s * chi / std::sqrt(r);
  };
  f.h_psi = [hs, w_z](double r, double ang, double z, double flux) {
    const Bump chi = bump(z / w_z);
    if (chi.v == 0.0 && chi.d2 == 0.0) return Complex{};
    const double chi2 = chi.d2 / (w_z * w_z);
    Complex s{};
    for (const auto& h : hs) {
      const Bump b = bump((r - h.center) / h.width);
      if (b.v == 0.0 && b.d2 == 0.0) continue;
      const double kappa = static_cast<double>(h.n) - flux;
      const double radial = -b.d2 / (h.width * h.width) + (kappa * kappa - 0.25) / (r * r) * b.v;
      s += h.c * std::exp(-kI * (static_cast<double>(h.n) * ang)) * (chi.v * radial - chi2 * b.v);
    }
    return s / std::sqrt(r);
  };
  // Exact norm: bumps are polynomials between breakpoints.
  std::vector<double> cuts;
  for (const auto& h : hs) {
    cuts.push_back(h.center - h.width);
    cuts.push_back(h.center);
    cuts.push_back(h.center + h.width);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double radial = 0.0;
  for (std::int64_t n : f.harmonics) {
    auto amp2 = [&hs, n](double r) {
      Complex a{};
      for (const auto& h : hs)
        if (h.n == n) a += h.c * bump((r - h.center) / h.width).v;
      return std::norm(a);
    };
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) radial += integrate(amp2, cuts[i], cuts[i + 1], 64);
  }
  f.norm2 = 2.0 * kPi * radial * w_z * bump_square_integral();
  return f;
}

}  // namespace

CylGrid CylGrid::make(double r_min, double r_max, int n_r, int n_ang, double z_min, double z_max, int n_z) {
  require(r_min > 0.0 && r_max > r_min && n_r >= 8, ErrorKind::Validation, "radial grid needs 0 < r_min < r_max, n_r >= 8");
  require(n_ang >= 4 && n_z >= 8 && z_max > z_min, ErrorKind::Validation, "angular/z grid too small");
  CylGrid g;
  const double h = std::log(r_max / r_min) / (n_r - 1);
  for (int i = 0; i < n_r; ++i) g.r.push_back(r_min * std::exp(h * i));
  g.r.back() = r_max;
  for (int j = 0; j < n_ang; ++j) g.angles.push_back(2.0 * kPi * j / n_ang);
  g.z_min = z_min;
  g.n_z = n_z;
  g.dz = (z_max - z_min) / n_z;
  return g;
}

double CylGrid::log_step() const { return std::log(r.back() / r.front()) / (n_r() - 1); }

void CylGrid::validate() const {
  require(n_r() >= 2 && n_ang() >= 1 && n_z >= 1 && dz > 0.0, ErrorKind::Validation, "empty cylindrical grid");
  require(r.front() > 0.0, ErrorKind::Validation, "radial grid must stay off the axis");
  const double h = log_step();
  for (int i = 0; i < n_r(); ++i)
    require(std::abs(std::log(r[i] / r.front()) - h * i) <= 1e-9 * std::max(1.0, h * i), ErrorKind::Unsupported,
            "radial grid must be geometric");
  const double da = 2.0 * kPi / n_ang();
  for (int j = 0; j < n_ang(); ++j)
    require(std::abs(angles[j] - angles[0] - da * j) <= 1e-12 * 2.0 * kPi, ErrorKind::Unsupported,
            "angular grid must be uniform over one period");
}

std::size_t ChannelData::index_of_m(std::int64_t m) const {
  const auto it = std::find(ms.begin(), ms.end(), m);
  require(it != ms.end(), ErrorKind::Domain, "channel m = " + std::to_string(m) + " outside the transform window");
  return static_cast<std::size_t>(it - ms.begin());
}

ChannelData transform_forward(const CylSamples& psi) {
  const CylGrid& g = psi.grid;
  g.validate();
  const int nr = g.n_r(), na = g.n_ang(), nz = g.n_z;
  require(psi.values.size() == static_cast<std::size_t>(nr) * na * nz, ErrorKind::Validation,
          "sample count does not match the grid");
  const std::size_t slab = static_cast<std::size_t>(na) * nz;
  auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * slab * nr));
  require(buf != nullptr, ErrorKind::Configuration, "FFT buffer allocation failed");
  for (std::size_t i = 0; i < slab * nr; ++i) {
    buf[i][0] = psi.values[i].real();
    buf[i][1] = psi.values[i].imag();
  }
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    const int dims[2] = {na, nz};
    plan = fftw_plan_many_dft(2, dims, nr, buf, nullptr, 1, static_cast<int>(slab), buf, nullptr, 1,
                              static_cast<int>(slab), FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }

  ChannelData out;
  out.r = g.r;
  for (int m = -na / 2; m < na - na / 2; ++m) out.ms.push_back(m);
  const double dp = 2.0 * kPi / (nz * g.dz);
  for (int k = -nz / 2; k < nz - nz / 2; ++k) out.ps.push_back(dp * k);
  out.values.assign(out.ms.size() * out.ps.size() * out.r.size(), Complex{});
  for (std::size_t im = 0; im < out.ms.size(); ++im) {
    const auto m = out.ms[im];
    const int ka = static_cast<int>(((m % na) + na) % na);
    const Complex ang_phase = std::exp(kI * (static_cast<double>(m) * g.angles[0]));
    for (std::size_t ip = 0; ip < out.ps.size(); ++ip) {
      const int k = static_cast<int>(ip) - nz / 2;
      const int kz = ((k % nz) + nz) % nz;
      const Complex phase = ang_phase * std::exp(kI * (out.ps[ip] * g.z_min));
      for (int ir = 0; ir < nr; ++ir) {
        const fftw_complex& v = buf[static_cast<std::size_t>(ir) * slab + static_cast<std::size_t>(ka) * nz + kz];
        const double scale = std::sqrt(g.r[ir]) * g.dz / na;
        out.values[(im * out.ps.size() + ip) * out.r.size() + ir] = scale * phase * Complex{v[0], v[1]};
      }
    }
  }
  fftw_free(buf);
  return out;
}

CylTestFunction CylTestFunction::separable(std::int64_t n, double r_c, double w_r, double w_z) {
  return from_harmonics("separable", {{n, 1.0, r_c, w_r}}, w_z);
}

CylTestFunction CylTestFunction::mixed(double r_c, double w_r, double w_z) {
  return from_harmonics("mixed",
                        {{0, 1.0, r_c, w_r},
                         {1, 0.5, r_c, 0.8 * w_r},
                         {-1, 0.5, r_c, 0.8 * w_r},
                         {2, Complex{0.0, 0.5}, r_c, 0.6 * w_r},
                         {-2, Complex{0.0, -0.5}, r_c, 0.6 * w_r}},
                        w_z);
}

CylTestFunction CylTestFunction::zero() {
  CylTestFunction f;
  f.label = "zero";
  f.psi = [](double, double, double) { return Complex{}; };
  f.h_psi = [](double, double, double, double) { return Complex{}; };
  f.r_lo = 1.0;
  f.r_hi = 2.0;
  f.z_half = 1.0;
  return f;
}

CylSamples sample(const CylTestFunction& f, const CylGrid& grid) {
  CylSamples s{grid, std::vector<Complex>(static_cast<std::size_t>(grid.n_r()) * grid.n_ang() * grid.n_z)};
  for (int ir = 0; ir < grid.n_r(); ++ir)
    for (int ia = 0; ia < grid.n_ang(); ++ia)
      for (int iz = 0; iz < grid.n_z; ++iz) s.at(ir, ia, iz) = f.psi(grid.r[ir], grid.angles[ia], grid.z(iz));
  return s;
}

CylSamples sample_h(const CylTestFunction& f, const CylGrid& grid, double flux) {
  CylSamples s{grid, std::vector<Complex>(static_cast<std::size_t>(grid.n_r()) * grid.n_ang() * grid.n_z)};
  for (int ir = 0; ir < grid.n_r(); ++ir)
    for (int ia = 0; ia < grid.n_ang(); ++ia)
      for (int iz = 0; iz < grid.n_z; ++iz)
        s.at(ir, ia, iz) = f.h_psi(grid.r[ir], grid.angles[ia], grid.z(iz), flux);
  return s;
}

void TransformControls::validate() const {
  require(r_min > 0.0 && r_max > r_min, ErrorKind::Validation, "transform needs 0 < r_min < r_max");
  require(n_r >= 8 && n_ang >= 4 && n_z >= 8, ErrorKind::Validation, "transform grid too coarse");
  require(z_max > z_min, ErrorKind::Validation, "transform needs z_min < z_max");
  require(std::isfinite(flux), ErrorKind::Validation, "flux must be finite");
}

TransformDiagnostics transform_checks(const CylTestFunction& f, const TransformControls& c) {
  c.validate();
  require(f.r_lo > 0.0, ErrorKind::Validation,
          "test function support touches the z-axis (needs r_lo > 0)");
  require(f.r_lo >= c.r_min && f.r_hi <= c.r_max, ErrorKind::Validation,
          "test function radial support must lie inside [r_min, r_max]");
  require(-f.z_half >= c.z_min && f.z_half < c.z_max, ErrorKind::Validation,
          "test function z support must lie inside the z box");
  const CylGrid grid = CylGrid::make(c.r_min, c.r_max, c.n_r, c.n_ang, c.z_min, c.z_max, c.n_z);
  const ChannelData T = transform_forward(sample(f, grid));
  const ChannelData TH = transform_forward(sample_h(f, grid, c.flux));

  const double h = grid.log_step();
  const double dp = 2.0 * kPi / (grid.n_z * grid.dz);
  const std::size_t nr = grid.r.size();
  TransformDiagnostics d{};
  d.n_r = c.n_r;
  d.n_ang = c.n_ang;
  d.n_z = c.n_z;
  d.norm2_reference = f.norm2;

  double total = 0.0, num = 0.0, den = 0.0, inside = 0.0, outside = 0.0;
  for (std::size_t im = 0; im < T.ms.size(); ++im) {
    const double kappa = static_cast<double>(T.ms[im]) - c.flux;
    const bool declared = std::find(f.harmonics.begin(), f.harmonics.end(), T.ms[im]) != f.harmonics.end();
    for (std::size_t ip = 0; ip < T.ps.size(); ++ip) {
      const double p2 = T.ps[ip] * T.ps[ip];
      for (std::size_t ir = 0; ir < nr; ++ir) {
        const Complex u = T.at(im, ip, ir);
        const double r = grid.r[ir];
        total += dp * r * h * std::norm(u);
        (declared ? inside : outside) = std::max(declared ? inside : outside, std::abs(u));
        if (ir < 2 || ir + 2 >= nr) continue;
        const Complex um2 = T.at(im, ip, ir - 2), um1 = T.at(im, ip, ir - 1);
        const Complex up1 = T.at(im, ip, ir + 1), up2 = T.at(im, ip, ir + 2);
        const Complex ut = (-up2 + 8.0 * up1 - 8.0 * um1 + um2) / (12.0 * h);
        const Complex utt = (-up2 + 16.0 * up1 - 30.0 * u + 16.0 * um1 - um2) / (12.0 * h * h);
        const Complex urr = (utt - ut) / (r * r);
        const Complex applied = -urr + (kappa * kappa - 0.25) / (r * r) * u + p2 * u;
        const Complex target = TH.at(im, ip, ir);
        num += dp * r * h * std::norm(target - applied);
        den += dp * r * h * std::norm(target);
      }
    }
  }
  d.norm2_transformed = total;
  d.parseval_defect = f.norm2 > 0.0 ? std::abs(f.norm2 - total) / f.norm2 : total;
  d.intertwining_defect = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
  const double peak = std::max(inside, outside);
  d.leakage = peak > 0.0 ? outside / peak : 0.0;
  return d;
}

}  // namespace selfadj
