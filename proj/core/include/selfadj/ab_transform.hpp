#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "selfadj/ab_family.hpp"

namespace selfadj {

using Complex = std::complex<double>;

/// Tensor grid in cylindrical coordinates: geometric in r, periodic in the
/// angle, uniform in z.
struct CylGrid {
  std::vector<double> r;
  std::vector<double> angles;
  double z_min = 0.0;
  double dz = 0.0;
  int n_z = 0;

  static CylGrid make(double r_min, double r_max, int n_r, int n_ang, double z_min, double z_max, int n_z);
  int n_r() const noexcept { return static_cast<int>(r.size()); }
  int n_ang() const noexcept { return static_cast<int>(angles.size()); }
  double z(int i) const noexcept { return z_min + i * dz; }
  /// Log spacing of the radial grid.
  double log_step() const;
  void validate() const;
};

/// Samples of Psi on a CylGrid, index [ir][ia][iz].
struct CylSamples {
  CylGrid grid;
  std::vector<Complex> values;
  Complex& at(int ir, int ia, int iz) { return values[(static_cast<std::size_t>(ir) * grid.n_ang() + ia) * grid.n_z + iz]; }
  Complex at(int ir, int ia, int iz) const {
    return values[(static_cast<std::size_t>(ir) * grid.n_ang() + ia) * grid.n_z + iz];
  }
};

/// Psi~(m, p, r) for m = -N_ang/2 .. N_ang/2-1 and p on the DFT dual grid
/// (ascending), index [im][ip][ir].
struct ChannelData {
  std::vector<std::int64_t> ms;
  std::vector<double> ps;
  std::vector<double> r;
  std::vector<Complex> values;
  Complex at(std::size_t im, std::size_t ip, std::size_t ir) const {
    return values[(im * ps.size() + ip) * r.size() + ir];
  }
  std::size_t index_of_m(std::int64_t m) const;
};

/// sqrt(r)/(2 pi) times the angular Fourier series and the z Fourier
/// transform (kernel e^{i p z + i m angle}) by trapezoid sums.
ChannelData transform_forward(const CylSamples& psi);

/// A test function with its image under the Aharonov-Bohm expression,
/// both in closed form.
struct CylTestFunction {
  std::string label;
  std::function<Complex(double, double, double)> psi;
  /// (H Psi)(r, angle, z) for the given flux.
  std::function<Complex(double, double, double, double)> h_psi;
  /// Reference value of the integral of |Psi|^2 r dr dangle dz.
  double norm2 = 0.0;
  /// Radial support [r_lo, r_hi] and z support [-z_half, z_half].
  double r_lo = 0.0;
  double r_hi = 0.0;
  double z_half = 0.0;
  /// Angular harmonics present (m for the factor e^{-i m angle}).
  std::vector<std::int64_t> harmonics;

  /// (1/sqrt r) e^{-i n angle} chi(z) psi(r) with polynomial bumps
  /// (1 - t^2)^8 centred at r_c (half-width w_r) and at z = 0 (half-width w_z).
  static CylTestFunction separable(std::int64_t n, double r_c, double w_r, double w_z);
  /// Real function mixing harmonics 0, +-1, +-2 with different radial bumps.
  static CylTestFunction mixed(double r_c, double w_r, double w_z);
  static CylTestFunction zero();
};

CylSamples sample(const CylTestFunction& f, const CylGrid& grid);
CylSamples sample_h(const CylTestFunction& f, const CylGrid& grid, double flux);

struct TransformDiagnostics {
  double norm2_reference;
  double norm2_transformed;
  double parseval_defect;
  double intertwining_defect;
  /// Largest channel amplitude outside the declared harmonics, relative to
  /// the largest amplitude overall.
  double leakage;
  int n_r;
  int n_ang;
  int n_z;
};

struct TransformControls {
  double r_min = 0.25;
  double r_max = 4.0;
  int n_r = 256;
  int n_ang = 64;
  double z_min = -4.0;
  double z_max = 4.0;
  int n_z = 128;
  double flux = 0.5;
  void validate() const;
};

/// Parseval, intertwining and leakage checks for one test function.
TransformDiagnostics transform_checks(const CylTestFunction& f, const TransformControls& controls = {});

}  // namespace selfadj
