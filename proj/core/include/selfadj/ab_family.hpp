#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "selfadj/endpoint.hpp"
#include "selfadj/extensions.hpp"
#include "selfadj/spectral.hpp"

namespace selfadj {

/// Reduced flux phi = n + f with integer n and f in [0, 1). Keeping the
/// integer part separate makes kappa = m - phi exact under phi -> phi + 1.
class FluxParameter {
 public:
  static FluxParameter from_value(double phi);
  static FluxParameter from_parts(std::int64_t n, double f);
  /// Decimal literal, e.g. "0.5", "-2", "3.25".
  static FluxParameter parse(std::string_view text);

  double value() const noexcept { return static_cast<double>(n_) + f_; }
  std::int64_t integer_part() const noexcept { return n_; }
  double fractional_part() const noexcept { return f_; }
  bool is_integer() const noexcept { return f_ == 0.0; }
  FluxParameter shifted(std::int64_t k) const { return from_parts(n_ + k, f_); }
  /// m - phi, computed as (m - n) - f.
  double kappa(std::int64_t m) const noexcept { return static_cast<double>(m - n_) - f_; }
  friend bool operator==(const FluxParameter&, const FluxParameter&) = default;

 private:
  FluxParameter(std::int64_t n, double f) : n_(n), f_(f) {}
  std::int64_t n_;
  double f_;
};

/// The integer m with m - phi in (-1, 0].
std::int64_t m_of_phi(const FluxParameter& phi);
/// Channels with |m - phi| < 1, ascending.
std::vector<std::int64_t> singular_channels(const FluxParameter& phi);

struct Channel {
  std::int64_t m;
  double p;
  double kappa;
  bool singular;
};

struct ChannelOperator {
  Channel channel;
  Potential q;
  ExtensionKind structure;
  double shift;
};

ChannelOperator channel_operator(std::int64_t m, double p, const FluxParameter& phi);

namespace detail {
struct TauExpr;
std::shared_ptr<const TauExpr> compile_tau_expression(std::string_view source);
double evaluate_tau_expression(const TauExpr& e, double p);
}  // namespace detail

/// Boundary-parameter map p -> tau(p) in [0, pi).
class TauSpec {
 public:
  static TauSpec constant(double value);
  /// Linear interpolation; evaluation outside the table is an error.
  static TauSpec table(std::vector<double> ps, std::vector<double> values, std::string source = {});
  /// Two-column CSV "p,tau"; a non-numeric first line is a header.
  static TauSpec table_csv(const std::string& path);
  /// Arithmetic in p: numbers, p, pi, + - * / ^, parentheses and
  /// atan, atan2, sin, cos, tan, tanh, exp, log, sqrt, abs.
  static TauSpec expression(std::string source);
  /// const:<value> | table:<csv path> | expr:<expression>
  static TauSpec parse(std::string_view text);

  /// tau(p); a validation error when the value leaves [0, pi).
  double operator()(double p) const;
  /// The text form accepted by parse().
  const std::string& text() const noexcept { return text_; }
  bool is_constant() const noexcept { return kind_ == Kind::Constant; }

 private:
  enum class Kind { Constant, Table, Expression };
  TauSpec() = default;
  Kind kind_ = Kind::Constant;
  double value_ = 0.0;
  std::vector<double> ps_, vals_;
  std::shared_ptr<const detail::TauExpr> expr_;
  std::string text_;
};

/// Flux plus one tau per singular channel, ascending in m
/// (tau1 for m(phi), tau2 for m(phi) + 1).
struct ABFamilySpec {
  FluxParameter flux;
  std::vector<TauSpec> taus;
  void validate() const;
  /// Same family for phi + k with channels relabelled m -> m + k.
  ABFamilySpec shifted(std::int64_t k) const { return {flux.shifted(k), taus}; }
};

struct FamilyEntry {
  std::int64_t m;
  double p;
  double kappa;
  ExtensionDescriptor extension;
};

/// Extensions for every p in the grid and every m with |m - phi| <= m_max,
/// ordered by p (grid order) then m.
std::vector<FamilyEntry> build_family(const ABFamilySpec& spec, const std::vector<double>& p_grid, int m_max = 8);

struct ChannelPoint {
  double p;
  double tau;
  /// Channel eigenvalues e_m(p) below zero.
  std::vector<double> channel_eigs;
  /// e_m(p) + p^2.
  std::vector<double> energies;
  std::vector<double> residuals;
  std::vector<std::string> failures;
  /// Bottom of the essential spectrum of a(m, p).
  double bottom;
};

struct ChannelCurve {
  std::int64_t m;
  double kappa;
  std::vector<ChannelPoint> points;
};

struct ABSpectrumReport {
  FluxParameter flux;
  std::vector<double> p_grid;
  std::vector<ChannelCurve> curves;
  /// Essential-spectrum bottom p^2 per grid point.
  std::vector<double> bottoms;
  std::size_t failure_count() const;
};

/// Channel spectra of the singular channels, shifted by p^2. Distinct
/// (kappa, tau) problems are solved once each, concurrently.
ABSpectrumReport ab_spectrum(const ABFamilySpec& spec, const std::vector<double>& p_grid, const EnergyWindow& window,
                             const SpectralControls& controls = {}, unsigned threads = 0);

}  // namespace selfadj
