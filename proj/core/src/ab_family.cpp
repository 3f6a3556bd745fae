#include "selfadj/ab_family.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <map>
#include <numbers>
#include <sstream>
#include <thread>

#include "selfadj/errors.hpp"

namespace selfadj {

namespace {

constexpr double kPi = std::numbers::pi;

void check_tau(double v, double p) {
  if (!(std::isfinite(v) && v >= 0.0 && v < kPi)) {
    std::ostringstream os;
    os.precision(17);
    os << "tau(" << p << ") = " << v << " lies outside [0, pi)";
    fail(ErrorKind::Validation, os.str());
  }
}

std::string fmt17(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

FluxParameter FluxParameter::from_value(double phi) {
  require(std::isfinite(phi) && std::abs(phi) < 4.0e15, ErrorKind::Validation, "flux must be a finite real");
  const double n = std::floor(phi);
  return FluxParameter(static_cast<std::int64_t>(n), phi - n);
}

FluxParameter FluxParameter::from_parts(std::int64_t n, double f) {
  require(std::isfinite(f) && f >= 0.0 && f < 1.0, ErrorKind::Validation, "fractional flux part must lie in [0, 1)");
  return FluxParameter(n, f);
}

FluxParameter FluxParameter::parse(std::string_view text) {
  const std::string s(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    fail(ErrorKind::Validation, "flux '" + s + "' is not a number");
  }
  require(used == s.size(), ErrorKind::Validation, "flux '" + s + "' is not a number");
  return from_value(v);
}

std::int64_t m_of_phi(const FluxParameter& phi) { return phi.integer_part(); }

std::vector<std::int64_t> singular_channels(const FluxParameter& phi) {
  const std::int64_t m = m_of_phi(phi);
  if (phi.is_integer()) return {m};
  return {m, m + 1};
}

ChannelOperator channel_operator(std::int64_t m, double p, const FluxParameter& phi) {
  const double kappa = phi.kappa(m);
  const bool singular = std::abs(kappa) < 1.0;
  return {{m, p, kappa, singular},
          Potential::inverse_square(kappa),
          singular ? ExtensionKind::OneParameterFamily : ExtensionKind::EssentiallySelfAdjoint,
          p * p};
}

TauSpec TauSpec::constant(double value) {
  check_tau(value, 0.0);
  TauSpec t;
  t.kind_ = Kind::Constant;
  t.value_ = value;
  t.text_ = "const:" + fmt17(value);
  return t;
}

TauSpec TauSpec::table(std::vector<double> ps, std::vector<double> values, std::string source) {
  require(!ps.empty() && ps.size() == values.size(), ErrorKind::Validation, "tau table needs matching non-empty columns");
  for (std::size_t i = 1; i < ps.size(); ++i)
    require(ps[i] > ps[i - 1], ErrorKind::Validation, "tau table p column must be strictly increasing");
  for (std::size_t i = 0; i < ps.size(); ++i) check_tau(values[i], ps[i]);
  TauSpec t;
  t.kind_ = Kind::Table;
  t.ps_ = std::move(ps);
  t.vals_ = std::move(values);
  t.text_ = "table:" + source;
  return t;
}

TauSpec TauSpec::table_csv(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::Validation, "cannot read tau table '" + path + "'");
  std::vector<double> ps, vs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double p = 0.0, v = 0.0;
    if (!(row >> p >> v)) {
      if (lineno == 1) continue;  // header
      fail(ErrorKind::Validation, "tau table '" + path + "': bad row " + std::to_string(lineno));
    }
    ps.push_back(p);
    vs.push_back(v);
  }
  return table(std::move(ps), std::move(vs), path);
}

TauSpec TauSpec::expression(std::string source) {
  TauSpec t;
  t.kind_ = Kind::Expression;
  t.expr_ = detail::compile_tau_expression(source);
  t.text_ = "expr:" + source;
  return t;
}

TauSpec TauSpec::parse(std::string_view text) {
  const auto colon = text.find(':');
  require(colon != std::string_view::npos, ErrorKind::Validation,
          "tau spec must be const:<value>, table:<csv> or expr:<expression>");
  const std::string_view kind = text.substr(0, colon);
  const std::string body(text.substr(colon + 1));
  if (kind == "const") {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(body, &used);
    } catch (const std::exception&) {
      fail(ErrorKind::Validation, "tau constant '" + body + "' is not a number");
    }
    require(used == body.size(), ErrorKind::Validation, "tau constant '" + body + "' is not a number");
    return constant(v);
  }
  if (kind == "table") return table_csv(body);
  if (kind == "expr") return expression(body);
  fail(ErrorKind::Validation, "unknown tau spec kind '" + std::string(kind) + "'");
}

double TauSpec::operator()(double p) const {
  double v = value_;
  if (kind_ == Kind::Table) {
    if (!(p >= ps_.front() && p <= ps_.back())) {
      std::ostringstream os;
      os.precision(17);
      os << "p = " << p << " outside the tau table [" << ps_.front() << ", " << ps_.back() << "]";
      fail(ErrorKind::Validation, os.str());
    }
    const auto it = std::lower_bound(ps_.begin(), ps_.end(), p);
    const std::size_t i = static_cast<std::size_t>(it - ps_.begin());
    if (ps_[i] == p) {
      v = vals_[i];
    } else {
      const double t = (p - ps_[i - 1]) / (ps_[i] - ps_[i - 1]);
      v = vals_[i - 1] + t * (vals_[i] - vals_[i - 1]);
    }
  } else if (kind_ == Kind::Expression) {
    v = detail::evaluate_tau_expression(*expr_, p);
  }
  check_tau(v, p);
  return v;
}

void ABFamilySpec::validate() const {
  const auto sing = singular_channels(flux);
  if (taus.size() != sing.size()) {
    std::ostringstream os;
    os << "flux " << fmt17(flux.value()) << " has " << sing.size() << " singular channel(s) (m =";
    for (auto m : sing) os << ' ' << m;
    os << ") but " << taus.size() << " tau map(s) were given";
    fail(ErrorKind::Validation, os.str());
  }
}

std::vector<FamilyEntry> build_family(const ABFamilySpec& spec, const std::vector<double>& p_grid, int m_max) {
  spec.validate();
  require(m_max >= 1, ErrorKind::Validation, "channel window must be at least 1");
  for (double p : p_grid) require(std::isfinite(p), ErrorKind::Validation, "p grid must be finite");
  const auto sing = singular_channels(spec.flux);
  const std::int64_t n = spec.flux.integer_part();
  std::vector<FamilyEntry> out;
  for (double p : p_grid) {
    for (std::int64_t m = n - m_max; m <= n + m_max + 1; ++m) {
      const double kappa = spec.flux.kappa(m);
      if (std::abs(kappa) > m_max) continue;
      const auto q = Potential::inverse_square(kappa);
      const auto it = std::find(sing.begin(), sing.end(), m);
      if (it != sing.end()) {
        const double tau = spec.taus[static_cast<std::size_t>(it - sing.begin())](p);
        out.push_back({m, p, kappa, extension_from_theta(q, BoundaryParameter(tau), FrobeniusFrame{kappa})});
      } else {
        out.push_back({m, p, kappa, extension_closure(q)});
      }
    }
  }
  return out;
}

std::size_t ABSpectrumReport::failure_count() const {
  std::size_t n = 0;
  for (const auto& c : curves)
    for (const auto& pt : c.points) n += pt.failures.size();
  return n;
}

ABSpectrumReport ab_spectrum(const ABFamilySpec& spec, const std::vector<double>& p_grid, const EnergyWindow& window,
                             const SpectralControls& controls, unsigned threads) {
  spec.validate();
  window.validate();
  controls.validate();
  for (double p : p_grid) require(std::isfinite(p), ErrorKind::Validation, "p grid must be finite");
  const auto sing = singular_channels(spec.flux);

  ABSpectrumReport rep{spec.flux, p_grid, {}, {}};
  for (double p : p_grid) rep.bottoms.push_back(p * p);

  // Tau values first, so invalid maps fail before any solving.
  std::vector<std::vector<double>> taus(sing.size());
  for (std::size_t c = 0; c < sing.size(); ++c)
    for (double p : p_grid) taus[c].push_back(spec.taus[c](p));

  // Distinct channel problems (kappa, tau).
  std::map<std::pair<double, double>, std::size_t> index;
  std::vector<std::pair<double, double>> problems;
  for (std::size_t c = 0; c < sing.size(); ++c) {
    const double kappa = spec.flux.kappa(sing[c]);
    for (double tau : taus[c]) {
      if (index.emplace(std::pair{kappa, tau}, problems.size()).second) problems.emplace_back(kappa, tau);
    }
  }

  struct Outcome {
    std::vector<double> eigs;
    std::vector<double> residuals;
    std::vector<std::string> failures;
  };
  auto solve_one = [&](std::size_t i) {
    Outcome o;
    try {
      const auto [kappa, tau] = problems[i];
      const auto e = extension_from_theta(Potential::inverse_square(kappa), BoundaryParameter(tau), FrobeniusFrame{kappa});
      auto res = eigenvalues_below(e, window, controls);
      for (const auto& r : res.eigenvalues) {
        o.eigs.push_back(r.energy);
        o.residuals.push_back(r.residual);
      }
      for (const auto& f : res.failures) o.failures.push_back(f.message);
    } catch (const Error& ex) {
      o.failures.push_back(ex.what());
    }
    return o;
  };

  std::vector<Outcome> outcomes(problems.size());
  const unsigned hw = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  for (std::size_t start = 0; start < problems.size(); start += hw) {
    std::vector<std::future<Outcome>> batch;
    const std::size_t stop = std::min(problems.size(), start + hw);
    for (std::size_t i = start; i < stop; ++i) batch.push_back(std::async(std::launch::async, solve_one, i));
    for (std::size_t i = start; i < stop; ++i) outcomes[i] = batch[i - start].get();
  }

  for (std::size_t c = 0; c < sing.size(); ++c) {
    ChannelCurve curve{sing[c], spec.flux.kappa(sing[c]), {}};
    for (std::size_t j = 0; j < p_grid.size(); ++j) {
      const double p = p_grid[j];
      const Outcome& o = outcomes[index.at({curve.kappa, taus[c][j]})];
      curve.points.push_back({p, taus[c][j], o.eigs, shifted_spectrum(o.eigs, p), o.residuals, o.failures, p * p});
    }
    rep.curves.push_back(std::move(curve));
  }
  return rep;
}

}  // namespace selfadj
