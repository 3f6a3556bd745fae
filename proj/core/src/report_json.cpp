#include "selfadj/report_json.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace selfadj::report {

namespace {

void write(std::ostringstream& os, const Json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) os << ",\n";
        first = false;
        os << inner << Json(key).dump() << ": ";
        write(os, value, indent + 1);
      }
      os << "\n" << pad << "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << inner;
        write(os, j[i], indent + 1);
      }
      os << "\n" << pad << "]";
      return;
    }
    case Json::value_t::number_float:
      os << format_double(j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

Json doubles(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(x);
  return a;
}

}  // namespace

std::string format_double(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string dump(const Json& j) {
  std::ostringstream os;
  write(os, j, 0);
  os << "\n";
  return os.str();
}

Json to_json(const Interval& d) { return Json{{"a", d.a}, {"b", d.b}}; }

Json to_json(const Potential& q) {
  Json j;
  std::visit(
      [&j](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Potential::InverseSquare>) {
          j["type"] = "inverse-square";
          j["kappa"] = k.kappa;
        } else if constexpr (std::is_same_v<K, Potential::Constant>) {
          j["type"] = "constant";
          j["c"] = k.c;
        } else if constexpr (std::is_same_v<K, Potential::Tabulated>) {
          j["type"] = "tabulated";
          j["grid"] = doubles(k.grid);
          j["values"] = doubles(k.values);
        } else {
          j["type"] = "sum";
          Json terms = Json::array();
          for (const auto& t : k.terms) terms.push_back(to_json(t));
          j["terms"] = std::move(terms);
        }
      },
      q.kind());
  j["domain"] = to_json(q.domain());
  j["key"] = q.key();
  return j;
}

Json to_json(const WindowDiagnostics& d) {
  return Json{{"anchor", d.anchor},         {"edges", doubles(d.edges)},   {"mass_f1", doubles(d.mass_f1)},
              {"mass_f2", doubles(d.mass_f2)}, {"ratio_f1", d.ratio_f1}, {"ratio_f2", d.ratio_f2}};
}

Json to_json(const EndpointClassification& c) {
  Json j{{"endpoint", to_string(c.endpoint)}, {"verdict", to_string(c.verdict)}, {"method", to_string(c.method)}};
  if (c.method == ClassificationMethod::Numerical) j["windows"] = to_json(c.diagnostics);
  return j;
}

Json to_json(const ExtensionStructure& s) {
  return Json{{"kind", to_string(s.kind)}, {"left", to_json(s.left)}, {"right", to_json(s.right)}};
}

Json to_json(const IvpControls& c) {
  return Json{{"method", c.method == IvpMethod::Picard ? "picard" : "rk78"},
              {"rel_tol", c.rel_tol},
              {"abs_tol", c.abs_tol},
              {"max_step", c.max_step},
              {"start_cutoff", c.start_cutoff}};
}

Json to_json(const Trajectory& t) {
  return Json{{"energy", t.energy()},
              {"potential", t.potential_key()},
              {"x", doubles(t.xs())},
              {"u", doubles(t.us())},
              {"du", doubles(t.dus())}};
}

Json to_json(const ThetaDecomposition& d) {
  return Json{{"C", d.C}, {"theta", d.theta.value()}, {"c1", d.c1}, {"c2", d.c2}};
}

Json to_json(const Frame& f) {
  if (const auto* fr = std::get_if<FrobeniusFrame>(&f)) return Json{{"type", "frobenius"}, {"kappa", fr->kappa}};
  const auto& nf = std::get<NumericFrame>(f);
  return Json{{"type", "numeric"}, {"anchor", nf.system->x0}};
}

Json to_json(const ExtensionDescriptor& e) {
  Json j{{"potential", to_json(e.potential())}};
  if (const auto* t = e.theta()) {
    j["kind"] = "theta";
    j["theta"] = t->theta.value();
    j["frame"] = to_json(t->frame);
  } else {
    j["kind"] = "closure";
  }
  return j;
}

Json to_json(const SigmaDecomposition& s) {
  Json j{{"grid", doubles(s.grid)},
         {"g", doubles(s.g)},
         {"rho", doubles(s.rho)},
         {"sigma", doubles(s.sigma)},
         {"c1", s.c1},
         {"c2", s.c2},
         {"projection_defect", s.projection_defect},
         {"scale", s.scale},
         {"trivial", s.trivial}};
  j["decomposition"] = s.decomposition ? to_json(*s.decomposition) : Json();
  return j;
}

Json to_json(const SpectralControls& c) {
  return Json{{"ivp", to_json(c.ivp)},
              {"cutoff_kr", c.cutoff_kr},
              {"seed_kr", c.seed_kr},
              {"match_kr", c.match_kr},
              {"mesh_per_decade", c.mesh_per_decade},
              {"bracket_rel", c.bracket_rel},
              {"merge_rel", c.merge_rel},
              {"residual_bound", c.residual_bound},
              {"mismatch_bound", c.mismatch_bound}};
}

Json to_json(const EigenSearch& s, bool with_eigenfunctions) {
  Json eig = Json::array();
  for (const auto& r : s.eigenvalues) {
    Json e{{"energy", r.energy},   {"residual", r.residual}, {"mismatch", r.mismatch},
           {"cutoff", r.cutoff},   {"r_seed", r.r_seed}};
    if (with_eigenfunctions) e["eigenfunction"] = to_json(r.eigenfunction);
    eig.push_back(std::move(e));
  }
  Json fails = Json::array();
  for (const auto& f : s.failures) fails.push_back(Json{{"lo", f.lo}, {"hi", f.hi}, {"message", f.message}});
  return Json{{"eigenvalues", std::move(eig)}, {"failures", std::move(fails)}, {"mesh_points", s.mesh_points}};
}

Json to_json(const ABSpectrumReport& r) {
  Json curves = Json::array();
  for (const auto& c : r.curves) {
    Json pts = Json::array();
    for (const auto& pt : c.points) {
      Json fails = Json::array();
      for (const auto& f : pt.failures) fails.push_back(f);
      pts.push_back(Json{{"p", pt.p},
                         {"tau", pt.tau},
                         {"channel_eigenvalues", doubles(pt.channel_eigs)},
                         {"energies", doubles(pt.energies)},
                         {"residuals", doubles(pt.residuals)},
                         {"bottom", pt.bottom},
                         {"failures", std::move(fails)}});
    }
    curves.push_back(Json{{"m", c.m}, {"kappa", c.kappa}, {"points", std::move(pts)}});
  }
  return Json{{"flux", Json{{"value", r.flux.value()},
                            {"integer_part", r.flux.integer_part()},
                            {"fractional_part", r.flux.fractional_part()}}},
              {"p_grid", doubles(r.p_grid)},
              {"bottoms", doubles(r.bottoms)},
              {"curves", std::move(curves)},
              {"failure_count", r.failure_count()}};
}

Json to_json(const TransformDiagnostics& d) {
  return Json{{"norm2_reference", d.norm2_reference},
              {"norm2_transformed", d.norm2_transformed},
              {"parseval_defect", d.parseval_defect},
              {"intertwining_defect", d.intertwining_defect},
              {"leakage", d.leakage},
              {"n_r", d.n_r},
              {"n_ang", d.n_ang},
              {"n_z", d.n_z}};
}

Json envelope(const std::string& command, Json inputs, Json results, Json diagnostics) {
  return Json{{"schema_version", kSchemaVersion},
              {"command", command},
              {"inputs", std::move(inputs)},
              {"results", std::move(results)},
              {"diagnostics", std::move(diagnostics)}};
}

std::string spectrum_csv(const ABSpectrumReport& r) {
  std::string out = "m,p,E,kind\n";
  for (std::size_t i = 0; i < r.p_grid.size(); ++i)
    out += "," + format_double(r.p_grid[i]) + "," + format_double(r.bottoms[i]) + ",essential_bottom\n";
  for (const auto& c : r.curves)
    for (const auto& pt : c.points)
      for (double e : pt.energies)
        out += std::to_string(c.m) + "," + format_double(pt.p) + "," + format_double(e) + ",bound\n";
  return out;
}

std::string eigen_csv(const EigenSearch& s) {
  std::string out = "m,p,E,kind\n";
  for (const auto& r : s.eigenvalues) out += ",," + format_double(r.energy) + ",bound\n";
  return out;
}

}  // namespace selfadj::report
