#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cli_support.hpp"
#include "selfadj/ab_family.hpp"
#include "selfadj/ab_transform.hpp"
#include "selfadj/endpoint.hpp"
#include "selfadj/extensions.hpp"
#include "selfadj/ivp.hpp"
#include "selfadj/report_json.hpp"
#include "selfadj/spectral.hpp"

using namespace selfadj;
using report::Json;

namespace {

struct Outcome {
  Json results;
  Json diagnostics = Json::object();
  std::string csv;
  int exit_code = cli::kExitOk;
};

struct PotentialOpts {
  std::string type = "inverse-square";
  std::optional<double> kappa;
  std::optional<double> c;
  std::string table;
  std::string domain;
  double add_constant = 0.0;

  void attach(CLI::App* app) {
    app->add_option("--potential", type, "inverse-square | constant | table")
        ->check(CLI::IsMember({"inverse-square", "constant", "table"}));
    app->add_option("--kappa", kappa, "inverse-square coupling, q = (kappa^2 - 1/4)/r^2");
    app->add_option("--c", c, "value of a constant potential");
    app->add_option("--table", table, "CSV file with columns x,q");
    app->add_option("--domain", domain, "interval a:b for constant or table potentials");
    app->add_option("--add-constant", add_constant, "constant added to an inverse-square potential");
  }

  Potential build() const {
    if (type == "inverse-square") {
      require(kappa.has_value(), ErrorKind::Validation, "--kappa is required for --potential inverse-square");
      require(std::isfinite(*kappa), ErrorKind::Validation, "--kappa must be finite");
      const Potential is = Potential::inverse_square(*kappa);
      if (add_constant == 0.0) return is;
      return Potential::sum({is, Potential::constant(add_constant, is.domain())});
    }
    std::optional<Interval> d;
    if (!domain.empty()) d = cli::parse_interval(domain);
    if (type == "constant") {
      require(c.has_value(), ErrorKind::Validation, "--c is required for --potential constant");
      return Potential::constant(*c, d.value_or(Interval{}));
    }
    require(!table.empty(), ErrorKind::Validation, "--table is required for --potential table");
    return cli::tabulated_from_csv(table, d);
  }
};

Frame make_frame(const Potential& q, const std::string& kind, std::optional<double> anchor) {
  const auto kappa = q.inverse_square_kappa();
  if (kind == "frobenius") {
    require(kappa.has_value(), ErrorKind::Validation, "--frame frobenius needs a bare inverse-square potential");
    return FrobeniusFrame{*kappa};
  }
  return numeric_frame(fundamental_system(q, 0.0, anchor.value_or(default_anchor(q.domain()))));
}

std::string default_frame(const Potential& q) { return q.inverse_square_kappa() ? "frobenius" : "numeric"; }

std::string csv_row(std::initializer_list<std::string> cells) {
  std::string s;
  for (const auto& c : cells) s += (s.empty() ? "" : ",") + c;
  return s + "\n";
}

Json echo_inputs(const CLI::App* sub) {
  static const std::set<std::string> skip = {"help", "config", "output", "format", "with-timing"};
  Json j = Json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string& name = opt->get_lnames().front();
    if (skip.count(name)) continue;
    if (opt->get_expected_min() == 0) {
      j[name] = opt->count() > 0;
    } else if (opt->count() > 0) {
      j[name] = opt->results().back();
    } else if (!opt->get_default_str().empty()) {
      j[name] = opt->get_default_str();
    }
  }
  return j;
}

}  // namespace

int run_cli(std::vector<std::string> args) {
  CLI::App app{"Self-adjoint extensions of singular Sturm-Liouville operators"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.fallthrough();

  std::string output, format = "json", config;
  bool with_timing = false;
  app.add_option("-o,--output", output, "report path (default: stdout or $SELFADJ_OUTPUT_DIR)");
  app.add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--config", config, "flat JSON file of option values; command-line flags win");
  app.add_flag("--with-timing", with_timing, "add wall-clock timing to the report");

  std::function<Outcome()> action;
  std::string command;

  // classify
  PotentialOpts cls_q;
  std::string cls_endpoint = "both";
  double cls_energy = 0.0;
  std::optional<double> cls_anchor;
  ClassificationControls cls_c;
  auto* cls = app.add_subcommand("classify", "limit-point / limit-circle verdict at each endpoint");
  cls_q.attach(cls);
  cls->add_option("--endpoint", cls_endpoint, "left | right | both")->check(CLI::IsMember({"left", "right", "both"}));
  cls->add_option("--energy", cls_energy, "spectral parameter used by the numerical test");
  cls->add_option("--anchor", cls_anchor, "interior anchor of the fundamental system");
  cls->add_flag("--force-numerical", cls_c.force_numerical, "skip the analytic shortcut");
  cls->add_option("--shrink", cls_c.shrink, "window contraction toward a finite endpoint");
  cls->add_option("--grow", cls_c.grow, "window growth toward an infinite endpoint");
  cls->add_option("--min-windows", cls_c.min_windows);
  cls->add_option("--max-windows", cls_c.max_windows);
  cls->add_option("--cauchy-tol", cls_c.cauchy_tol);
  cls->add_option("--divergence-growth", cls_c.divergence_growth);
  cls->callback([&] {
    command = "classify";
    action = [&] {
      const Potential q = cls_q.build();
      require(cls_c.shrink > 0.0 && cls_c.shrink < 1.0 && cls_c.grow > 1.0 && cls_c.cauchy_tol > 0.0 &&
                  cls_c.divergence_growth > 1.0 && cls_c.min_windows >= 2 && cls_c.max_windows >= cls_c.min_windows,
              ErrorKind::Validation, "invalid classification controls");
      cls_c.anchor = cls_anchor;
      Outcome o;
      o.results = Json{{"potential", report::to_json(q)}, {"energy", cls_energy}};
      o.csv = csv_row({"endpoint", "verdict", "method"});
      std::optional<Verdict> right;
      std::optional<Verdict> left;
      for (Endpoint e : {Endpoint::Left, Endpoint::Right}) {
        if (cls_endpoint != "both" && cls_endpoint != to_string(e)) continue;
        const auto r = classify_endpoint(q, cls_energy, e, cls_c);
        o.results[to_string(e)] = report::to_json(r);
        o.csv += csv_row({to_string(e), to_string(r.verdict), to_string(r.method)});
        (e == Endpoint::Left ? left : right) = r.verdict;
      }
      if (left && right && *right == Verdict::LPC)
        o.results["kind"] = to_string(*left == Verdict::LPC ? ExtensionKind::EssentiallySelfAdjoint
                                                            : ExtensionKind::OneParameterFamily);
      return o;
    };
  });

  // solve-ivp
  PotentialOpts ivp_q;
  double ivp_energy = 0.0, ivp_u0 = 1.0, ivp_du0 = 0.0;
  double ivp_x0 = 0.0, ivp_to = 0.0;
  std::string ivp_method = "rk78";
  IvpControls ivp_c;
  std::optional<double> ivp_max_step;
  auto* ivp = app.add_subcommand("solve-ivp", "integrate -u'' + q u = E u from one point to another");
  ivp_q.attach(ivp);
  ivp->add_option("--energy", ivp_energy);
  ivp->add_option("--x0", ivp_x0)->required();
  ivp->add_option("--u0", ivp_u0);
  ivp->add_option("--du0", ivp_du0);
  ivp->add_option("--to", ivp_to)->required();
  ivp->add_option("--method", ivp_method, "rk78 | picard")->check(CLI::IsMember({"rk78", "picard"}));
  ivp->add_option("--rel-tol", ivp_c.rel_tol);
  ivp->add_option("--abs-tol", ivp_c.abs_tol);
  ivp->add_option("--max-step", ivp_max_step);
  ivp->callback([&] {
    command = "solve-ivp";
    action = [&] {
      const Potential q = ivp_q.build();
      ivp_c.method = ivp_method == "picard" ? IvpMethod::Picard : IvpMethod::AdaptiveRK;
      if (ivp_max_step) ivp_c.max_step = *ivp_max_step;
      ivp_c.validate();
      const Trajectory t = solve_ivp(q, ivp_energy, ivp_x0, ivp_u0, ivp_du0, ivp_to, ivp_c);
      Outcome o;
      o.results = Json{{"potential", report::to_json(q)}, {"controls", report::to_json(ivp_c)},
                       {"trajectory", report::to_json(t)}};
      o.diagnostics = Json{{"samples", t.size()}};
      o.csv = csv_row({"x", "u", "du"});
      for (std::size_t i = 0; i < t.size(); ++i)
        o.csv += csv_row({report::format_double(t.xs()[i]), report::format_double(t.us()[i]),
                          report::format_double(t.dus()[i])});
      return o;
    };
  });

  // eigen
  PotentialOpts eig_q;
  std::optional<double> eig_theta, eig_anchor;
  std::string eig_frame;
  double eig_emin = -1e4, eig_emax = -1e-8;
  SpectralControls eig_c;
  bool eig_functions = false;
  auto* eig = app.add_subcommand("eigen", "bound states of one self-adjoint realisation");
  eig_q.attach(eig);
  eig->add_option("--theta", eig_theta, "boundary parameter in [0, pi); omit for the closure");
  eig->add_option("--frame", eig_frame, "frobenius | numeric")->check(CLI::IsMember({"frobenius", "numeric"}));
  eig->add_option("--anchor", eig_anchor, "anchor of a numeric frame");
  eig->add_option("--emin", eig_emin);
  eig->add_option("--emax", eig_emax);
  eig->add_option("--cutoff-kr", eig_c.cutoff_kr);
  eig->add_option("--mesh-per-decade", eig_c.mesh_per_decade);
  eig->add_flag("--with-eigenfunctions", eig_functions, "include sampled eigenfunctions");
  eig->callback([&] {
    command = "eigen";
    action = [&] {
      const Potential q = eig_q.build();
      const EnergyWindow w{eig_emin, eig_emax};
      w.validate();
      eig_c.validate();
      const ExtensionDescriptor e =
          eig_theta ? extension_from_theta(q, BoundaryParameter(*eig_theta),
                                           make_frame(q, eig_frame.empty() ? default_frame(q) : eig_frame, eig_anchor))
                    : extension_closure(q);
      const EigenSearch s = eigenvalues_below(e, w, eig_c);
      Outcome o;
      o.results = Json{{"extension", report::to_json(e)},
                       {"window", Json{{"e_min", w.e_min}, {"e_max", w.e_max}}},
                       {"controls", report::to_json(eig_c)},
                       {"search", report::to_json(s, eig_functions)}};
      o.csv = report::eigen_csv(s);
      if (!s.failures.empty() && s.failures.size() > s.eigenvalues.size()) o.exit_code = cli::kExitInconclusive;
      return o;
    };
  });

  // ab
  auto* ab = app.add_subcommand("ab", "Aharonov-Bohm family");
  ab->require_subcommand(1);
  ab->fallthrough();

  std::string abs_flux, abs_tau, abs_tau1, abs_tau2, abs_grid;
  double abs_emin = -1e4, abs_emax = -1e-8;
  unsigned abs_threads = 0;
  SpectralControls abs_c;
  auto* abs = ab->add_subcommand("spectrum", "channel bound-state curves E_m(p)");
  abs->add_option("--flux", abs_flux, "flux phi")->required();
  abs->add_option("--tau", abs_tau, "tau for integer flux (const:, table:, expr:)");
  abs->add_option("--tau1", abs_tau1, "tau of channel m(phi)");
  abs->add_option("--tau2", abs_tau2, "tau of channel m(phi) + 1");
  abs->add_option("--p-grid", abs_grid, "start:end:step")->required();
  abs->add_option("--emin", abs_emin);
  abs->add_option("--emax", abs_emax);
  abs->add_option("--cutoff-kr", abs_c.cutoff_kr);
  abs->add_option("--mesh-per-decade", abs_c.mesh_per_decade);
  abs->add_option("--threads", abs_threads, "worker threads (0: hardware)");
  abs->callback([&] {
    command = "ab spectrum";
    action = [&] {
      ABFamilySpec spec{FluxParameter::parse(abs_flux), {}};
      require(abs_tau.empty() || (abs_tau1.empty() && abs_tau2.empty()), ErrorKind::Validation,
              "use either --tau or --tau1/--tau2");
      require(abs_tau2.empty() || !abs_tau1.empty(), ErrorKind::Validation, "--tau2 needs --tau1");
      for (const auto* t : {&abs_tau, &abs_tau1, &abs_tau2})
        if (!t->empty()) spec.taus.push_back(TauSpec::parse(*t));
      spec.validate();
      const auto grid = cli::parse_grid(abs_grid);
      const EnergyWindow w{abs_emin, abs_emax};
      w.validate();
      abs_c.validate();
      const ABSpectrumReport r = ab_spectrum(spec, grid, w, abs_c, abs_threads);
      Outcome o;
      Json taus = Json::array();
      for (const auto& t : spec.taus) taus.push_back(t.text());
      Json singular = Json::array();
      for (auto m : singular_channels(spec.flux)) singular.push_back(m);
      o.results = Json{{"taus", std::move(taus)}, {"singular_channels", std::move(singular)},
                       {"spectrum", report::to_json(r)}};
      o.diagnostics = Json{{"failure_count", r.failure_count()}};
      o.csv = report::spectrum_csv(r);
      if (2 * r.failure_count() > r.curves.size() * r.p_grid.size() && r.failure_count() > 0)
        o.exit_code = cli::kExitInconclusive;
      return o;
    };
  });

  std::string tc_function = "separable";
  std::int64_t tc_harmonic = 0;
  double tc_rc = 2.0, tc_wr = 1.0, tc_wz = 2.0;
  TransformControls tc_c;
  auto* tc = ab->add_subcommand("transform-check", "Parseval and intertwining checks of the channel transform");
  tc->add_option("--function", tc_function, "separable | mixed | zero")
      ->check(CLI::IsMember({"separable", "mixed", "zero"}));
  tc->add_option("--harmonic", tc_harmonic, "n of the separable function e^{-i n angle}");
  tc->add_option("--r-center", tc_rc);
  tc->add_option("--r-width", tc_wr);
  tc->add_option("--z-width", tc_wz);
  tc->add_option("--r-min", tc_c.r_min);
  tc->add_option("--r-max", tc_c.r_max);
  tc->add_option("--n-r", tc_c.n_r);
  tc->add_option("--n-ang", tc_c.n_ang);
  tc->add_option("--z-min", tc_c.z_min);
  tc->add_option("--z-max", tc_c.z_max);
  tc->add_option("--n-z", tc_c.n_z);
  tc->add_option("--flux", tc_c.flux);
  tc->callback([&] {
    command = "ab transform-check";
    action = [&] {
      const CylTestFunction f = tc_function == "separable" ? CylTestFunction::separable(tc_harmonic, tc_rc, tc_wr, tc_wz)
                                : tc_function == "mixed"   ? CylTestFunction::mixed(tc_rc, tc_wr, tc_wz)
                                                           : CylTestFunction::zero();
      const TransformDiagnostics d = transform_checks(f, tc_c);
      Outcome o;
      Json harmonics = Json::array();
      for (auto n : f.harmonics) harmonics.push_back(n);
      o.results = Json{{"function", f.label}, {"harmonics", std::move(harmonics)}, {"checks", report::to_json(d)}};
      o.csv = csv_row({"quantity", "value"});
      for (const auto& [k, v] : o.results["checks"].items())
        o.csv += csv_row({k, v.is_number_float() ? report::format_double(v.get<double>()) : v.dump()});
      return o;
    };
  });

  // decompose
  PotentialOpts dec_q;
  std::string dec_mode = "theta", dec_frame, dec_test = "cutoff", dec_grid = "0.05:2:0.05";
  double dec_c1 = 1.0, dec_c2 = 0.0, dec_r0 = 0.5, dec_r1 = 1.0;
  std::optional<double> dec_anchor, dec_at, dec_theta;
  auto* dec = app.add_subcommand("decompose", "(C, theta) of a solution, or rho/sigma of a test function");
  dec_q.attach(dec);
  dec->add_option("--mode", dec_mode, "theta | sigma")->check(CLI::IsMember({"theta", "sigma"}));
  dec->add_option("--frame", dec_frame, "frobenius | numeric")->check(CLI::IsMember({"frobenius", "numeric"}));
  dec->add_option("--anchor", dec_anchor, "anchor of a numeric frame");
  dec->add_option("--c1", dec_c1, "coefficient of psi1 in the solution");
  dec->add_option("--c2", dec_c2, "coefficient of psi2 in the solution");
  dec->add_option("--at", dec_at, "point where the Wronskians are taken");
  dec->add_option("--test", dec_test, "cutoff | cutoff-times | bump")
      ->check(CLI::IsMember({"cutoff", "cutoff-times", "bump"}));
  dec->add_option("--r0", dec_r0, "inner edge of the test function transition");
  dec->add_option("--r1", dec_r1, "outer edge of the test function transition");
  dec->add_option("--grid", dec_grid, "sample grid start:end:step");
  dec->add_option("--theta", dec_theta, "extension used for the membership test");
  dec->callback([&] {
    command = "decompose";
    action = [&] {
      const Potential q = dec_q.build();
      const Frame frame = make_frame(q, dec_frame.empty() ? default_frame(q) : dec_frame, dec_anchor);
      Outcome o;
      if (dec_mode == "theta") {
        const auto kappa = q.inverse_square_kappa();
        require(kappa.has_value(), ErrorKind::Validation, "--mode theta needs a bare inverse-square potential");
        const ThetaDecomposition d = theta_decompose(ClosedForm(*kappa, dec_c1, dec_c2), frame, dec_at);
        o.results = Json{{"potential", report::to_json(q)}, {"frame", report::to_json(frame)},
                         {"decomposition", report::to_json(d)}};
        o.csv = csv_row({"C", "theta", "c1", "c2"}) +
                csv_row({report::format_double(d.C), report::format_double(d.theta.value()),
                         report::format_double(d.c1), report::format_double(d.c2)});
        return o;
      }
      const auto grid = cli::parse_grid(dec_grid);
      TestFunction g = [&] {
        if (dec_test == "bump") return TestFunction::bump(dec_r0, dec_r1, grid);
        if (dec_test == "cutoff") return TestFunction::cutoff(dec_r0, dec_r1, grid);
        const auto kappa = q.inverse_square_kappa();
        require(kappa.has_value(), ErrorKind::Validation, "--test cutoff-times needs a bare inverse-square potential");
        return TestFunction::cutoff_times(ClosedForm(*kappa, dec_c1, dec_c2), dec_r0, dec_r1, grid);
      }();
      o.results = Json{{"potential", report::to_json(q)}, {"frame", report::to_json(frame)}, {"test", g.label}};
      if (dec_theta) {
        const auto e = extension_from_theta(q, BoundaryParameter(*dec_theta), frame);
        const MembershipResult m = domain_membership(g, e);
        o.results["sigma"] = report::to_json(m.sigma);
        o.results["extension"] = report::to_json(e);
        o.results["membership"] = to_string(m.membership);
      } else {
        o.results["sigma"] = report::to_json(rho_sigma(g, q, frame));
      }
      const auto& s = o.results["sigma"];
      o.csv = csv_row({"x", "g", "rho", "sigma"});
      for (std::size_t i = 0; i < grid.size(); ++i)
        o.csv += csv_row({report::format_double(s["grid"][i].get<double>()),
                          report::format_double(s["g"][i].get<double>()),
                          report::format_double(s["rho"][i].get<double>()),
                          report::format_double(s["sigma"][i].get<double>())});
      return o;
    };
  });

  try {
    args = cli::inject_config(std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\nRun with --help for usage.\n";
    return cli::kExitValidation;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return cli::exit_code_for(e.kind());
  }

  try {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o = action();
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const CLI::App* leaf = app.get_subcommands().front();
    while (!leaf->get_subcommands().empty()) leaf = leaf->get_subcommands().front();
    std::string stem = command;
    std::replace(stem.begin(), stem.end(), ' ', '-');
    std::string content;
    if (format == "csv") {
      content = o.csv;
    } else {
      Json env = report::envelope(command, echo_inputs(leaf), std::move(o.results), std::move(o.diagnostics));
      if (with_timing) env["timing"] = Json{{"wall_seconds", seconds}};
      content = report::dump(env);
    }
    const auto path = cli::resolve_output(output, stem, format);
    if (path.empty()) {
      std::cout << content;
    } else {
      cli::write_atomically(path, content);
    }
    return o.exit_code;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return cli::exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitValidation;
  }
}
