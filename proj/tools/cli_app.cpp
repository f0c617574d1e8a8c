#include "cli_app.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <future>
#include <json.hpp>

#include "graphpde/comparison.hpp"
#include "graphpde/dynamics.hpp"
#include "graphpde/io.hpp"
#include "graphpde/props.hpp"

namespace graphpde::cli {

namespace {

using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

struct CommonOpts {
  std::string graph_path;
  std::string config_path;
  std::string out_dir;
  double tol = -1.0;  // negative: per-command defaults
  std::uint64_t seed = 1;
  bool quiet = false;
};

int worker_cap() {
  if (const char* env = std::getenv("GRAPHPDE_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

GraphFile load_graph_or_demo(const CommonOpts& opt) {
  if (opt.graph_path.empty()) {
    auto g = demo_graph();
    auto p = demo_partition(g);
    return GraphFile{std::move(g), std::move(p)};
  }
  return load_graph_file(opt.graph_path);
}

ojson meta_json(const std::string& command, const CommonOpts& opt) {
  ojson m;
  m["command"] = command;
  m["graph"] = opt.graph_path.empty() ? "<builtin demo>" : opt.graph_path;
  if (!opt.config_path.empty()) m["config"] = opt.config_path;
  m["seed"] = opt.seed;
  if (opt.tol >= 0.0) m["tolerance"] = opt.tol;
  return m;
}

ojson eigensystem_json(const EigenSystem& es, const WeightedGraph& g) {
  ojson j;
  switch (es.kind) {
    case EigenKind::Full: j["kind"] = "full"; break;
    case EigenKind::Dirichlet: j["kind"] = "dirichlet"; break;
    case EigenKind::Neumann: j["kind"] = "neumann"; break;
  }
  ojson vals = ojson::array();
  for (double v : es.values) vals.push_back(format_g17(v));
  j["eigenvalues"] = vals;
  ojson funcs = ojson::array();
  for (int k = 0; k < es.count(); ++k) {
    ojson f;
    for (size_t i = 0; i < es.support.size(); ++i)
      f[g.id(es.support[i])] = format_g17(es.functions[k][i]);
    for (size_t i = 0; i < es.boundary.size(); ++i)
      f[g.id(es.boundary[i])] = format_g17(
          es.kind == EigenKind::Dirichlet ? 0.0 : es.boundary_values[k][i]);
    funcs.push_back(f);
  }
  j["eigenfunctions"] = funcs;
  return j;
}

ojson spectrum_json(const WeightedGraph& g, const DomainPartition* p) {
  ojson spec;
  spec["full"] = eigensystem_json(full_eigensystem(g), g);
  if (p) {
    spec["dirichlet"] = eigensystem_json(dirichlet_eigensystem(g, *p), g);
    spec["neumann"] = eigensystem_json(neumann_eigensystem(g, *p), g);
  }
  return spec;
}

void print_eigensystem(std::ostream& out, const EigenSystem& es, const WeightedGraph& g) {
  const char* kind = es.kind == EigenKind::Full ? "full"
                     : es.kind == EigenKind::Dirichlet ? "dirichlet"
                                                       : "neumann";
  out << "== " << kind << " ==\n";
  for (int k = 0; k < es.count(); ++k) {
    out << "eigenvalue[" << k << "] = " << format_g17(es.values[k]) << "\n";
    for (size_t i = 0; i < es.support.size(); ++i)
      out << "  " << g.id(es.support[i]) << " " << format_g17(es.functions[k][i]) << "\n";
    for (size_t i = 0; i < es.boundary.size(); ++i)
      out << "  " << g.id(es.boundary[i]) << " "
          << format_g17(es.kind == EigenKind::Dirichlet ? 0.0 : es.boundary_values[k][i])
          << " (boundary)\n";
  }
}

void ensure_out_dir(const std::string& dir) {
  if (!dir.empty()) fs::create_directories(dir);
}

std::string out_path(const CommonOpts& opt, const std::string& name) {
  if (opt.out_dir.empty()) return name;
  return (fs::path(opt.out_dir) / name).string();
}

TimeSeries downsample(const TimeSeries& s, int stride) {
  if (stride <= 1) return s;
  TimeSeries out;
  for (int m = 0; m < s.size(); ++m)
    if (m % stride == 0 || m == s.size() - 1) {
      out.times.push_back(s.times[m]);
      out.states.push_back(s.states[m]);
    }
  return out;
}

// residual + positivity verdicts for an emitted trajectory
ojson series_verdicts(const TimeSeries& ts, const WeightedGraph& g, const DomainPartition* p,
                      BoundaryKind kind, const Reaction& f, const SpaceTimeFn& gdata,
                      bool data_nonneg, bool* ok) {
  double sup = 0.0;
  for (const auto& st : ts.states) sup = std::max(sup, sup_norm(st));
  const double tol = default_parabolic_tolerance(ts.dt(), sup);

  SpaceTimeFn source = [&f, &ts](int x, double t) {
    // reaction evaluated along the trajectory itself
    int m = 0;
    const double dt = ts.dt();
    if (dt > 0.0) m = std::min(static_cast<int>(std::llround(t / dt)), ts.size() - 1);
    return f(ts.states[m][x]);
  };
  BoundaryOperator bc;
  if (kind == BoundaryKind::Dirichlet)
    bc.alpha = [](int, double) { return 1.0; };
  else
    bc.beta = [](int, double) { return 1.0; };
  bc.data = gdata;
  // a trajectory trivially matches its own initial state; the margins that
  // matter for "solves its own equation" are the residual and boundary ones
  const auto& u0_state = ts.states[0];
  const auto cert = certify_parabolic(ts, g, p, {}, bc, source, tol,
                                      [&u0_state](int x) { return u0_state[x]; });
  const bool solves = cert.is_supersolution && cert.is_subsolution;

  ojson v;
  v["residual"] = {{"verdict", cert.verdict()},
                   {"tolerance", tol},
                   {"min_residual", cert.min_residual},
                   {"max_residual", cert.max_residual},
                   {"worst_location", cert.worst_location}};
  bool pos_ok = true;
  if (data_nonneg) {
    const auto pos = check_positivity(ts, g, p, PositivityMode::Nonneg, 1e-9);
    pos_ok = pos.pass;
    v["positivity"] = {{"mode", "nonneg"},
                       {"pass", pos.pass},
                       {"min_value", pos.min_value},
                       {"min_vertex", pos.min_vertex}};
  }
  if (ok) *ok = solves && pos_ok;
  return v;
}

struct ScenarioSpec {
  std::string problem;  // linear | semilinear | logistic_dirichlet | ...
  Reaction reaction = Reaction::zero();
  BoundaryKind bkind = BoundaryKind::None;
  double boundary_value = 0.0;
  bool has_boundary_value = false;
  double shift = 0.0;
  double forcing = 0.0;
  GraphFunction u0;
  double horizon = 50.0;
  double dt = 1e-3;
  int stride = 100;
  double a = 1.0, b = 1.0, alpha = 0.3;
};

ScenarioSpec scenario_from_config(const Config& cfg, const WeightedGraph& g,
                                  const DomainPartition* p) {
  ScenarioSpec s;
  s.problem = cfg.get_string("scenario", "problem", "semilinear");
  const std::string boundary = cfg.get_string("scenario", "boundary", p ? "dirichlet" : "none");
  if (boundary == "dirichlet")
    s.bkind = BoundaryKind::Dirichlet;
  else if (boundary == "neumann")
    s.bkind = BoundaryKind::Neumann;
  else if (boundary == "none")
    s.bkind = BoundaryKind::None;
  else
    throw ParseError("[scenario] boundary: expected dirichlet, neumann or none, got `" +
                     boundary + "`");
  if (s.bkind != BoundaryKind::None && !p)
    throw ParseError("[scenario] boundary conditions need a partitioned graph");

  s.a = cfg.get_double("scenario", "a", 1.0);
  s.b = cfg.get_double("scenario", "b", 1.0);
  s.alpha = cfg.get_double("scenario", "alpha", 0.3);
  const std::string reaction = cfg.get_string("scenario", "reaction", "none");
  if (reaction == "logistic")
    s.reaction = Reaction::logistic(s.a, s.b);
  else if (reaction == "kpp")
    s.reaction = Reaction::fisher_kpp();
  else if (reaction == "allen_cahn")
    s.reaction = Reaction::allen_cahn(s.alpha);
  else if (reaction == "polynomial")
    s.reaction = Reaction::polynomial(cfg.get_doubles("scenario", "coeffs"));
  else if (reaction == "none")
    s.reaction = Reaction::zero();
  else
    throw ParseError("[scenario] reaction: unknown kind `" + reaction + "`");

  s.shift = cfg.get_double("scenario", "shift", 0.0);
  s.forcing = cfg.get_double("scenario", "forcing", 0.0);
  if (cfg.has("scenario", "g")) {
    s.boundary_value = cfg.get_double("scenario", "g", 0.0);
    s.has_boundary_value = true;
  }
  s.horizon = cfg.get_double("scenario", "T", 50.0);
  s.dt = cfg.get_double("scenario", "dt", 1e-3);
  s.stride = cfg.get_int("scenario", "stride", 100);
  if (!(s.horizon > 0.0)) throw ParseError("[scenario] T must be positive");
  if (!(s.dt > 0.0)) throw ParseError("[scenario] dt must be positive");
  if (s.stride < 1) throw ParseError("[scenario] stride must be at least 1");

  const size_t want = (s.bkind == BoundaryKind::None)
                          ? static_cast<size_t>(g.size())
                          : p->interior().size();
  auto u0 = cfg.get_doubles("scenario", "u0");
  if (u0.empty()) u0.push_back(0.0);
  if (u0.size() == 1) u0.assign(want, u0[0]);
  if (u0.size() != want)
    throw ParseError("[scenario] u0: expected 1 or " + std::to_string(want) + " values, got " +
                     std::to_string(u0.size()));
  s.u0 = std::move(u0);
  return s;
}

// ---- subcommands ----

int cmd_validate(const CommonOpts& opt, std::ostream& out, std::ostream& err) {
  (void)err;
  const auto gf = load_graph_or_demo(opt);
  const auto rep = validate(gf.graph, gf.partition ? &*gf.partition : nullptr);
  if (rep.ok()) {
    if (!opt.quiet) out << "validation: pass (" << gf.graph.size() << " vertices)\n";
    return 0;
  }
  out << "validation: fail\n";
  for (const auto& v : rep.violations) out << "  - " << v << "\n";
  return 2;
}

int cmd_eig(const CommonOpts& opt, std::ostream& out, std::ostream& err) {
  (void)err;
  const auto gf = load_graph_or_demo(opt);
  const DomainPartition* p = gf.partition ? &*gf.partition : nullptr;
  if (!opt.quiet) {
    print_eigensystem(out, full_eigensystem(gf.graph), gf.graph);
    if (p) {
      print_eigensystem(out, dirichlet_eigensystem(gf.graph, *p), gf.graph);
      print_eigensystem(out, neumann_eigensystem(gf.graph, *p), gf.graph);
    }
  }
  if (!opt.out_dir.empty()) {
    ensure_out_dir(opt.out_dir);
    ojson rep;
    rep["meta"] = meta_json("eig", opt);
    rep["spectrum"] = spectrum_json(gf.graph, p);
    rep["verdicts"] = ojson::object();
    rep["classification"] = nullptr;
    write_text_atomic(out_path(opt, "report.json"), rep.dump(2) + "\n");
  }
  return 0;
}

int cmd_solve(const CommonOpts& opt, std::ostream& out, std::ostream& err) {
  (void)err;
  if (opt.config_path.empty()) throw ParseError("solve: --config is required");
  const auto gf = load_graph_or_demo(opt);
  const auto cfg = Config::load(opt.config_path);
  const DomainPartition* p = gf.partition ? &*gf.partition : nullptr;
  const auto spec = scenario_from_config(cfg, gf.graph, p);

  TimeSeries recorded;
  if (spec.reaction.is_zero() && spec.problem != "semilinear") {
    // spectral linear solve on the output grid
    LinearParabolicProblem lp;
    lp.graph = &gf.graph;
    lp.partition = (spec.bkind == BoundaryKind::None) ? nullptr : p;
    lp.kind = spec.bkind;
    lp.shift = spec.shift;
    lp.forcing = constant_fn(spec.forcing);
    if (spec.has_boundary_value) lp.boundary_data = constant_fn(spec.boundary_value);
    lp.initial = spec.u0;
    lp.horizon = spec.horizon;
    const int steps = static_cast<int>(std::llround(spec.horizon / spec.dt));
    const TimeGrid grid{spec.horizon, steps};
    TimeSeries ts;
    switch (spec.bkind) {
      case BoundaryKind::Dirichlet: ts = solve_ibvp_dirichlet(lp, grid); break;
      case BoundaryKind::Neumann: ts = solve_ibvp_neumann(lp, grid); break;
      case BoundaryKind::None: ts = solve_cauchy(lp, grid); break;
    }
    recorded = downsample(ts, spec.stride);
  } else {
    Scenario sc;
    sc.graph = &gf.graph;
    sc.partition = (spec.bkind == BoundaryKind::None) ? nullptr : p;
    sc.kind = spec.bkind;
    sc.f = spec.reaction;
    if (spec.has_boundary_value) sc.boundary_data = constant_fn(spec.boundary_value);
    sc.initial = spec.u0;
    sc.horizon = spec.horizon;
    sc.dt = spec.dt;
    sc.stride = spec.stride;
    recorded = integrate(sc);
  }

  bool data_nonneg = spec.boundary_value >= 0.0 && spec.forcing >= 0.0;
  for (double v : spec.u0)
    if (v < 0.0) data_nonneg = false;

  // the residual check needs at least the recorded resolution
  bool verdict_ok = false;
  const DomainPartition* pv = (spec.bkind == BoundaryKind::None) ? nullptr : p;
  Reaction f_for_check = spec.reaction;
  if (spec.reaction.is_zero() && (spec.shift != 0.0 || spec.forcing != 0.0)) {
    // fold the linear terms into the residual source: f(u) = forcing − shift·u
    f_for_check = Reaction::polynomial({spec.forcing, -spec.shift});
  }
  ojson verdicts =
      series_verdicts(recorded, gf.graph, pv, spec.bkind, f_for_check,
                      spec.has_boundary_value ? constant_fn(spec.boundary_value) : SpaceTimeFn{},
                      data_nonneg, &verdict_ok);

  ensure_out_dir(opt.out_dir);
  const std::string csv_name = cfg.get_string("output", "csv", "trajectory.csv");
  write_text_atomic(out_path(opt, csv_name), series_to_csv(recorded, gf.graph.ids()));
  if (cfg.has("output", "plot"))
    write_text_atomic(out_path(opt, cfg.get_string("output", "plot", "plot.dat")),
                      series_to_plot(recorded, gf.graph.ids()));

  ojson rep;
  rep["meta"] = meta_json("solve", opt);
  rep["spectrum"] = spectrum_json(gf.graph, p);
  rep["verdicts"] = verdicts;
  rep["classification"] = nullptr;
  write_text_atomic(out_path(opt, cfg.get_string("output", "json", "report.json")),
                    rep.dump(2) + "\n");

  if (!opt.quiet)
    out << "solve: wrote " << csv_name << " (" << recorded.size() << " rows), verdict "
        << (verdict_ok ? "pass" : "FAIL") << "\n";
  return verdict_ok ? 0 : 1;
}

int cmd_steady(const CommonOpts& opt, std::ostream& out, std::ostream& err) {
  (void)err;
  if (opt.config_path.empty()) throw ParseError("steady: --config is required");
  const auto gf = load_graph_or_demo(opt);
  const auto cfg = Config::load(opt.config_path);
  const DomainPartition* p = gf.partition ? &*gf.partition : nullptr;
  const auto spec = scenario_from_config(cfg, gf.graph, p);
  const double tol = opt.tol >= 0.0 ? opt.tol : cfg.get_double("run", "tol", 1e-10);
  const int max_iters = cfg.get_int("run", "max_iters", 10000);

  Bracket br;
  if (cfg.has("scenario", "lower") || cfg.has("scenario", "upper")) {
    const double lo = cfg.get_double("scenario", "lower", 0.0);
    const double hi = cfg.get_double("scenario", "upper", 1.0);
    br.lower.assign(gf.graph.size(), lo);
    br.upper.assign(gf.graph.size(), hi);
  } else {
    br = make_logistic_bracket(gf.graph, (spec.bkind == BoundaryKind::None) ? nullptr : p,
                               spec.bkind, spec.reaction, spec.u0);
  }

  MonotoneResult res;
  if (spec.bkind == BoundaryKind::None) {
    DriftField b(gf.graph.size(), 0.0);
    auto blist = cfg.get_doubles("scenario", "drift");
    if (blist.size() == 1) b.assign(gf.graph.size(), blist[0]);
    else if (!blist.empty()) b = blist;
    std::vector<double> c(gf.graph.size(), cfg.get_double("scenario", "c", 0.0));
    res = cauchy_elliptic_monotone(gf.graph, spec.reaction, b, c, br, {tol, max_iters, true});
  } else {
    std::vector<double> data(p->boundary().size(), spec.boundary_value);
    res = elliptic_monotone(gf.graph, *p, spec.bkind, spec.reaction, data, br,
                            {tol, max_iters, true});
  }

  ensure_out_dir(opt.out_dir);
  ojson rep;
  rep["meta"] = meta_json("steady", opt);
  rep["spectrum"] = spectrum_json(gf.graph, p);
  ojson v;
  ojson minimal, maximal;
  for (int x = 0; x < gf.graph.size(); ++x) {
    minimal[gf.graph.id(x)] = format_g17(res.minimal[x]);
    maximal[gf.graph.id(x)] = format_g17(res.maximal[x]);
  }
  v["minimal"] = minimal;
  v["maximal"] = maximal;
  v["iterations"] = res.iterations;
  v["gap"] = res.gap;
  v["residual"] = res.residual;
  v["final_increment"] = res.final_increment;
  v["shift"] = res.shift;
  v["converged"] = res.converged;
  v["unique"] = res.unique;
  v["lower_certified"] = res.lower_certified;
  v["upper_certified"] = res.upper_certified;
  if (spec.bkind == BoundaryKind::None) v["coercivity_margin"] = res.coercivity_margin;
  rep["verdicts"] = v;
  rep["classification"] = nullptr;
  write_text_atomic(out_path(opt, cfg.get_string("output", "json", "report.json")),
                    rep.dump(2) + "\n");

  if (cfg.has("output", "iterates")) {
    // per-iterate dump: one row per iteration, lower then upper blocks
    std::ostringstream csv;
    csv << "iteration,sequence";
    for (const auto& id : gf.graph.ids()) csv << "," << id;
    csv << "\n";
    for (size_t m = 0; m < res.lower_iterates.size(); ++m) {
      csv << m << ",lower";
      for (double x : res.lower_iterates[m]) csv << "," << format_g17(x);
      csv << "\n" << m << ",upper";
      for (double x : res.upper_iterates[m]) csv << "," << format_g17(x);
      csv << "\n";
    }
    write_text_atomic(out_path(opt, cfg.get_string("output", "iterates", "iterates.csv")),
                      csv.str());
  }

  if (!opt.quiet) {
    out << "steady: " << (res.converged ? "converged" : "max_iters exceeded") << " after "
        << res.iterations << " iterations, gap " << format_g17(res.gap) << "\n";
    if (!res.lower_certified || !res.upper_certified)
      out << "warning: bracket end not certified as sub/supersolution\n";
  }
  return res.converged ? 0 : 1;
}

ojson classification_json(const Classification& cl) {
  ojson c;
  c["outcome"] = outcome_name(cl.outcome);
  c["lambda1"] = cl.lambda1;
  c["threshold_margin"] = cl.threshold_margin;
  ojson rho = ojson::array();
  for (double r : cl.admissible_rho) rho.push_back(r);
  c["criterion_2c"] = rho;
  if (!cl.steady_state.empty()) {
    ojson st = ojson::array();
    for (double v : cl.steady_state) st.push_back(format_g17(v));
    c["steady_state"] = st;
  } else {
    c["steady_state"] = nullptr;
  }
  if (cl.outcome == Outcome::ConvergenceToConstant) c["constant_value"] = cl.constant_value;
  ojson ev;
  ev["final_sup"] = cl.final_sup;
  ev["monotone_tail"] = cl.monotone_tail;
  ev["sandwich_ok"] = cl.sandwich_ok;
  ev["steady_residual"] = cl.steady_residual;
  ev["hypothesis_ok"] = cl.hypothesis_ok;
  ev["notes"] = cl.notes;
  ojson trail = ojson::array();
  for (double v : cl.sup_trail) trail.push_back(v);
  ev["sup_trail"] = trail;
  c["evidence"] = ev;
  return c;
}

int cmd_classify(const CommonOpts& opt, std::ostream& out, std::ostream& err) {
  (void)err;
  if (opt.config_path.empty()) throw ParseError("classify: --config is required");
  const auto gf = load_graph_or_demo(opt);
  const auto cfg = Config::load(opt.config_path);
  const DomainPartition* p = gf.partition ? &*gf.partition : nullptr;
  const auto spec = scenario_from_config(cfg, gf.graph, p);

  RunControls rc;
  rc.horizon = spec.horizon;
  rc.dt = spec.dt;
  rc.stride = spec.stride;
  rc.convergence_tol = cfg.get_double("run", "convergence_tol", 1e-6);
  rc.extinction_threshold = cfg.get_double("run", "extinction_threshold", 1e-3);

  Classification cl;
  if (spec.problem == "logistic_dirichlet") {
    if (!p) throw ParseError("logistic_dirichlet needs a partitioned graph");
    cl = classify_logistic_dirichlet(gf.graph, *p, spec.a, spec.b, spec.u0, rc);
  } else if (spec.problem == "logistic_neumann") {
    if (!p) throw ParseError("logistic_neumann needs a partitioned graph");
    cl = classify_logistic_neumann(gf.graph, *p, spec.a, spec.b, spec.u0, rc);
  } else if (spec.problem == "kpp_cauchy") {
    cl = classify_kpp_cauchy(gf.graph, spec.reaction, spec.u0, rc);
  } else if (spec.problem == "allen_cahn_cauchy") {
    const Reaction f = spec.reaction.kind() == Reaction::Kind::AllenCahn
                           ? spec.reaction
                           : Reaction::allen_cahn(spec.alpha);
    cl = classify_allen_cahn(gf.graph, f, spec.u0, rc);
  } else {
    throw ParseError("classify: unknown problem `" + spec.problem + "`");
  }

  ensure_out_dir(opt.out_dir);
  ojson rep;
  rep["meta"] = meta_json("classify", opt);
  rep["spectrum"] = spectrum_json(gf.graph, p);
  rep["verdicts"] = ojson::object();
  rep["classification"] = classification_json(cl);
  write_text_atomic(out_path(opt, cfg.get_string("output", "json", "report.json")),
                    rep.dump(2) + "\n");

  if (!opt.quiet)
    out << "classify: " << outcome_name(cl.outcome)
        << (cl.hypothesis_ok ? "" : " (hypothesis check failed)") << "\n";
  return cl.hypothesis_ok ? 0 : 2;
}

int cmd_demo(const CommonOpts& opt, std::ostream& out, std::ostream& err) {
  (void)err;
  const auto g = demo_graph();
  const auto p = demo_partition(g);
  const auto u0 = demo_initial();
  const GraphFunction u0_interior{u0[0], u0[1], u0[2]};

  RunControls rc_ext;
  rc_ext.horizon = 200.0;
  rc_ext.dt = 1e-3;
  rc_ext.stride = 1000;
  RunControls rc_est;
  rc_est.horizon = 50.0;
  rc_est.dt = 1e-3;
  rc_est.stride = 1000;

  auto run_ext = [&] { return classify_logistic_dirichlet(g, p, 0.1, 1.0, u0_interior, rc_ext); };
  auto run_est = [&] { return classify_logistic_dirichlet(g, p, 1.8, 1.0, u0_interior, rc_est); };

  Classification ext, est;
  if (worker_cap() >= 2) {
    auto fut = std::async(std::launch::async, run_ext);
    est = run_est();
    ext = fut.get();
  } else {
    ext = run_ext();
    est = run_est();
  }

  // the plotted trajectories, re-run at the reporting stride
  Scenario sc_ext{&g, &p, BoundaryKind::Dirichlet, Reaction::logistic(0.1, 1.0), {},
                  u0_interior, rc_ext.horizon, rc_ext.dt, rc_ext.stride};
  Scenario sc_est{&g, &p, BoundaryKind::Dirichlet, Reaction::logistic(1.8, 1.0), {},
                  u0_interior, rc_est.horizon, rc_est.dt, rc_est.stride};
  const auto ts_ext = integrate(sc_ext);
  const auto ts_est = integrate(sc_est);

  bool ok_ext = false, ok_est = false;
  ojson verd_ext = series_verdicts(ts_ext, g, &p, BoundaryKind::Dirichlet,
                                   Reaction::logistic(0.1, 1.0), {}, true, &ok_ext);
  ojson verd_est = series_verdicts(ts_est, g, &p, BoundaryKind::Dirichlet,
                                   Reaction::logistic(1.8, 1.0), {}, true, &ok_est);

  ensure_out_dir(opt.out_dir);
  write_text_atomic(out_path(opt, "demo_extinction.csv"), series_to_csv(ts_ext, g.ids()));
  write_text_atomic(out_path(opt, "demo_establishment.csv"), series_to_csv(ts_est, g.ids()));
  write_text_atomic(out_path(opt, "demo_extinction_plot.dat"), series_to_plot(ts_ext, g.ids()));
  write_text_atomic(out_path(opt, "demo_establishment_plot.dat"),
                    series_to_plot(ts_est, g.ids()));

  ojson rep;
  rep["meta"] = meta_json("demo", opt);
  rep["spectrum"] = spectrum_json(g, &p);
  rep["verdicts"] = {{"extinction_run", verd_ext}, {"establishment_run", verd_est}};
  rep["classification"] = {{"extinction", classification_json(ext)},
                           {"establishment", classification_json(est)}};
  write_text_atomic(out_path(opt, "report.json"), rep.dump(2) + "\n");

  if (!opt.quiet) {
    out << "demo: lambda1 = " << format_g17(ext.lambda1) << "\n";
    out << "demo: a=0.1 -> " << outcome_name(ext.outcome) << ", a=1.8 -> "
        << outcome_name(est.outcome) << "\n";
  }
  const bool ok = ok_ext && ok_est && ext.outcome == Outcome::Extinction &&
                  est.outcome == Outcome::ConvergenceToState;
  return ok ? 0 : 1;
}

int cmd_props(const CommonOpts& opt, std::ostream& out, std::ostream& err) {
  (void)err;
  PropsConfig cfg;
  cfg.seed = opt.seed;
  const auto rep = run_property_suites(cfg);
  for (const auto& e : rep.entries) {
    if (!opt.quiet || e.failures > 0)
      out << (e.failures == 0 ? "[pass] " : "[FAIL] ") << e.name << " (" << e.runs
          << " runs, worst " << format_g17(e.worst) << ")"
          << (e.note.empty() ? "" : " - " + e.note) << "\n";
  }
  if (!opt.quiet)
    out << (rep.ok() ? "props: all suites passed\n" : "props: FAILURES\n");
  return rep.ok() ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"graph reaction-diffusion solver"};
  app.require_subcommand(1);

  CommonOpts opt;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--graph", opt.graph_path, "graph file path");
    sub->add_option("--config", opt.config_path, "run configuration file");
    sub->add_option("--out", opt.out_dir, "output directory");
    sub->add_option("--tol", opt.tol, "tolerance override");
    sub->add_option("--seed", opt.seed, "seed for randomized suites");
    sub->add_flag("--quiet", opt.quiet, "suppress progress output");
  };

  auto* validate_cmd = app.add_subcommand("validate", "check graph and partition axioms");
  auto* eig_cmd = app.add_subcommand("eig", "print the three eigensystems");
  auto* solve_cmd = app.add_subcommand("solve", "run a linear or semilinear trajectory");
  auto* steady_cmd = app.add_subcommand("steady", "monotone iteration to steady states");
  auto* classify_cmd = app.add_subcommand("classify", "long-time behavior classification");
  auto* demo_cmd = app.add_subcommand("demo", "built-in five-vertex threshold demo");
  auto* props_cmd = app.add_subcommand("props", "randomized invariant suites");
  for (auto* sub :
       {validate_cmd, eig_cmd, solve_cmd, steady_cmd, classify_cmd, demo_cmd, props_cmd})
    add_common(sub);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      // --help and friends
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (validate_cmd->parsed()) return cmd_validate(opt, out, err);
    if (eig_cmd->parsed()) return cmd_eig(opt, out, err);
    if (solve_cmd->parsed()) return cmd_solve(opt, out, err);
    if (steady_cmd->parsed()) return cmd_steady(opt, out, err);
    if (classify_cmd->parsed()) return cmd_classify(opt, out, err);
    if (demo_cmd->parsed()) return cmd_demo(opt, out, err);
    if (props_cmd->parsed()) return cmd_props(opt, out, err);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "precondition failed: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace graphpde::cli
