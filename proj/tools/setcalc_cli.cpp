#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "setcalc/convergence.hpp"
#include "setcalc/integration.hpp"
#include "setcalc/json_io.hpp"
#include "setcalc/lagrange.hpp"
#include "setcalc/optimization.hpp"
#include "setcalc/symmetric_decomp.hpp"

using namespace setcalc;
using nlohmann::json;

namespace {

struct GlobalOpts {
  double tolerance = 0.0;  // 0: keep each module's default
  unsigned seed = 1;
  std::string format;  // per-subcommand default when empty
  std::string output;  // stdout when empty
};

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

/// Inline JSON, or the contents of a file when the argument starts with '@'.
json load_json_arg(const std::string& arg) {
  if (!arg.empty() && arg.front() == '@') {
    std::ifstream in(arg.substr(1), std::ios::binary);
    if (!in) throw Error("cannot open " + arg.substr(1));
    std::ostringstream text;
    text << in.rdbuf();
    return parse_json(text.str());
  }
  return parse_json(arg);
}

void emit(const GlobalOpts& g, const std::string& text) {
  if (g.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(g.output, std::ios::binary);
  if (!out) throw Error("cannot write " + g.output);
  out << text;
}

int finish_json(const GlobalOpts& g, json j, int code) {
  j["seed"] = g.seed;
  emit(g, j.dump(2) + "\n");
  return code;
}

SetFunction<Subset> make_named_function(const std::string& name, const UniversePtr& u,
                                        const MeasureSpace<Subset>& sp,
                                        const std::vector<double>& values,
                                        const std::vector<double>& table) {
  if (name == "measure") return sf_measure(sp);
  if (name == "measure_squared") return sf_measure_squared(sp);
  if (name == "linear_sum") {
    if (values.size() != u->size()) {
      throw Error("linear_sum needs --values with one entry per element");
    }
    return sf_linear_sum(values);
  }
  if (name == "table") return sf_custom_table(u, table);
  throw Error("unknown function \"" + name +
              "\"; choose measure, measure_squared, linear_sum, or table");
}

MeasureMode parse_mode(const std::string& name) {
  if (name == "plain" || name == "eq2") return MeasureMode::Plain;
  if (name == "weighted" || name == "eq3") return MeasureMode::Weighted;
  throw Error("unknown mode \"" + name + "\"; choose plain or weighted");
}

std::vector<MonotonePiece> parse_pieces(const std::string& text) {
  std::vector<MonotonePiece> pieces;
  std::istringstream in(text);
  std::string chunk;
  while (std::getline(in, chunk, ',')) {
    const auto colon = chunk.find(':');
    if (colon == std::string::npos) {
      throw Error("monotone pieces look like a:b[,b:c...]");
    }
    pieces.push_back({std::stod(chunk.substr(0, colon)), std::stod(chunk.substr(colon + 1))});
  }
  return pieces;
}

int run_example1(const GlobalOpts& g, std::vector<double> values,
                 const std::string& phi_text) {
  const int n = static_cast<int>(values.size());
  const Expr phi = Expr::parse(phi_text);
  const auto fns = enumerate_compositions(phi, values, n);
  const auto u = make_unit_universe(n);

  json out;
  out["phi"] = phi_text;
  out["values"] = values;
  out["count"] = fns.size();
  out["functions"] = json::array();
  for (const auto& fn : fns) {
    json rows = json::array();
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      Subset s(u, mask);
      rows.push_back({{"set", subset_to_json(s)}, {"value", fn.eval(s)}});
    }
    out["functions"].push_back({{"name", fn.name}, {"values", rows}});
  }
  return finish_json(g, out, 0);
}

int run_pareto(const GlobalOpts& g, double a, double b, const std::vector<double>& lambdas,
               double h) {
  const auto fam = pareto_family(a, b, lambdas, h);
  if (g.format == "json") {
    json out;
    out["a"] = a;
    out["b"] = b;
    out["h"] = h;
    out["points"] = json::array();
    for (const auto& p : fam.points) {
      out["points"].push_back({{"lambda", p.lambda},
                               {"slope", p.slope},
                               {"f1", p.f1_value},
                               {"f2", p.f2_value}});
    }
    return finish_json(g, out, 0);
  }
  std::ostringstream csv;
  csv << "# seed=" << g.seed << "\n";
  csv << "lambda,slope,f1,f2\n";
  for (const auto& p : fam.points) {
    csv << fmt(p.lambda) << ',' << fmt(p.slope) << ',' << fmt(p.f1_value) << ','
        << fmt(p.f2_value) << "\n";
  }
  emit(g, csv.str());
  return 0;
}

int run_partition(const GlobalOpts& g, const std::vector<std::string>& f_texts,
                  const std::string& grid_kind, double h, double seg_a, double seg_b,
                  int cells) {
  DomainPtr grid;
  if (grid_kind == "quarter_disk") {
    grid = GridDomain::quarter_disk(h);
  } else if (grid_kind == "segment") {
    grid = GridDomain::segment(seg_a, seg_b, cells);
  } else {
    throw Error("unknown grid \"" + grid_kind + "\"; choose quarter_disk or segment");
  }

  std::vector<std::function<double(const GridCell&)>> f;
  for (const auto& text : f_texts) {
    Expr e = Expr::parse(text);
    for (const auto& v : e.variables()) {
      if (v != "x1" && v != "x2") {
        throw Error("partition integrands use variables x1 and x2 only");
      }
    }
    f.push_back([e](const GridCell& c) {
      return e.eval({{"x1", c.x1}, {"x2", c.x2}});
    });
  }

  const auto res = partition_argmin(f, grid);
  json out;
  out["objective"] = res.objective;
  out["cells"] = grid->size();
  json counts = json::array(), areas = json::array();
  for (const auto& part : res.parts) {
    counts.push_back(part.count());
    areas.push_back(part.area());
  }
  out["counts"] = counts;
  out["areas"] = areas;
  out["assignment"] = res.assignment;
  return finish_json(g, out, 0);
}

int run_decompose(const GlobalOpts& g, const std::string& f_text,
                  const std::vector<double>& table, const std::vector<double>& values,
                  bool include_unit) {
  const int n = static_cast<int>(values.size());
  const auto u = make_unit_universe(n);

  SetFunction<Subset> f;
  if (!table.empty()) {
    f = sf_custom_table(u, table);
  } else {
    Expr e = Expr::parse(f_text);
    for (const auto& v : e.variables()) {
      bool ok = v.size() >= 2 && v[0] == 's';
      int idx = 0;
      if (ok) {
        try {
          idx = std::stoi(v.substr(1));
        } catch (...) {
          ok = false;
        }
      }
      if (!ok || idx < 1 || idx > n) {
        throw Error("decompose expressions use variables s1..s" + std::to_string(n));
      }
    }
    f.name = f_text;
    f.eval = [e, values](const Subset& s) {
      const auto sigma = elementary_symmetric_all(s, values);
      std::unordered_map<std::string, double> vars;
      for (std::size_t k = 1; k < sigma.size(); ++k) {
        vars["s" + std::to_string(k)] = sigma[k];
      }
      return e.eval(vars);
    };
  }

  const auto res = decompose(f, u, values, include_unit);
  json out;
  out["coefficients"] = res.coefficients;
  out["s_squared"] = res.s_squared;
  out["condition"] = res.condition;
  out["flagged_min_norm"] = res.flagged_min_norm;
  out["include_unit"] = res.include_unit;
  return finish_json(g, out, 0);
}

int run_integrate(const GlobalOpts& g, const std::string& set_arg, const std::string& f_text,
                  int levels, const std::string& mode_name, const std::string& config_arg,
                  const std::string& monotone_arg) {
  const HybridSet a = hybrid_from_json(load_json_arg(set_arg));
  const MeasureConfig cfg =
      config_arg.empty() ? MeasureConfig{} : config_from_json(load_json_arg(config_arg));
  const MeasureMode mode = parse_mode(mode_name);
  const auto pieces = monotone_arg.empty() ? std::vector<MonotonePiece>{}
                                           : parse_pieces(monotone_arg);
  const Integrand f = integrand_from_expr(Expr::parse(f_text), pieces);
  const double tol = g.tolerance > 0.0 ? g.tolerance : 1e-6;

  const auto res = integrate_scheme(f, a, cfg, mode, levels, tol);
  json out;
  out["lower"] = res.lower;
  out["upper"] = res.upper;
  out["J"] = res.j;
  out["converged"] = res.converged;
  out["levels"] = res.levels;
  out["alpha"] = res.alpha;
  out["beta"] = res.beta;
  out["grid_fallback"] = res.grid_fallback;
  out["partition_defect"] = res.partition_defect;
  return finish_json(g, out, res.converged ? 0 : 2);
}

int run_limits(const GlobalOpts& g, const std::string& universe_arg, const std::string& kind,
               const std::string& set_a_arg, const std::string& set_b_arg, int switch_index,
               int horizon, double eps) {
  const auto u = universe_from_json(load_json_arg(universe_arg));
  const auto sp = finite_space();
  const Subset sa = subset_from_json(load_json_arg(set_a_arg), u);

  SetSequence<Subset> seq = [&] {
    if (kind == "constant") return constant_sequence(sa, horizon);
    if (set_b_arg.empty()) {
      throw Error("sequence kind \"" + kind + "\" needs --set-b");
    }
    const Subset sb = subset_from_json(load_json_arg(set_b_arg), u);
    if (kind == "alternating") return alternating_sequence(sa, sb, horizon);
    if (kind == "eventually_constant") {
      return eventually_constant_sequence(sa, sb, switch_index, horizon);
    }
    throw Error("unknown kind \"" + kind +
                "\"; choose constant, alternating, or eventually_constant");
  }();

  const auto borel = borel_limits(seq, sp);
  const auto metric = metric_limit(seq, borel.upper, eps, sp);

  json out;
  out["lower"] = subset_to_json(borel.lower);
  out["upper"] = subset_to_json(borel.upper);
  out["stabilized"] = borel.stabilized;
  out["limits_equal"] = borel.limits_equal;
  out["metric"] = {{"verdict", to_string(metric.verdict)},
                   {"n_epsilon", metric.n_epsilon},
                   {"candidate", subset_to_json(borel.upper)}};
  const bool inconclusive =
      !borel.stabilized || metric.verdict == Verdict::Inconclusive;
  return finish_json(g, out, inconclusive ? 2 : 0);
}

int run_derivative(const GlobalOpts& g, const std::string& universe_arg,
                   const std::string& fname, const std::vector<double>& values,
                   const std::vector<double>& table, const std::string& at_arg,
                   const std::string& schedule_arg, int horizon) {
  const auto u = universe_from_json(load_json_arg(universe_arg));
  const auto sp = finite_space();
  const auto f = make_named_function(fname, u, sp, values, table);
  const Subset at = subset_from_json(load_json_arg(at_arg), u);

  const json sched = load_json_arg(schedule_arg);
  if (!sched.is_array() || sched.empty()) {
    throw Error("--schedule is a JSON array of subsets");
  }
  std::vector<Subset> steps;
  for (const json& el : sched) steps.push_back(subset_from_json(el, u));
  if (horizon <= 0) horizon = std::max<int>(16, static_cast<int>(steps.size()));

  // The final entry repeats out to the horizon so short schedules still
  // provide a stabilization window.
  SetSequence<Subset> seq{
      [steps](int n) {
        const std::size_t i = std::min<std::size_t>(n - 1, steps.size() - 1);
        return steps[i];
      },
      horizon};

  const double exist_tol = g.tolerance > 0.0 ? g.tolerance : 1e-8;
  const auto est = derivative_along(f, sp, at, seq, exist_tol);

  json out;
  out["quotients"] = est.quotients;
  out["skipped"] = est.skipped;
  out["lower"] = est.lower;
  out["upper"] = est.upper;
  out["stabilized"] = est.stabilized;
  out["value"] = est.value ? json(*est.value) : json(nullptr);
  return finish_json(g, out, est.value ? 0 : 2);
}

int run_gamma(const GlobalOpts& g, const std::string& universe_arg, const std::string& fname,
              const std::vector<double>& values, const std::vector<double>& table,
              int samples, int max_exhaustive) {
  const auto u = universe_from_json(load_json_arg(universe_arg));
  const auto sp = finite_space();
  const auto f = make_named_function(fname, u, sp, values, table);

  GammaSampling sampling;
  sampling.samples = samples;
  sampling.max_exhaustive = max_exhaustive;
  sampling.seed = g.seed;
  const auto curve = build_gamma(f, sp, u, sampling);

  if (g.format == "json") {
    json out;
    out["multivalued"] = !curve.single_valued;
    out["exhaustive"] = curve.exhaustive;
    out["points"] = json::array();
    for (const auto& [x, y] : curve.points) out["points"].push_back({x, y});
    out["witnesses"] = json::array();
    for (const auto& w : curve.witnesses) {
      out["witnesses"].push_back({{"x", w.x},
                                  {"y1", w.y1},
                                  {"y2", w.y2},
                                  {"first", subset_to_json(w.first)},
                                  {"second", subset_to_json(w.second)}});
    }
    return finish_json(g, out, 0);
  }

  std::ostringstream csv;
  csv << "# seed=" << g.seed << "\n";
  csv << "# multivalued=" << (curve.single_valued ? 0 : 1) << "\n";
  csv << "x,y\n";
  for (const auto& [x, y] : curve.points) csv << fmt(x) << ',' << fmt(y) << "\n";
  emit(g, csv.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical calculus of set functions"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--tolerance", g.tolerance, "override module tolerances (0 = defaults)");
  app.add_option("--seed", g.seed, "random seed, echoed in every output");
  app.add_option("--format", g.format, "output format: json or csv");
  app.add_option("--output", g.output, "write to a file instead of stdout");

  auto* example1 = app.add_subcommand("example1", "composition suite for phi(t1,t2)");
  std::vector<double> e1_values = {1.0, 2.0, 3.0};
  std::string e1_phi = "t1^2 + t2^3";
  example1->add_option("--values", e1_values, "element values x1..xn")->delimiter(',');
  example1->add_option("--phi", e1_phi, "expression over t1..tm");

  auto* pareto = app.add_subcommand("pareto", "trade-off curve between two sector goals");
  pareto->set_help_flag("--help", "print help");  // frees -h for the resolution flag
  double p_a = 1.0, p_b = 1.0, p_h = 0.01;
  std::vector<double> p_lambdas;
  pareto->add_option("--a", p_a, "gain coefficient, must be positive");
  pareto->add_option("--b", p_b, "loss coefficient, must be positive");
  pareto->add_option("--lambdas", p_lambdas, "weights, each >= 1/a")
      ->delimiter(',')
      ->required();
  pareto->add_option("--h", p_h, "grid resolution");

  auto* partition = app.add_subcommand("partition", "three-way argmin partition of a grid");
  partition->set_help_flag("--help", "print help");
  std::vector<std::string> pt_f(3);
  std::string pt_grid = "quarter_disk";
  double pt_h = 0.01, pt_a = 0.0, pt_b = 1.0;
  int pt_cells = 100;
  partition->add_option("--f1", pt_f[0], "integrand for slot 1 (vars x1, x2)")->required();
  partition->add_option("--f2", pt_f[1], "integrand for slot 2")->required();
  partition->add_option("--f3", pt_f[2], "integrand for slot 3")->required();
  partition->add_option("--grid", pt_grid, "quarter_disk or segment");
  partition->add_option("--h", pt_h, "resolution for quarter_disk");
  partition->add_option("--grid-a", pt_a, "segment start");
  partition->add_option("--grid-b", pt_b, "segment end");
  partition->add_option("--cells", pt_cells, "segment cell count");

  auto* decompose = app.add_subcommand("decompose", "least-squares fit over sigma_1..sigma_n");
  std::string d_f;
  std::vector<double> d_table, d_values;
  bool d_unit = false;
  decompose->add_option("--f", d_f, "expression over s1..sn");
  decompose->add_option("--table", d_table, "2^n function values by subset mask")
      ->delimiter(',');
  decompose->add_option("--values", d_values, "element values x1..xn")
      ->delimiter(',')
      ->required();
  decompose->add_flag("--include-unit", d_unit, "add the constant basis function");

  auto* integrate = app.add_subcommand("integrate", "level-scheme integral over a hybrid set");
  std::string i_set, i_f, i_mode = "plain", i_config, i_monotone;
  int i_levels = 1000;
  integrate->add_option("--set", i_set, "hybrid set JSON (or @file)")->required();
  integrate->add_option("--f", i_f, "integrand expression in x")->required();
  integrate->add_option("--levels", i_levels, "number of levels");
  integrate->add_option("--mode", i_mode, "plain or weighted (aliases eq2, eq3)");
  integrate->add_option("--config", i_config, "measure config JSON (or @file)");
  integrate->add_option("--monotone", i_monotone, "monotone pieces a:b[,b:c...]");

  auto* limits = app.add_subcommand("limits", "lower/upper limits and metric verdict");
  std::string l_universe, l_kind = "alternating", l_a, l_b;
  int l_switch = 8, l_horizon = 64;
  double l_eps = 1e-9;
  limits->add_option("--universe", l_universe, "universe JSON (or @file)")->required();
  limits->add_option("--kind", l_kind, "constant, alternating, or eventually_constant");
  limits->add_option("--set-a", l_a, "subset JSON")->required();
  limits->add_option("--set-b", l_b, "subset JSON");
  limits->add_option("--switch", l_switch, "switch index for eventually_constant");
  limits->add_option("--horizon", l_horizon, "sequence horizon");
  limits->add_option("--eps", l_eps, "metric tolerance");

  auto* derivative = app.add_subcommand("derivative", "set derivative along a schedule");
  std::string dv_universe, dv_f = "measure", dv_at, dv_schedule;
  std::vector<double> dv_values, dv_table;
  int dv_horizon = 0;
  derivative->add_option("--universe", dv_universe, "universe JSON (or @file)")->required();
  derivative->add_option("--function", dv_f,
                         "measure, measure_squared, linear_sum, or table");
  derivative->add_option("--values", dv_values, "values for linear_sum")->delimiter(',');
  derivative->add_option("--table", dv_table, "2^n values for table")->delimiter(',');
  derivative->add_option("--at", dv_at, "subset JSON for the base set")->required();
  derivative->add_option("--schedule", dv_schedule, "JSON array of perturbation subsets")
      ->required();
  derivative->add_option("--horizon", dv_horizon, "sequence horizon (0 = automatic)");

  auto* gamma = app.add_subcommand("gamma", "curve of (m(A), F(A)) over subsets");
  std::string gm_universe, gm_f = "measure";
  std::vector<double> gm_values, gm_table;
  int gm_samples = 4096, gm_exhaustive = 16;
  gamma->add_option("--universe", gm_universe, "universe JSON (or @file)")->required();
  gamma->add_option("--function", gm_f, "measure, measure_squared, linear_sum, or table");
  gamma->add_option("--values", gm_values, "values for linear_sum")->delimiter(',');
  gamma->add_option("--table", gm_table, "2^n values for table")->delimiter(',');
  gamma->add_option("--samples", gm_samples, "sample count beyond the exhaustive cap");
  gamma->add_option("--max-exhaustive", gm_exhaustive, "largest universe enumerated fully");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the usage message; the exit-code contract is 1
    return 1;
  }

  try {
    if (app.got_subcommand(example1)) return run_example1(g, e1_values, e1_phi);
    if (app.got_subcommand(pareto)) return run_pareto(g, p_a, p_b, p_lambdas, p_h);
    if (app.got_subcommand(partition)) {
      return run_partition(g, pt_f, pt_grid, pt_h, pt_a, pt_b, pt_cells);
    }
    if (app.got_subcommand(decompose)) {
      return run_decompose(g, d_f, d_table, d_values, d_unit);
    }
    if (app.got_subcommand(integrate)) {
      return run_integrate(g, i_set, i_f, i_levels, i_mode, i_config, i_monotone);
    }
    if (app.got_subcommand(limits)) {
      return run_limits(g, l_universe, l_kind, l_a, l_b, l_switch, l_horizon, l_eps);
    }
    if (app.got_subcommand(derivative)) {
      return run_derivative(g, dv_universe, dv_f, dv_values, dv_table, dv_at, dv_schedule,
                            dv_horizon);
    }
    if (app.got_subcommand(gamma)) {
      return run_gamma(g, gm_universe, gm_f, gm_values, gm_table, gm_samples,
                       gm_exhaustive);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
