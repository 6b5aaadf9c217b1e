// mixpreserve: synthesize tabular data with structure-preserving mixup,
// solve for EpBeta weight parameters, and evaluate preservation.
//
// Exit codes: 0 success, 1 usage or parse failure, 2 domain infeasibility.

#include <cmath>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "mixpreserve/epbeta_solver.hpp"
#include "mixpreserve/harness.hpp"
#include "mixpreserve/io.hpp"
#include "mixpreserve/stats.hpp"
#include "mixpreserve/synthesis.hpp"

namespace mp = mixpreserve;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2;

// exception signaling a domain-level failure (exit 2) rather than bad input
struct DomainFailure {
  json diagnostic;
};

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
  } else {
    mp::atomic_write_file(out_path, text);
  }
}

json params_to_json(const mp::EpBetaParams& p) {
  return json{{"alpha", p.alpha},     {"beta", p.beta},
              {"eps0", p.eps0},       {"eps1", p.eps1},
              {"u_at_half", p.u_at_half}, {"residual", p.constraint_residual}};
}

mp::EpBetaParams solve_or_fail(double eps0, double eps1, double delta, double tau) {
  try {
    return mp::solve(mp::SolverRequest{eps0, eps1, delta, tau});
  } catch (const mp::NoPreservingParamsError& e) {
    throw DomainFailure{json{{"error", "no_preserving_params"}, {"reason", e.what()}}};
  } catch (const mp::InfeasibleError& e) {
    json d{{"error", "infeasible"}, {"reason", e.what()}, {"delta", e.delta}};
    if (!std::isnan(e.u_min)) {
      d["u_min"] = e.u_min;
      d["u_max"] = e.u_max;
    }
    throw DomainFailure{d};
  }
}

// flags shared by every command that needs a weight law
struct WeightFlags {
  std::string weight_json;
  std::optional<double> eps0, eps1, delta;
  double tau = 0.5;

  void attach(CLI::App* cmd, bool required) {
    cmd->add_option("--weight", weight_json,
                    "weight law as tagged JSON, e.g. '{\"kind\":\"uniform\"}'");
    cmd->add_option("--eps0,--epsilon0", eps0, "EpBeta support extension below 0");
    cmd->add_option("--eps1,--epsilon1", eps1, "EpBeta support extension above 1");
    cmd->add_option("--delta", delta, "conditional-moment gap budget")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--tau", tau, "categorical cut point (default 0.5)");
    required_ = required;
    cmd->callback([this, cmd] { validate(cmd); });
  }

  // resolved law plus the solver output when one was derived
  std::pair<mp::WeightDistribution, std::optional<mp::EpBetaParams>> resolve() const {
    if (!weight_json.empty())
      return {mp::WeightDistribution::from_json(weight_json), std::nullopt};
    const mp::EpBetaParams p = solve_or_fail(*eps0, *eps1, *delta, tau);
    return {mp::WeightDistribution(p.law()), p};
  }

 private:
  bool required_ = true;

  void validate(CLI::App* cmd) const {
    const bool has_solver = eps0 || eps1 || delta;
    if (!weight_json.empty() && has_solver)
      throw CLI::ValidationError(cmd->get_name(),
                                 "give either --weight or --eps0/--eps1/--delta, not both");
    if (weight_json.empty() && has_solver && !(eps0 && eps1 && delta))
      throw CLI::ValidationError(cmd->get_name(),
                                 "solver-derived weights need all of --eps0, --eps1, --delta");
    if (required_ && weight_json.empty() && !has_solver)
      throw CLI::ValidationError(cmd->get_name(),
                                 "a weight law is required: --weight or --eps0/--eps1/--delta");
  }
};

int cmd_solve(double eps0, double eps1, double delta, double tau,
              const std::string& out) {
  const mp::EpBetaParams p = solve_or_fail(eps0, eps1, delta, tau);
  emit(params_to_json(p).dump(2), out);
  std::cerr << "solved EpBeta(alpha=" << p.alpha << ", beta=" << p.beta
            << "; eps0=" << p.eps0 << ", eps1=" << p.eps1 << "), u=" << p.u_at_half
            << "\n";
  return kExitOk;
}

int cmd_table(double delta, double eps_max, double eps_step, const std::string& out) {
  std::vector<std::pair<double, double>> grid;
  const int steps = static_cast<int>(std::llround(eps_max / eps_step));
  for (int i = 0; i <= steps; ++i)
    for (int j = 0; j <= steps; ++j)
      grid.emplace_back(i * eps_step, j * eps_step);
  const auto cells = mp::parameter_table(grid, delta);

  std::string csv = "eps0,eps1,delta,alpha,beta,u_at_half,residual\n";
  std::size_t infeasible = 0;
  for (const auto& c : cells) {
    csv += mp::format_double(c.eps0) + "," + mp::format_double(c.eps1) + "," +
           mp::format_double(c.delta) + ",";
    if (c.params) {
      csv += mp::format_double(c.params->alpha) + "," +
             mp::format_double(c.params->beta) + "," +
             mp::format_double(c.params->u_at_half) + "," +
             mp::format_double(c.params->constraint_residual);
    } else {
      csv += "-,-,-,-";
      ++infeasible;
    }
    csv += "\n";
  }
  emit(csv, out);
  if (!out.empty()) {
    std::cout << json{{"cells", cells.size()},
                      {"infeasible", infeasible},
                      {"output", out}}
                     .dump()
              << "\n";
  }
  std::cerr << "table: " << cells.size() << " cells, " << infeasible
            << " infeasible\n";
  return kExitOk;
}

int cmd_synthesize(const std::string& input, const std::string& schema_path,
                   const WeightFlags& wf, std::size_t m, std::uint64_t seed,
                   const std::string& out) {
  const mp::Schema schema = mp::load_schema(schema_path);
  const mp::Dataset data = mp::load_csv(input, schema);
  if (data.row_count() < 2)
    throw DomainFailure{json{{"error", "too_few_rows"},
                             {"reason", "synthesis needs at least 2 input rows"},
                             {"rows", data.row_count()}}};

  const auto [weight, solved] = wf.resolve();
  mp::MixupConfig cfg;
  cfg.scheme = mp::StandardScheme{weight};
  cfg.tau = wf.tau;
  cfg.m = m;
  cfg.seed = seed;
  const mp::Dataset synthetic = mp::synthesize(data, cfg);
  mp::atomic_write_file(out, mp::write_csv(synthetic));

  json rep{{"input_rows", data.row_count()},
           {"rows_written", synthetic.row_count()},
           {"seed", seed},
           {"tau", wf.tau},
           {"weight", json::parse(weight.to_json())},
           {"output", out}};
  if (solved) rep["solved"] = params_to_json(*solved);
  std::cout << rep.dump(2) << "\n";
  std::cerr << "wrote " << synthetic.row_count() << " synthetic rows to " << out
            << "\n";
  return kExitOk;
}

int cmd_evaluate(const std::string& original, const std::string& synthetic,
                 const std::string& schema_path, const std::string& out_json,
                 const std::string& out_csv) {
  const mp::Schema schema = mp::load_schema(schema_path);
  const mp::Dataset ref = mp::load_csv(original, schema);
  const mp::Dataset syn = mp::load_csv(synthetic, schema);
  mp::BiasReport report;
  try {
    report = mp::relative_bias(mp::describe(ref), mp::describe(syn));
  } catch (const std::invalid_argument& e) {
    throw DomainFailure{json{{"error", "schema_mismatch"}, {"reason", e.what()}}};
  }
  emit(report.to_json(), out_json);
  if (!out_csv.empty()) mp::atomic_write_file(out_csv, report.to_csv());
  double worst = 0.0;
  for (const auto& e : report.entries) worst = std::max(worst, std::fabs(e.bias));
  std::cerr << "evaluated " << report.entries.size()
            << " statistics, max |bias| = " << worst << "\n";
  return kExitOk;
}

int cmd_demo(const std::string& experiment, const WeightFlags& wf, std::size_t n,
             std::size_t m, std::uint64_t seed, const std::string& out) {
  const auto [weight, solved] = wf.resolve();
  json rep{{"experiment", experiment}, {"n", n}, {"seed", seed},
           {"weight", json::parse(weight.to_json())}};
  if (solved) rep["solved"] = params_to_json(*solved);
  if (experiment == "gaussian") {
    const mp::BiasReport bias = mp::gaussian_demo(n, m, weight, seed);
    rep["m"] = m;
    rep["bias"] = json::parse(bias.to_json());
    double var_bias = 0.0;
    int count = 0;
    for (const auto& e : bias.entries)
      if (e.statistic == "variance") {
        var_bias += e.bias;
        ++count;
      }
    std::cerr << "gaussian demo: mean variance bias = " << var_bias / count << "\n";
  } else {
    const mp::InferenceResult res = mp::quadratic_experiment(n, weight, seed);
    rep["result"] = json{{"estimate", res.estimate},
                         {"ci_low", res.ci_low},
                         {"ci_high", res.ci_high},
                         {"reference", res.reference},
                         {"reference_in_ci", res.reference_in_ci}};
    std::cerr << "quadratic demo: estimate " << res.estimate << " vs reference "
              << res.reference << (res.reference_in_ci ? " (inside CI)" : " (outside CI)")
              << "\n";
  }
  emit(rep.dump(2), out);
  return kExitOk;
}

int cmd_drift(const std::string& input, const std::string& schema_path,
              const WeightFlags& wf, std::size_t generations, std::size_t n,
              std::size_t m, std::uint64_t seed, const std::string& out_json,
              const std::string& out_csv) {
  mp::Dataset data;
  if (!input.empty()) {
    data = mp::load_csv(input, mp::load_schema(schema_path));
  } else {
    // built-in unit-variance Gaussian column
    mp::Schema schema({{"x", mp::ColumnKind::kContinuous}});
    data = mp::Dataset(schema);
    data.reserve(n);
    mp::RngStream rng(seed, 0xD41F7ULL);
    for (std::size_t i = 0; i < n; ++i) data.append_row({rng.normal()});
  }
  if (data.row_count() < 2)
    throw DomainFailure{json{{"error", "too_few_rows"},
                             {"reason", "drift needs at least 2 input rows"}}};

  const auto [weight, solved] = wf.resolve();
  mp::MixupConfig cfg;
  cfg.scheme = mp::StandardScheme{weight};
  cfg.tau = wf.tau;
  cfg.m = m;
  const mp::DriftTrace trace = mp::drift_study(data, cfg, generations, seed);

  json rep{{"generations", generations},
           {"m", m},
           {"seed", seed},
           {"weight", json::parse(weight.to_json())},
           {"trace", json::parse(trace.to_json())}};
  if (solved) rep["solved"] = params_to_json(*solved);
  emit(rep.dump(2), out_json);
  if (!out_csv.empty()) mp::atomic_write_file(out_csv, trace.to_csv());
  const auto& last = trace.generations.back();
  const auto& first = trace.generations.front();
  std::cerr << "drift: generation " << last.generation << " variance ratio "
            << (first.variances[0] > 0 ? last.variances[0] / first.variances[0] : 0.0)
            << " (predicted " << last.predicted_scales[0] << ")\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"structure-preserving mixup synthesis toolkit"};
  app.require_subcommand(1);

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "solve for EpBeta weight parameters");
  double s_eps0 = 0.0, s_eps1 = 0.0, s_delta = 0.0, s_tau = 0.5;
  std::string s_out;
  solve_cmd->add_option("--eps0,--epsilon0", s_eps0, "support extension below 0")
      ->required()
      ->check(CLI::NonNegativeNumber);
  solve_cmd->add_option("--eps1,--epsilon1", s_eps1, "support extension above 1")
      ->required()
      ->check(CLI::NonNegativeNumber);
  solve_cmd->add_option("--delta", s_delta, "conditional-moment gap budget")
      ->required()
      ->check(CLI::Range(0.0, 1.0));
  solve_cmd->add_option("--tau", s_tau, "cut point (default 0.5)");
  solve_cmd->add_option("--out", s_out, "write the JSON here instead of stdout");

  // table
  auto* table_cmd = app.add_subcommand("table", "parameter table over an epsilon grid");
  double t_delta = 0.0, t_eps_max = 0.9, t_eps_step = 0.1;
  std::string t_out;
  table_cmd->add_option("--delta", t_delta, "gap budget")->required()
      ->check(CLI::Range(0.0, 1.0));
  table_cmd->add_option("--eps-max", t_eps_max, "grid upper bound (default 0.9)");
  table_cmd->add_option("--eps-step", t_eps_step, "grid step (default 0.1)")
      ->check(CLI::PositiveNumber);
  table_cmd->add_option("--out", t_out, "write the CSV here instead of stdout");

  // synthesize
  auto* syn_cmd = app.add_subcommand("synthesize", "generate synthetic rows");
  std::string sy_input, sy_schema, sy_out;
  std::size_t sy_m = 0;
  std::uint64_t sy_seed = 0;
  WeightFlags sy_weight;
  syn_cmd->add_option("--input", sy_input, "original data CSV")->required();
  syn_cmd->add_option("--schema", sy_schema, "schema JSON")->required();
  syn_cmd->add_option("--m", sy_m, "number of synthetic rows")->required()
      ->check(CLI::PositiveNumber);
  syn_cmd->add_option("--seed", sy_seed, "RNG seed (default 0)");
  syn_cmd->add_option("--out", sy_out, "output CSV path")->required();
  sy_weight.attach(syn_cmd, /*required=*/true);

  // evaluate
  auto* eval_cmd = app.add_subcommand("evaluate", "relative bias of synthetic vs original");
  std::string ev_orig, ev_syn, ev_schema, ev_out_json, ev_out_csv;
  eval_cmd->add_option("--original", ev_orig, "original data CSV")->required();
  eval_cmd->add_option("--synthetic", ev_syn, "synthetic data CSV")->required();
  eval_cmd->add_option("--schema", ev_schema, "schema JSON")->required();
  eval_cmd->add_option("--out", ev_out_json, "bias report JSON path");
  eval_cmd->add_option("--out-csv", ev_out_csv, "bias report CSV path");

  // demo
  auto* demo_cmd = app.add_subcommand("demo", "desk-scale experiments");
  std::string d_experiment = "gaussian", d_out;
  std::size_t d_n = 1000, d_m = 100000;
  std::uint64_t d_seed = 0;
  WeightFlags d_weight;
  demo_cmd->add_option("--experiment", d_experiment, "gaussian | quadratic")
      ->check(CLI::IsMember({"gaussian", "quadratic"}));
  demo_cmd->add_option("--n", d_n, "original sample size (default 1000)");
  demo_cmd->add_option("--m", d_m, "synthetic rows for the gaussian demo");
  demo_cmd->add_option("--seed", d_seed, "RNG seed (default 0)");
  demo_cmd->add_option("--out", d_out, "result JSON path");
  d_weight.attach(demo_cmd, /*required=*/true);

  // drift
  auto* drift_cmd = app.add_subcommand("drift", "repeated-resynthesis drift study");
  std::string dr_input, dr_schema, dr_out_json, dr_out_csv;
  std::size_t dr_gens = 0, dr_n = 50000, dr_m = 50000;
  std::uint64_t dr_seed = 0;
  WeightFlags dr_weight;
  drift_cmd->add_option("--input", dr_input, "original data CSV (default: unit Gaussian)");
  drift_cmd->add_option("--schema", dr_schema, "schema JSON for --input");
  drift_cmd->add_option("--generations", dr_gens, "resynthesis steps")->required()
      ->check(CLI::PositiveNumber);
  drift_cmd->add_option("--n", dr_n, "rows of the built-in Gaussian (default 50000)");
  drift_cmd->add_option("--m", dr_m, "rows per generation (default 50000)");
  drift_cmd->add_option("--seed", dr_seed, "RNG seed (default 0)");
  drift_cmd->add_option("--out", dr_out_json, "trace JSON path");
  drift_cmd->add_option("--out-csv", dr_out_csv, "tidy trace CSV path");
  dr_weight.attach(drift_cmd, /*required=*/true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(s_eps0, s_eps1, s_delta, s_tau, s_out);
    if (table_cmd->parsed()) return cmd_table(t_delta, t_eps_max, t_eps_step, t_out);
    if (syn_cmd->parsed())
      return cmd_synthesize(sy_input, sy_schema, sy_weight, sy_m, sy_seed, sy_out);
    if (eval_cmd->parsed())
      return cmd_evaluate(ev_orig, ev_syn, ev_schema, ev_out_json, ev_out_csv);
    if (demo_cmd->parsed())
      return cmd_demo(d_experiment, d_weight, d_n, d_m, d_seed, d_out);
    if (drift_cmd->parsed())
      return cmd_drift(dr_input, dr_schema, dr_weight, dr_gens, dr_n, dr_m, dr_seed,
                       dr_out_json, dr_out_csv);
  } catch (const DomainFailure& f) {
    std::cout << f.diagnostic.dump(2) << "\n";
    std::cerr << "error: " << f.diagnostic.value("reason", "infeasible") << "\n";
    return kExitInfeasible;
  } catch (const mp::CsvError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
