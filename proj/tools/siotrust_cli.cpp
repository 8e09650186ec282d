#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "siotrust/config.hpp"
#include "siotrust/evaluation.hpp"
#include "siotrust/factorization.hpp"
#include "siotrust/graph.hpp"
#include "siotrust/simulation.hpp"
#include "siotrust/social_net.hpp"
#include "siotrust/trust_pattern.hpp"

namespace {

using namespace siotrust;

using Settings = std::vector<std::pair<std::string, std::string>>;

void add_setting(CLI::App* cmd, Settings& flags, const std::string& flag,
                 const std::string& key, const std::string& desc,
                 bool required = false) {
  auto* opt = cmd->add_option_function<std::string>(
      flag,
      [&flags, key](const std::string& v) { flags.emplace_back(key, v); },
      desc);
  if (required) opt->required();
}

void add_bool_setting(CLI::App* cmd, Settings& flags, const std::string& flag,
                      const std::string& key, const std::string& desc) {
  cmd->add_flag_function(
      flag, [&flags, key](std::int64_t) { flags.emplace_back(key, "1"); },
      desc);
}

void add_model_settings(CLI::App* cmd, Settings& flags) {
  add_setting(cmd, flags, "--latent-dim,-L", "latent_dim",
              "latent feature count");
  add_setting(cmd, flags, "--alpha", "alpha", "own-factor weight in [0,1]");
  add_setting(cmd, flags, "--beta", "beta",
              "similarity/centrality blend in [0,1]");
  add_setting(cmd, flags, "--lambda-s", "lambda_s",
              "trustor-factor regularization");
  add_setting(cmd, flags, "--lambda-r", "lambda_r",
              "trustee-factor regularization");
  add_setting(cmd, flags, "--learning-rate", "learning_rate",
              "SGD step size");
  add_setting(cmd, flags, "--epochs", "epochs", "training epochs");
  add_setting(cmd, flags, "--init-scale", "init_scale",
              "factor initialization sigma");
  add_setting(cmd, flags, "--similarity", "similarity",
              "hellinger|bayesian|connection");
  add_setting(cmd, flags, "--centrality", "centrality", "degree|blc|none");
  add_setting(cmd, flags, "--bayesian-delta", "bayesian_delta",
              "chance-correlation margin");
  add_bool_setting(cmd, flags, "--binary-gamma", "binary_gamma",
                   "use the binary trust baseline (Gamma = 1)");
  add_setting(cmd, flags, "--seed", "seed", "RNG seed");
}

void add_social_settings(CLI::App* cmd, Settings& flags) {
  add_setting(cmd, flags, "--threshold", "threshold",
              "absolute friendship distance cut in (0,1]");
  add_setting(cmd, flags, "--threshold-percentile", "threshold_percentile",
              "percentile of pairwise distances used as the cut");
  add_setting(cmd, flags, "--hellinger-mode", "hellinger_mode",
              "literal|canonical");
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write output file: " + path);
  return out;
}

ExperimentConfig resolve_config(const std::string& config_path,
                                const Settings& flags) {
  ExperimentConfig cfg;
  if (!config_path.empty())
    for (const auto& [key, value] : read_key_values_file(config_path))
      cfg.apply(key, value);
  for (const auto& [key, value] : flags) cfg.apply(key, value);
  return cfg;
}

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

SocialBuildResult build_social(const TrustBipartiteGraph& g,
                               const ExperimentConfig& cfg) {
  if (cfg.threshold > 0.0)
    return build_social_network(g, cfg.threshold, cfg.mode);
  return build_social_network_percentile(g, cfg.threshold_percentile,
                                         cfg.mode);
}

TrustPatternMatrix build_gamma(const TrustBipartiteGraph& g,
                               const SocialBuildResult& social,
                               const ExperimentConfig& cfg) {
  if (cfg.binary_gamma) return binary_trust_pattern(social.network);
  TrustPatternOptions tp;
  tp.similarity = cfg.similarity;
  tp.centrality = cfg.centrality;
  tp.beta = cfg.beta;
  tp.bayesian_delta = cfg.bayesian_delta;
  return trust_pattern(g, social.network, social.distances, tp);
}

void run_ingest(const ExperimentConfig& cfg, const std::string& input,
                const std::string& output) {
  TrustBipartiteGraph g = read_ratings_tsv_file(input);
  const double n = static_cast<double>(g.trustor_count());
  const double m = static_cast<double>(g.trustee_count());
  const double z = static_cast<double>(g.edge_count());
  std::cout << "trustors=" << g.trustor_count()
            << " trustees=" << g.trustee_count()
            << " ratings=" << g.edge_count()
            << " density_percent=" << num(100.0 * z / (n * m))
            << " mean_ratings_per_trustor=" << num(z / n) << '\n';
  if (!output.empty()) {
    auto out = open_output(output);
    out << manifest_line(cfg, cfg.train.seed) << '\n';
    write_ratings_tsv(g, out);
  }
}

void run_social_net(const ExperimentConfig& cfg, const std::string& input,
                    const std::string& output,
                    const std::string& distances_out) {
  TrustBipartiteGraph g = read_ratings_tsv_file(input);
  SocialBuildResult social = build_social(g, cfg);
  std::cout << "trustors=" << social.network.size()
            << " threshold=" << num(social.network.threshold())
            << " friendship_edges=" << social.network.edge_count() << '\n';
  if (!output.empty()) {
    auto out = open_output(output);
    out << manifest_line(cfg, cfg.train.seed) << '\n' << "i,j\n";
    for (std::size_t i = 0; i < social.network.size(); ++i)
      for (std::size_t j : social.network.friends(i))
        if (i < j) out << i << ',' << j << '\n';
  }
  if (!distances_out.empty()) {
    auto out = open_output(distances_out);
    out << manifest_line(cfg, cfg.train.seed) << '\n' << "i,j,distance\n";
    for (std::size_t i = 0; i + 1 < social.distances.size(); ++i)
      for (std::size_t j = i + 1; j < social.distances.size(); ++j)
        if (auto d = social.distances.distance(i, j))
          out << i << ',' << j << ',' << num(*d) << '\n';
  }
}

void run_train(const ExperimentConfig& cfg, const std::string& input,
               const std::string& output) {
  TrustBipartiteGraph g = read_ratings_tsv_file(input);
  SocialBuildResult social = build_social(g, cfg);
  TrustPatternMatrix gamma = build_gamma(g, social, cfg);
  LatentFactors factors = sgd_train(g, gamma, cfg.train);
  std::cout << "trustors=" << g.trustor_count()
            << " trustees=" << g.trustee_count()
            << " ratings=" << g.edge_count() << " epochs=" << cfg.train.epochs
            << " final_loss="
            << num(factors.loss_history().empty()
                       ? 0.0
                       : factors.loss_history().back())
            << '\n';
  auto out = open_output(output);
  out << manifest_line(cfg, cfg.train.seed) << '\n';
  save_factors(factors, out);
}

void run_evaluate(const ExperimentConfig& cfg, const std::string& input,
                  const std::string& output) {
  TrustBipartiteGraph g = read_ratings_tsv_file(input);
  EvalPoint point{cfg.beta,       cfg.train.alpha, cfg.train.latent_dim,
                  cfg.similarity, cfg.centrality,  cfg.split_fraction};
  MetricReport report = evaluate_point(g, point, cfg.eval_options());
  std::cout << "rmse=" << num(report.rmse) << " mae=" << num(report.mae)
            << " coverage=" << num(report.coverage)
            << " precision=" << num(report.precision)
            << " f_measure=" << num(report.f_measure) << " n=" << report.n
            << '\n';
  if (!output.empty()) {
    auto out = open_output(output);
    out << manifest_line(cfg, cfg.train.seed) << '\n';
    write_sweep_csv({{point, report}}, out);
  }
}

void run_sweep(const ExperimentConfig& cfg, const std::string& input,
               const std::string& output) {
  TrustBipartiteGraph g = read_ratings_tsv_file(input);
  std::vector<SweepRow> rows = sweep(g, cfg.sweep_grid(), cfg.eval_options());
  std::cout << "grid_points=" << rows.size() << '\n';
  auto out = open_output(output);
  out << manifest_line(cfg, cfg.train.seed) << '\n';
  write_sweep_csv(rows, out);
}

void run_simulate(const ExperimentConfig& cfg, const std::string& output,
                  const std::string& selections_out) {
  SimConfig sim = cfg.sim_config();
  SimWorld world = build_world(sim);
  TrajectoryLog log = run_simulation(world, sim);

  for (std::size_t j : log.tracked) {
    double final_pred = 3.0;
    for (const TrajectorySnapshot& s : log.snapshots)
      if (s.trustee == j) final_pred = s.mean_pred;
    std::cout << "tracked_trustee=" << j
              << " attack=" << to_string(world.trustees[j].attack)
              << " final_pred=" << num(final_pred)
              << " objective=" << num(objective_at(world.trustees[j],
                                                   sim.horizon_hours))
              << '\n';
  }

  auto out = open_output(output);
  out << manifest_line(cfg, sim.seed) << '\n';
  write_trajectory_csv(log, out);
  if (!selections_out.empty()) {
    auto sel = open_output(selections_out);
    sel << manifest_line(cfg, sim.seed) << '\n';
    write_selection_csv(log.selections, sel);
  }
}

void run_usecase(const ExperimentConfig& cfg, const std::string& output,
                 const std::string& selections_out) {
  UseCaseResult result = run_usecase(cfg.usecase_config());
  std::size_t stuffed_hits = 0;
  for (const SelectionRecord& s : result.trust_selections)
    if (s.trustee == result.stuffed_trustee) ++stuffed_hits;
  std::cout << "stuffed_trustee=" << result.stuffed_trustee
            << " stuffed_selections=" << stuffed_hits << '\n';
  for (std::size_t g = 0; g < result.group_objectives.size(); ++g)
    std::cout << "group=" << g
              << " objective=" << num(result.group_objectives[g])
              << " trust=" << result.trust_usage[g]
              << " random=" << result.random_usage[g] << '\n';

  auto out = open_output(output);
  out << manifest_line(cfg, cfg.train.seed) << '\n';
  write_usecase_csv(result, out);
  if (!selections_out.empty()) {
    auto sel = open_output(selections_out);
    sel << manifest_line(cfg, cfg.train.seed) << '\n';
    write_selection_csv(result.trust_selections, sel);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"social-IoT trust management engine"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path,
                 "key=value config file (defaults < file < flags)")
      ->envname("SIOTRUST_CONFIG");

  Settings flags;
  std::string input, output, selections_out, distances_out;

  CLI::App* ingest = app.add_subcommand("ingest", "parse a rating TSV and "
                                                  "report dataset statistics");
  ingest->add_option("--input,-i", input, "rating TSV path")->required();
  ingest->add_option("--output,-o", output, "normalized TSV copy");

  CLI::App* social =
      app.add_subcommand("social-net", "build the trustor friendship network");
  social->add_option("--input,-i", input, "rating TSV path")->required();
  social->add_option("--output,-o", output, "friendship edge CSV");
  social->add_option("--distances", distances_out, "pairwise distance CSV");
  add_social_settings(social, flags);

  CLI::App* train =
      app.add_subcommand("train", "fit latent factors on the full dataset");
  train->add_option("--input,-i", input, "rating TSV path")->required();
  train->add_option("--output,-o", output, "factor checkpoint path")
      ->required();
  add_social_settings(train, flags);
  add_model_settings(train, flags);

  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "hold-out metrics for one parameter setting");
  evaluate->add_option("--input,-i", input, "rating TSV path")->required();
  evaluate->add_option("--output,-o", output, "single-row metric CSV");
  add_social_settings(evaluate, flags);
  add_model_settings(evaluate, flags);
  add_setting(evaluate, flags, "--split-fraction", "split_fraction",
              "train share in (0,1)");
  add_setting(evaluate, flags, "--split-seed", "split_seed",
              "hold-out shuffle seed");
  add_setting(evaluate, flags, "--predictor", "predictor", "printed|blended");
  add_setting(evaluate, flags, "--scale", "scale", "external|internal");

  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "metric table over a parameter grid");
  sweep_cmd->add_option("--input,-i", input, "rating TSV path")->required();
  sweep_cmd->add_option("--output,-o", output, "sweep CSV path")->required();
  add_social_settings(sweep_cmd, flags);
  add_model_settings(sweep_cmd, flags);
  add_setting(sweep_cmd, flags, "--split-seed", "split_seed",
              "hold-out shuffle seed");
  add_setting(sweep_cmd, flags, "--predictor", "predictor",
              "printed|blended");
  add_setting(sweep_cmd, flags, "--scale", "scale", "external|internal");
  add_setting(sweep_cmd, flags, "--betas", "sweep_betas", "comma list");
  add_setting(sweep_cmd, flags, "--alphas", "sweep_alphas", "comma list");
  add_setting(sweep_cmd, flags, "--latent-dims", "sweep_latent_dims",
              "comma list");
  add_setting(sweep_cmd, flags, "--similarities", "sweep_similarities",
              "comma list");
  add_setting(sweep_cmd, flags, "--centralities", "sweep_centralities",
              "comma list");
  add_setting(sweep_cmd, flags, "--splits", "sweep_splits", "comma list");

  CLI::App* simulate = app.add_subcommand(
      "simulate", "hostile-environment simulation with periodic retrains");
  simulate->add_option("--output,-o", output, "trajectory CSV path")
      ->required();
  simulate->add_option("--selections-output", selections_out,
                       "selection log CSV");
  add_social_settings(simulate, flags);
  add_setting(simulate, flags, "--latent-dim,-L", "latent_dim",
              "latent feature count");
  add_setting(simulate, flags, "--alpha", "alpha", "own-factor weight");
  add_setting(simulate, flags, "--beta", "beta", "similarity/centrality blend");
  add_setting(simulate, flags, "--lambda-s", "lambda_s", "regularization");
  add_setting(simulate, flags, "--lambda-r", "lambda_r", "regularization");
  add_setting(simulate, flags, "--learning-rate", "learning_rate",
              "SGD step size");
  add_setting(simulate, flags, "--similarity", "similarity",
              "hellinger|bayesian|connection");
  add_setting(simulate, flags, "--centrality", "centrality",
              "degree|blc|none");
  add_setting(simulate, flags, "--seed", "seed", "simulation seed", true);
  add_setting(simulate, flags, "--lambda", "maliciousness",
              "hostile fraction in [0,1]");
  add_setting(simulate, flags, "--trustors", "trustor_count", "trustor count");
  add_setting(simulate, flags, "--trustees", "trustee_count", "trustee count");
  add_setting(simulate, flags, "--trustor-groups", "trustor_groups",
              "trustor group count");
  add_setting(simulate, flags, "--trustee-groups", "trustee_groups",
              "trustee group count");
  add_setting(simulate, flags, "--horizon", "horizon_hours",
              "simulated hours");
  add_setting(simulate, flags, "--retrain-period", "retrain_period_hours",
              "hours between retrains");
  add_setting(simulate, flags, "--pareto-shape", "pareto_shape",
              "inter-contact tail exponent");
  add_setting(simulate, flags, "--gap-min", "gap_min_hours",
              "minimum contact gap");
  add_setting(simulate, flags, "--gap-max", "gap_max_hours",
              "maximum contact gap");
  add_setting(simulate, flags, "--rating-noise", "rating_noise",
              "honest observation sigma");
  add_setting(simulate, flags, "--epsilon-hi", "epsilon_hi",
              "exploration start");
  add_setting(simulate, flags, "--epsilon-lo", "epsilon_lo",
              "exploration end");
  add_setting(simulate, flags, "--epochs-per-retrain", "epochs_per_retrain",
              "SGD epochs per retrain");
  add_bool_setting(simulate, flags, "--forgetful-baseline",
                   "forgetful_baseline",
                   "erase whitewasher history on rejoin");

  CLI::App* usecase = app.add_subcommand(
      "usecase", "newcomer selection scenario with a ballot-stuffed trustee");
  usecase->add_option("--output,-o", output, "per-group usage CSV")
      ->required();
  usecase->add_option("--selections-output", selections_out,
                      "mechanism-arm selection CSV");
  add_social_settings(usecase, flags);
  add_model_settings(usecase, flags);
  add_setting(usecase, flags, "--honest-trustors", "honest_trustors",
              "warm trustor count");
  add_setting(usecase, flags, "--accomplices", "accomplice_count",
              "ballot-stuffing trustor count");
  add_setting(usecase, flags, "--group-size", "group_size",
              "trustees per group");
  add_setting(usecase, flags, "--warmup-ratings", "warmup_ratings",
              "ratings per warm trustor");
  add_setting(usecase, flags, "--selections", "selections",
              "newcomer selection count");
  add_setting(usecase, flags, "--rating-noise", "rating_noise",
              "honest observation sigma");
  add_setting(usecase, flags, "--epsilon-hi", "usecase_epsilon_hi",
              "exploration start");
  add_setting(usecase, flags, "--epsilon-lo", "usecase_epsilon_lo",
              "exploration end");
  add_setting(usecase, flags, "--epochs-initial", "epochs_initial",
              "warmup training epochs");
  add_setting(usecase, flags, "--epochs-per-update", "epochs_per_update",
              "epochs after each selection");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    const ExperimentConfig cfg = resolve_config(config_path, flags);
    if (ingest->parsed()) run_ingest(cfg, input, output);
    else if (social->parsed()) run_social_net(cfg, input, output, distances_out);
    else if (train->parsed()) run_train(cfg, input, output);
    else if (evaluate->parsed()) run_evaluate(cfg, input, output);
    else if (sweep_cmd->parsed()) run_sweep(cfg, input, output);
    else if (simulate->parsed()) run_simulate(cfg, output, selections_out);
    else if (usecase->parsed()) run_usecase(cfg, output, selections_out);
  } catch (const DivergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
