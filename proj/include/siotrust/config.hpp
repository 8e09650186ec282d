#ifndef SIOTRUST_CONFIG_HPP
#define SIOTRUST_CONFIG_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "siotrust/evaluation.hpp"
#include "siotrust/simulation.hpp"

namespace siotrust {

inline constexpr const char* kVersion = "0.1.0";

/// Every experiment knob in one flat bag, keyed for the config file and
/// the command line alike.  Defaults are the best-performing setting
/// (L=4, alpha=0.4, beta=1, lambda=0.001, 75:25 split).
struct ExperimentConfig {
  // factorization
  TrainConfig train;

  // social network
  double threshold = 0.0;  // absolute cut; <= 0 means use the percentile
  double threshold_percentile = 20.0;
  HellingerMode mode = HellingerMode::Literal;

  // trust pattern
  SimilarityKind similarity = SimilarityKind::Hellinger;
  CentralityKind centrality = CentralityKind::None;
  double beta = 1.0;
  double bayesian_delta = 0.0;
  bool binary_gamma = false;

  // evaluation
  double split_fraction = 0.75;
  std::uint64_t split_seed = 0;
  PredictorForm predictor = PredictorForm::Printed;
  bool internal_scale = false;

  // sweep grids (comma lists in the config file)
  std::vector<double> sweep_betas{1.0};
  std::vector<double> sweep_alphas{0.4};
  std::vector<std::size_t> sweep_latent_dims{4};
  std::vector<SimilarityKind> sweep_similarities{SimilarityKind::Hellinger};
  std::vector<CentralityKind> sweep_centralities{CentralityKind::None};
  std::vector<double> sweep_splits{0.75};

  // simulation
  std::size_t trustor_count = 100;
  std::size_t trustee_count = 70;
  std::size_t trustor_groups = 20;
  std::size_t trustee_groups = 14;
  double horizon_hours = 150.0;
  double retrain_period_hours = 24.0;
  double maliciousness = 0.30;
  double pareto_shape = 1.5;
  double gap_min_hours = 0.5;
  double gap_max_hours = 12.0;
  double rating_noise = 0.25;
  double epsilon_hi = 0.5;
  double epsilon_lo = 0.05;
  std::size_t epochs_per_retrain = 80;
  bool forgetful_baseline = false;

  // use case
  std::size_t honest_trustors = 60;
  std::size_t accomplice_count = 5;
  std::size_t group_size = 5;
  std::size_t warmup_ratings = 12;
  std::size_t selections = 20;
  double usecase_epsilon_hi = 0.3;
  double usecase_epsilon_lo = 0.05;
  std::size_t epochs_initial = 120;
  std::size_t epochs_per_update = 30;

  /// Applies one key=value setting; unknown keys and malformed values
  /// raise std::invalid_argument naming the key.
  void apply(const std::string& key, const std::string& value);

  /// Canonical key=value rendering of every field, fixed order — the
  /// hashing base for the run manifest.
  std::string serialize() const;

  EvalOptions eval_options() const;
  SweepGrid sweep_grid() const;
  SimConfig sim_config() const;
  UseCaseConfig usecase_config() const;
};

/// `key=value` lines, `#` comments and blanks skipped; returned in file
/// order.  Malformed lines raise std::invalid_argument with the line
/// number.
std::vector<std::pair<std::string, std::string>> read_key_values(
    std::istream& in);
std::vector<std::pair<std::string, std::string>> read_key_values_file(
    const std::string& path);

std::uint64_t fnv1a_hash(const std::string& text);

/// `# manifest seed=<seed> config=<fnv64 hex> version=<semver>`; pure
/// function of seed and effective config, so reruns are byte-identical.
std::string manifest_line(const ExperimentConfig& cfg, std::uint64_t seed);

}  // namespace siotrust

#endif  // SIOTRUST_CONFIG_HPP
