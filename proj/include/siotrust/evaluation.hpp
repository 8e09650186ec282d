#ifndef SIOTRUST_EVALUATION_HPP
#define SIOTRUST_EVALUATION_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "siotrust/factorization.hpp"
#include "siotrust/graph.hpp"
#include "siotrust/social_net.hpp"
#include "siotrust/trust_pattern.hpp"

namespace siotrust {

struct SplitSpec {
  double train_fraction = 0.75;
  std::uint64_t seed = 0;
};

struct SplitResult {
  TrustBipartiteGraph train;
  std::vector<RatingEdge> test;  // internal-scale values
};

/// Seeded disjoint/exhaustive partition of the observed ratings.  The
/// train side keeps the full trustor/trustee index space and labels.
SplitResult split(const TrustBipartiteGraph& g, const SplitSpec& spec);

struct MetricReport {
  double rmse = 0.0;
  double mae = 0.0;
  double coverage = 0.0;
  double precision = 0.0;
  double f_measure = 0.0;
  std::size_t n = 0;  // test-rating count
  double rmse_max = 4.0;
};

double rmse(const std::vector<double>& predicted,
            const std::vector<double>& actual);
double mae(const std::vector<double>& predicted,
           const std::vector<double>& actual);
double coverage(std::size_t predicted_count, std::size_t test_count);
double precision(double rmse_value, double rmse_max);
double f_measure(double precision_value, double coverage_value);

/// Scores a dense reconstruction against held-out ratings.  On the
/// external scale both sides are mapped to 1..5 and rmse_max is 4; the
/// internal-scale variant keeps (0,1] values with rmse_max 0.8.
MetricReport score_predictions(const PredictionMatrix& pred,
                               const std::vector<RatingEdge>& test,
                               bool external_scale = true);

/// Which reconstruction the metrics are computed from: the plain
/// g(S^T R) form or the socially blended one used during training.
enum class PredictorForm { Printed, Blended };

struct EvalPoint {
  double beta = 1.0;
  double alpha = 0.4;
  std::size_t latent_dim = 4;
  SimilarityKind similarity = SimilarityKind::Hellinger;
  CentralityKind centrality = CentralityKind::None;
  double split_fraction = 0.75;
};

struct EvalOptions {
  TrainConfig train;                  // alpha/latent_dim overridden per point
  std::uint64_t split_seed = 0;
  double threshold_percentile = 20.0;  // friendship cut over distances
  HellingerMode mode = HellingerMode::Literal;
  double bayesian_delta = 0.0;
  PredictorForm predictor = PredictorForm::Printed;
  bool external_scale = true;
  bool binary_gamma = false;  // baseline: Gamma = 1 for every friend
};

/// Full pipeline for one configuration: split, rebuild the social net
/// and Gamma on the train side, train factors, score the held-out set.
MetricReport evaluate_point(const TrustBipartiteGraph& g,
                            const EvalPoint& point, const EvalOptions& opt);

struct SweepGrid {
  std::vector<double> betas{1.0};
  std::vector<double> alphas{0.4};
  std::vector<std::size_t> latent_dims{4};
  std::vector<SimilarityKind> similarities{SimilarityKind::Hellinger};
  std::vector<CentralityKind> centralities{CentralityKind::None};
  std::vector<double> split_fractions{0.75};
};

struct SweepRow {
  EvalPoint point;
  MetricReport report;
};

/// Cartesian product of the grid axes, one evaluate_point run each.
/// Split seed and train seed stay fixed across points.
std::vector<SweepRow> sweep(const TrustBipartiteGraph& g,
                            const SweepGrid& grid, const EvalOptions& opt);

/// Header `beta,alpha,L,sim,cen,split,rmse,mae,coverage,precision,f`
/// then one row per grid point.
void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);

}  // namespace siotrust

#endif  // SIOTRUST_EVALUATION_HPP
