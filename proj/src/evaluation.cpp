#include "siotrust/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <random>

namespace siotrust {

SplitResult split(const TrustBipartiteGraph& g, const SplitSpec& spec) {
  if (spec.train_fraction <= 0.0 || spec.train_fraction >= 1.0)
    throw std::domain_error("train fraction must be in (0,1)");
  const std::size_t total = g.edge_count();
  if (total == 0) throw DataError("cannot split an empty graph");

  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(spec.seed);
  std::shuffle(order.begin(), order.end(), rng);

  const auto train_count = static_cast<std::size_t>(
      std::llround(spec.train_fraction * static_cast<double>(total)));

  // canonical order inside each side so downstream runs do not depend on
  // shuffle internals beyond the membership itself
  std::vector<std::size_t> train_idx(order.begin(), order.begin() + train_count);
  std::vector<std::size_t> test_idx(order.begin() + train_count, order.end());
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(test_idx.begin(), test_idx.end());

  SplitResult out;
  out.train = TrustBipartiteGraph(g.trustor_count(), g.trustee_count());
  if (!g.trustor_labels().empty() || !g.trustee_labels().empty())
    out.train.set_labels(g.trustor_labels(), g.trustee_labels());
  for (std::size_t idx : train_idx) {
    const RatingEdge& e = g.edges()[idx];
    out.train.add_experience(e.trustor, e.trustee, e.value);
  }
  out.test.reserve(test_idx.size());
  for (std::size_t idx : test_idx) out.test.push_back(g.edges()[idx]);
  return out;
}

namespace {

void check_paired(const std::vector<double>& predicted,
                  const std::vector<double>& actual) {
  if (predicted.size() != actual.size())
    throw std::invalid_argument("prediction/actual length mismatch");
  if (predicted.empty())
    throw DataError("metric undefined on an empty test set");
}

}  // namespace

double rmse(const std::vector<double>& predicted,
            const std::vector<double>& actual) {
  check_paired(predicted, actual);
  double sum = 0.0;
  for (std::size_t k = 0; k < predicted.size(); ++k) {
    const double diff = predicted[k] - actual[k];
    sum += diff * diff;
  }
  return std::sqrt(sum / static_cast<double>(predicted.size()));
}

double mae(const std::vector<double>& predicted,
           const std::vector<double>& actual) {
  check_paired(predicted, actual);
  double sum = 0.0;
  for (std::size_t k = 0; k < predicted.size(); ++k)
    sum += std::abs(predicted[k] - actual[k]);
  return sum / static_cast<double>(predicted.size());
}

double coverage(std::size_t predicted_count, std::size_t test_count) {
  if (test_count == 0) throw DataError("coverage undefined on an empty test set");
  return static_cast<double>(predicted_count) / static_cast<double>(test_count);
}

double precision(double rmse_value, double rmse_max) {
  if (rmse_max <= 0.0) throw std::domain_error("rmse_max must be > 0");
  return std::clamp(1.0 - rmse_value / rmse_max, 0.0, 1.0);
}

double f_measure(double precision_value, double coverage_value) {
  const double denom = precision_value + coverage_value;
  if (denom == 0.0) return 0.0;
  return 2.0 * precision_value * coverage_value / denom;
}

MetricReport score_predictions(const PredictionMatrix& pred,
                               const std::vector<RatingEdge>& test,
                               bool external_scale) {
  if (test.empty()) throw DataError("metric undefined on an empty test set");

  std::vector<double> p, a;
  p.reserve(test.size());
  a.reserve(test.size());
  for (const RatingEdge& e : test) {
    const double value = pred.at(e.trustor, e.trustee);
    if (external_scale) {
      p.push_back(rating::to_external(value));
      a.push_back(rating::to_external(e.value));
    } else {
      p.push_back(value);
      a.push_back(e.value);
    }
  }

  MetricReport report;
  report.n = test.size();
  report.rmse_max = external_scale ? 4.0 : 0.8;
  report.rmse = rmse(p, a);
  report.mae = mae(p, a);
  report.coverage = coverage(test.size(), test.size());  // dense predictor
  report.precision = precision(report.rmse, report.rmse_max);
  report.f_measure = f_measure(report.precision, report.coverage);
  return report;
}

MetricReport evaluate_point(const TrustBipartiteGraph& g,
                            const EvalPoint& point, const EvalOptions& opt) {
  SplitResult sr = split(g, {point.split_fraction, opt.split_seed});
  if (sr.test.empty()) throw DataError("test split is empty");

  SocialBuildResult social = build_social_network_percentile(
      sr.train, opt.threshold_percentile, opt.mode);

  TrustPatternMatrix gamma;
  if (opt.binary_gamma) {
    gamma = binary_trust_pattern(social.network);
  } else {
    TrustPatternOptions tp;
    tp.similarity = point.similarity;
    tp.centrality = point.centrality;
    tp.beta = point.beta;
    tp.bayesian_delta = opt.bayesian_delta;
    gamma = trust_pattern(sr.train, social.network, social.distances, tp);
  }

  TrainConfig cfg = opt.train;
  cfg.alpha = point.alpha;
  cfg.latent_dim = point.latent_dim;

  LatentFactors factors = sgd_train(sr.train, gamma, cfg);
  PredictionMatrix pred = opt.predictor == PredictorForm::Printed
                              ? predict(factors)
                              : predict_blended(factors, gamma, cfg.alpha);
  return score_predictions(pred, sr.test, opt.external_scale);
}

std::vector<SweepRow> sweep(const TrustBipartiteGraph& g,
                            const SweepGrid& grid, const EvalOptions& opt) {
  std::vector<SweepRow> rows;
  rows.reserve(grid.betas.size() * grid.alphas.size() *
               grid.latent_dims.size() * grid.similarities.size() *
               grid.centralities.size() * grid.split_fractions.size());
  for (double beta : grid.betas)
    for (double alpha : grid.alphas)
      for (std::size_t latent_dim : grid.latent_dims)
        for (SimilarityKind sim : grid.similarities)
          for (CentralityKind cen : grid.centralities)
            for (double frac : grid.split_fractions) {
              EvalPoint point{beta, alpha, latent_dim, sim, cen, frac};
              rows.push_back({point, evaluate_point(g, point, opt)});
            }
  return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  char buf[48];
  auto fmt = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return std::string(buf);
  };

  out << "beta,alpha,L,sim,cen,split,rmse,mae,coverage,precision,f\n";
  for (const SweepRow& row : rows) {
    const EvalPoint& p = row.point;
    const MetricReport& r = row.report;
    out << fmt(p.beta) << ',' << fmt(p.alpha) << ',' << p.latent_dim << ','
        << to_string(p.similarity) << ',' << to_string(p.centrality) << ','
        << fmt(p.split_fraction) << ',' << fmt(r.rmse) << ',' << fmt(r.mae)
        << ',' << fmt(r.coverage) << ',' << fmt(r.precision) << ','
        << fmt(r.f_measure) << '\n';
  }
}

}  // namespace siotrust
