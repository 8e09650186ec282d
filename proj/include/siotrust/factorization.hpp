#ifndef SIOTRUST_FACTORIZATION_HPP
#define SIOTRUST_FACTORIZATION_HPP

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "siotrust/graph.hpp"
#include "siotrust/trust_pattern.hpp"

namespace siotrust {

/// Raised when SGD blows past the divergence guard.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TrainConfig {
  std::size_t latent_dim = 4;
  double alpha = 0.4;        // weight of the trustor's own factors
  double lambda_s = 0.001;
  double lambda_r = 0.001;
  double learning_rate = 0.05;
  std::size_t epochs = 300;
  std::uint64_t seed = 0;
  double init_scale = 0.1;

  void validate() const;
};

inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

/// Latent factor matrices S (L x n, trustors) and R (L x m, trustees),
/// stored column-contiguous so one node's vector is a single span.
class LatentFactors {
 public:
  LatentFactors() = default;
  LatentFactors(std::size_t n, std::size_t m, TrainConfig cfg);

  std::size_t trustor_count() const { return n_; }
  std::size_t trustee_count() const { return m_; }
  std::size_t latent_dim() const { return config_.latent_dim; }
  const TrainConfig& config() const { return config_; }

  double* trustor_vector(TrustorId i) {
    return s_.data() + i * config_.latent_dim;
  }
  const double* trustor_vector(TrustorId i) const {
    return s_.data() + i * config_.latent_dim;
  }
  double* trustee_vector(TrusteeId j) {
    return r_.data() + j * config_.latent_dim;
  }
  const double* trustee_vector(TrusteeId j) const {
    return r_.data() + j * config_.latent_dim;
  }

  std::vector<double>& s() { return s_; }
  std::vector<double>& r() { return r_; }
  const std::vector<double>& s() const { return s_; }
  const std::vector<double>& r() const { return r_; }

  /// Running data loss per epoch plus end-of-epoch regularization.
  const std::vector<double>& loss_history() const { return loss_history_; }
  std::vector<double>& loss_history() { return loss_history_; }

  /// Scalar factor-entry updates counted per epoch (complexity guard).
  std::size_t entry_updates_per_epoch() const {
    return entry_updates_per_epoch_;
  }
  void set_entry_updates_per_epoch(std::size_t c) {
    entry_updates_per_epoch_ = c;
  }

 private:
  std::size_t n_ = 0;
  std::size_t m_ = 0;
  TrainConfig config_;
  std::vector<double> s_;
  std::vector<double> r_;
  std::vector<double> loss_history_;
  std::size_t entry_updates_per_epoch_ = 0;
};

/// Pre-logistic blended score: alpha * S_i.R_j + (1-alpha) * sum over
/// friends k of Gamma_ik * S_k.R_j.  A trustor without friends falls back
/// to the plain inner product.
double blended_score(const LatentFactors& f, const TrustPatternMatrix& gamma,
                     double alpha, TrustorId i, TrusteeId j);

/// Regularized sum-of-squared-errors over observed entries.
double loss(const TrustBipartiteGraph& g, const LatentFactors& f,
            const TrustPatternMatrix& gamma);

struct LossGradient {
  std::vector<double> s;  // same layout as LatentFactors::s()
  std::vector<double> r;
};

/// Full-batch analytic gradient of the loss, regularization included once.
LossGradient loss_gradient(const TrustBipartiteGraph& g,
                           const LatentFactors& f,
                           const TrustPatternMatrix& gamma);

/// Seeded SGD over observed entries in per-epoch shuffled order.  Each
/// visited entry updates S_i, R_j and every friend factor S_k.
/// Deterministic for a fixed seed; aborts when the running epoch loss
/// exceeds 10x the initial loss.
LatentFactors sgd_train(const TrustBipartiteGraph& g,
                        const TrustPatternMatrix& gamma,
                        const TrainConfig& cfg);

/// Continues training existing factors (periodic-retrain warm start).
void sgd_continue(LatentFactors& f, const TrustBipartiteGraph& g,
                  const TrustPatternMatrix& gamma, std::size_t epochs,
                  std::uint64_t shuffle_seed);

struct PredictionMatrix {
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<double> values;  // row-major n x m, entries in (0,1)

  double at(TrustorId i, TrusteeId j) const { return values[i * m + j]; }
};

/// Reconstruction as printed: B-hat = g(S^T R).
PredictionMatrix predict(const LatentFactors& f);

/// Reconstruction through the social blend used during training.
PredictionMatrix predict_blended(const LatentFactors& f,
                                 const TrustPatternMatrix& gamma,
                                 double alpha);

/// Trustee ids ordered by descending predicted value, ties by id.
std::vector<TrusteeId> rank_trustees(const PredictionMatrix& pred,
                                     TrustorId i);

/// Checkpoint round-trip at 17 significant digits.
void save_factors(const LatentFactors& f, std::ostream& out);
LatentFactors load_factors(std::istream& in);

}  // namespace siotrust

#endif  // SIOTRUST_FACTORIZATION_HPP
