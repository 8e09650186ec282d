#include "siotrust/factorization.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

namespace siotrust {

void TrainConfig::validate() const {
  if (latent_dim < 1) throw std::domain_error("latent_dim must be >= 1");
  if (alpha < 0.0 || alpha > 1.0)
    throw std::domain_error("alpha must be in [0,1]");
  if (lambda_s < 0.0 || lambda_r < 0.0)
    throw std::domain_error("lambda must be >= 0");
  if (learning_rate <= 0.0)
    throw std::domain_error("learning rate must be > 0");
  if (init_scale <= 0.0) throw std::domain_error("init_scale must be > 0");
}

LatentFactors::LatentFactors(std::size_t n, std::size_t m, TrainConfig cfg)
    : n_(n), m_(m), config_(cfg) {
  config_.validate();
  s_.assign(n * config_.latent_dim, 0.0);
  r_.assign(m * config_.latent_dim, 0.0);
}

namespace {

double dot(const double* a, const double* b, std::size_t len) {
  double sum = 0.0;
  for (std::size_t k = 0; k < len; ++k) sum += a[k] * b[k];
  return sum;
}

void check_shapes(const TrustBipartiteGraph& g, const LatentFactors& f,
                  const TrustPatternMatrix& gamma) {
  if (f.trustor_count() != g.trustor_count() ||
      f.trustee_count() != g.trustee_count())
    throw std::invalid_argument("factor/graph dimension mismatch");
  if (gamma.size() != 0 && gamma.size() != g.trustor_count())
    throw std::invalid_argument("gamma/graph dimension mismatch");
}

bool row_empty(const TrustPatternMatrix& gamma, TrustorId i) {
  return gamma.size() == 0 || gamma.row(i).empty();
}

}  // namespace

double blended_score(const LatentFactors& f, const TrustPatternMatrix& gamma,
                     double alpha, TrustorId i, TrusteeId j) {
  const std::size_t L = f.latent_dim();
  const double* rj = f.trustee_vector(j);
  const double self = dot(f.trustor_vector(i), rj, L);
  if (alpha == 1.0 || row_empty(gamma, i)) return self;

  double social = 0.0;
  for (const auto& [k, w] : gamma.row(i))
    social += w * dot(f.trustor_vector(k), rj, L);
  return alpha * self + (1.0 - alpha) * social;
}

double loss(const TrustBipartiteGraph& g, const LatentFactors& f,
            const TrustPatternMatrix& gamma) {
  check_shapes(g, f, gamma);
  const double alpha = f.config().alpha;
  double data = 0.0;
  for (const RatingEdge& e : g.edges()) {
    const double err =
        e.value - logistic(blended_score(f, gamma, alpha, e.trustor, e.trustee));
    data += err * err;
  }
  const double reg_s = std::inner_product(f.s().begin(), f.s().end(),
                                          f.s().begin(), 0.0);
  const double reg_r = std::inner_product(f.r().begin(), f.r().end(),
                                          f.r().begin(), 0.0);
  return 0.5 * data + 0.5 * f.config().lambda_s * reg_s +
         0.5 * f.config().lambda_r * reg_r;
}

LossGradient loss_gradient(const TrustBipartiteGraph& g,
                           const LatentFactors& f,
                           const TrustPatternMatrix& gamma) {
  check_shapes(g, f, gamma);
  const std::size_t L = f.latent_dim();
  const double alpha = f.config().alpha;

  LossGradient grad;
  grad.s.assign(f.s().size(), 0.0);
  grad.r.assign(f.r().size(), 0.0);

  for (const RatingEdge& e : g.edges()) {
    const TrustorId i = e.trustor;
    const TrusteeId j = e.trustee;
    const double x = blended_score(f, gamma, alpha, i, j);
    const double p = logistic(x);
    const double c = -(e.value - p) * p * (1.0 - p);  // dL_entry/dx

    const bool fallback = alpha == 1.0 || row_empty(gamma, i);
    const double a_i = fallback ? 1.0 : alpha;
    const double* si = f.trustor_vector(i);
    const double* rj = f.trustee_vector(j);
    double* gsi = grad.s.data() + i * L;
    double* grj = grad.r.data() + j * L;

    for (std::size_t k = 0; k < L; ++k) {
      gsi[k] += c * a_i * rj[k];
      grj[k] += c * a_i * si[k];
    }
    if (!fallback) {
      for (const auto& [friend_id, w] : gamma.row(i)) {
        const double* sk = f.trustor_vector(friend_id);
        double* gsk = grad.s.data() + friend_id * L;
        const double coeff = c * (1.0 - alpha) * w;
        for (std::size_t k = 0; k < L; ++k) {
          gsk[k] += coeff * rj[k];
          grj[k] += coeff * sk[k];
        }
      }
    }
  }

  for (std::size_t k = 0; k < grad.s.size(); ++k)
    grad.s[k] += f.config().lambda_s * f.s()[k];
  for (std::size_t k = 0; k < grad.r.size(); ++k)
    grad.r[k] += f.config().lambda_r * f.r()[k];
  return grad;
}

namespace {

// One pass over the observed entries in shuffled order.  Returns the
// running data loss accumulated at the moving parameters.
double sgd_epoch(LatentFactors& f, const TrustBipartiteGraph& g,
                 const TrustPatternMatrix& gamma,
                 std::vector<std::size_t>& perm, std::mt19937_64& rng,
                 std::vector<double>& scratch) {
  const std::size_t L = f.latent_dim();
  const TrainConfig& cfg = f.config();
  const double alpha = cfg.alpha;
  const double eta = cfg.learning_rate;

  std::shuffle(perm.begin(), perm.end(), rng);

  double running = 0.0;
  std::size_t updates = 0;
  for (std::size_t slot : perm) {
    const RatingEdge& e = g.edges()[slot];
    const TrustorId i = e.trustor;
    const TrusteeId j = e.trustee;

    const bool fallback = alpha == 1.0 || row_empty(gamma, i);
    const double a_i = fallback ? 1.0 : alpha;

    double* si = f.trustor_vector(i);
    double* rj = f.trustee_vector(j);

    // partials first, from pre-update values
    double x = a_i * dot(si, rj, L);
    double* w = scratch.data();        // dx/dR_j
    double* rj_old = scratch.data() + L;
    for (std::size_t k = 0; k < L; ++k) {
      w[k] = a_i * si[k];
      rj_old[k] = rj[k];
    }
    if (!fallback) {
      for (const auto& [friend_id, gw] : gamma.row(i)) {
        const double* sk = f.trustor_vector(friend_id);
        const double d = dot(sk, rj, L);
        x += (1.0 - alpha) * gw * d;
        for (std::size_t k = 0; k < L; ++k)
          w[k] += (1.0 - alpha) * gw * sk[k];
      }
    }

    const double p = logistic(x);
    const double err = e.value - p;
    running += err * err;
    const double c = err * p * (1.0 - p);

    for (std::size_t k = 0; k < L; ++k)
      si[k] += eta * (c * a_i * rj_old[k] - cfg.lambda_s * si[k]);
    updates += L;
    if (!fallback) {
      for (const auto& [friend_id, gw] : gamma.row(i)) {
        double* sk = f.trustor_vector(friend_id);
        const double coeff = c * (1.0 - alpha) * gw;
        for (std::size_t k = 0; k < L; ++k)
          sk[k] += eta * (coeff * rj_old[k] - cfg.lambda_s * sk[k]);
        updates += L;
      }
    }
    for (std::size_t k = 0; k < L; ++k)
      rj[k] += eta * (c * w[k] - cfg.lambda_r * rj[k]);
    updates += L;
  }

  f.set_entry_updates_per_epoch(updates);

  const double reg_s =
      std::inner_product(f.s().begin(), f.s().end(), f.s().begin(), 0.0);
  const double reg_r =
      std::inner_product(f.r().begin(), f.r().end(), f.r().begin(), 0.0);
  return 0.5 * running + 0.5 * cfg.lambda_s * reg_s +
         0.5 * cfg.lambda_r * reg_r;
}

void run_epochs(LatentFactors& f, const TrustBipartiteGraph& g,
                const TrustPatternMatrix& gamma, std::size_t epochs,
                std::mt19937_64& rng) {
  check_shapes(g, f, gamma);
  if (g.edge_count() == 0) return;

  std::vector<std::size_t> perm(g.edge_count());
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<double> scratch(2 * f.latent_dim());

  const double initial = loss(g, f, gamma);
  const double guard = 10.0 * initial;
  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    const double epoch_loss = sgd_epoch(f, g, gamma, perm, rng, scratch);
    f.loss_history().push_back(epoch_loss);
    if (!std::isfinite(epoch_loss) || epoch_loss > guard)
      throw DivergenceError("training diverged at epoch " +
                            std::to_string(epoch) + ": loss " +
                            std::to_string(epoch_loss) + " vs initial " +
                            std::to_string(initial));
  }
}

}  // namespace

LatentFactors sgd_train(const TrustBipartiteGraph& g,
                        const TrustPatternMatrix& gamma,
                        const TrainConfig& cfg) {
  cfg.validate();
  LatentFactors f(g.trustor_count(), g.trustee_count(), cfg);

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> init(0.0, cfg.init_scale);
  for (double& v : f.s()) v = init(rng);
  for (double& v : f.r()) v = init(rng);

  run_epochs(f, g, gamma, cfg.epochs, rng);
  return f;
}

void sgd_continue(LatentFactors& f, const TrustBipartiteGraph& g,
                  const TrustPatternMatrix& gamma, std::size_t epochs,
                  std::uint64_t shuffle_seed) {
  std::mt19937_64 rng(shuffle_seed);
  run_epochs(f, g, gamma, epochs, rng);
}

PredictionMatrix predict(const LatentFactors& f) {
  PredictionMatrix out;
  out.n = f.trustor_count();
  out.m = f.trustee_count();
  out.values.resize(out.n * out.m);
  const std::size_t L = f.latent_dim();
  for (TrustorId i = 0; i < out.n; ++i)
    for (TrusteeId j = 0; j < out.m; ++j)
      out.values[i * out.m + j] =
          logistic(dot(f.trustor_vector(i), f.trustee_vector(j), L));
  return out;
}

PredictionMatrix predict_blended(const LatentFactors& f,
                                 const TrustPatternMatrix& gamma,
                                 double alpha) {
  PredictionMatrix out;
  out.n = f.trustor_count();
  out.m = f.trustee_count();
  out.values.resize(out.n * out.m);
  for (TrustorId i = 0; i < out.n; ++i)
    for (TrusteeId j = 0; j < out.m; ++j)
      out.values[i * out.m + j] = logistic(blended_score(f, gamma, alpha, i, j));
  return out;
}

std::vector<TrusteeId> rank_trustees(const PredictionMatrix& pred,
                                     TrustorId i) {
  if (i >= pred.n) throw std::out_of_range("trustor id out of range");
  std::vector<TrusteeId> order(pred.m);
  std::iota(order.begin(), order.end(), 0);
  const double* row = pred.values.data() + i * pred.m;
  std::sort(order.begin(), order.end(), [row](TrusteeId a, TrusteeId b) {
    if (row[a] != row[b]) return row[a] > row[b];
    return a < b;
  });
  return order;
}

void save_factors(const LatentFactors& f, std::ostream& out) {
  const TrainConfig& cfg = f.config();
  char buf[64];
  auto fmt = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };

  out << "# siotrust-factors-v1\n";
  out << "L,n,m,seed,alpha,lambda_s,lambda_r,learning_rate,epochs,init_scale\n";
  out << cfg.latent_dim << ',' << f.trustor_count() << ',' << f.trustee_count()
      << ',' << cfg.seed << ',' << fmt(cfg.alpha) << ',' << fmt(cfg.lambda_s)
      << ',' << fmt(cfg.lambda_r) << ',' << fmt(cfg.learning_rate) << ','
      << cfg.epochs << ',' << fmt(cfg.init_scale) << '\n';

  // S and R as L x count row-major blocks
  const std::size_t L = cfg.latent_dim;
  out << "S\n";
  for (std::size_t row = 0; row < L; ++row) {
    for (std::size_t i = 0; i < f.trustor_count(); ++i)
      out << (i ? "," : "") << fmt(f.s()[i * L + row]);
    out << '\n';
  }
  out << "R\n";
  for (std::size_t row = 0; row < L; ++row) {
    for (std::size_t j = 0; j < f.trustee_count(); ++j)
      out << (j ? "," : "") << fmt(f.r()[j * L + row]);
    out << '\n';
  }
}

namespace {

std::vector<double> split_csv_doubles(const std::string& line) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(std::stod(field));
  return out;
}

}  // namespace

LatentFactors load_factors(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty factor checkpoint");
  if (line.rfind("# manifest", 0) == 0) std::getline(in, line);
  if (line != "# siotrust-factors-v1")
    throw DataError("not a siotrust factor checkpoint");
  std::getline(in, line);  // column header

  if (!std::getline(in, line)) throw DataError("truncated checkpoint header");
  std::stringstream ss(line);
  std::string field;
  std::vector<std::string> fields;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (fields.size() != 10) throw DataError("malformed checkpoint header");

  TrainConfig cfg;
  cfg.latent_dim = std::stoul(fields[0]);
  const std::size_t n = std::stoul(fields[1]);
  const std::size_t m = std::stoul(fields[2]);
  cfg.seed = std::stoull(fields[3]);
  cfg.alpha = std::stod(fields[4]);
  cfg.lambda_s = std::stod(fields[5]);
  cfg.lambda_r = std::stod(fields[6]);
  cfg.learning_rate = std::stod(fields[7]);
  cfg.epochs = std::stoul(fields[8]);
  cfg.init_scale = std::stod(fields[9]);

  LatentFactors f(n, m, cfg);
  const std::size_t L = cfg.latent_dim;

  if (!std::getline(in, line) || line != "S")
    throw DataError("expected S block");
  for (std::size_t row = 0; row < L; ++row) {
    if (!std::getline(in, line)) throw DataError("truncated S block");
    auto vals = split_csv_doubles(line);
    if (vals.size() != n) throw DataError("S row length mismatch");
    for (std::size_t i = 0; i < n; ++i) f.s()[i * L + row] = vals[i];
  }
  if (!std::getline(in, line) || line != "R")
    throw DataError("expected R block");
  for (std::size_t row = 0; row < L; ++row) {
    if (!std::getline(in, line)) throw DataError("truncated R block");
    auto vals = split_csv_doubles(line);
    if (vals.size() != m) throw DataError("R row length mismatch");
    for (std::size_t j = 0; j < m; ++j) f.r()[j * L + row] = vals[j];
  }
  return f;
}

}  // namespace siotrust
