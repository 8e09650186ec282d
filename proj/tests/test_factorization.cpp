#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "siotrust/factorization.hpp"
#include "siotrust/graph.hpp"
#include "siotrust/trust_pattern.hpp"

using namespace siotrust;

namespace {

TrustBipartiteGraph random_graph(std::mt19937_64& rng, std::size_t n,
                                 std::size_t m, double fill) {
  TrustBipartiteGraph g(n, m);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> stars(1, 5);
  for (TrustorId u = 0; u < n; ++u)
    for (TrusteeId v = 0; v < m; ++v)
      if (coin(rng) < fill)
        g.add_experience_external(u, v, static_cast<double>(stars(rng)));
  return g;
}

TrustPatternMatrix random_gamma(std::mt19937_64& rng, std::size_t n,
                                double friend_rate) {
  TrustorSocialNetwork net(n);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (coin(rng) < friend_rate) net.add_edge(i, j);

  TrustPatternMatrix gamma(n, 1.0, false);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& f = net.friends(i);
    if (f.empty()) continue;
    std::vector<double> w(f.size());
    double sum = 0.0;
    for (double& x : w) sum += x = coin(rng) + 0.1;
    std::vector<std::pair<std::size_t, double>> row;
    for (std::size_t a = 0; a < f.size(); ++a)
      row.emplace_back(f[a], w[a] / sum);
    gamma.set_row(i, std::move(row));
  }
  return gamma;
}

LatentFactors random_factors(std::mt19937_64& rng, std::size_t n,
                             std::size_t m, TrainConfig cfg) {
  LatentFactors f(n, m, cfg);
  std::normal_distribution<double> init(0.0, 0.5);
  for (double& v : f.s()) v = init(rng);
  for (double& v : f.r()) v = init(rng);
  return f;
}

}  // namespace

TEST_CASE("logistic squashes into (0,1) around one half") {
  CHECK(logistic(0.0) == doctest::Approx(0.5));
  CHECK(logistic(50.0) == doctest::Approx(1.0));
  CHECK(logistic(-50.0) == doctest::Approx(0.0));
  for (double x : {-2.0, -0.3, 0.7, 3.1})
    CHECK(logistic(x) + logistic(-x) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("blended score mixes own and friend inner products") {
  TrainConfig cfg;
  cfg.latent_dim = 2;
  LatentFactors f(3, 1, cfg);
  f.s() = {1.0, 0.0,   // trustor 0
           0.0, 1.0,   // trustor 1
           1.0, 1.0};  // trustor 2
  f.r() = {0.5, -0.25};

  TrustPatternMatrix gamma(3, 1.0, false);
  gamma.set_row(0, {{1, 0.25}, {2, 0.75}});

  CHECK(blended_score(f, gamma, 0.4, 0, 0) ==
        doctest::Approx(0.275).epsilon(1e-12));
  // friendless trustor falls back to its own inner product
  CHECK(blended_score(f, gamma, 0.4, 1, 0) == doctest::Approx(-0.25));
  CHECK(blended_score(f, gamma, 1.0, 0, 0) == doctest::Approx(0.5));
}

TEST_CASE("loss equals the explicit sum over observed entries") {
  std::mt19937_64 rng(3);
  TrustBipartiteGraph g = random_graph(rng, 8, 6, 0.5);
  TrainConfig cfg;
  cfg.latent_dim = 3;
  cfg.alpha = 0.4;
  cfg.lambda_s = 0.02;
  cfg.lambda_r = 0.03;
  LatentFactors f = random_factors(rng, 8, 6, cfg);
  TrustPatternMatrix gamma = random_gamma(rng, 8, 0.4);

  double data = 0.0;
  for (const RatingEdge& e : g.edges()) {
    const double x = blended_score(f, gamma, cfg.alpha, e.trustor, e.trustee);
    const double err = e.value - 1.0 / (1.0 + std::exp(-x));
    data += err * err;
  }
  double reg = 0.0;
  for (double v : f.s()) reg += cfg.lambda_s * v * v;
  for (double v : f.r()) reg += cfg.lambda_r * v * v;

  CHECK(loss(g, f, gamma) ==
        doctest::Approx(0.5 * data + 0.5 * reg).epsilon(1e-10));
}

TEST_CASE("analytic gradient matches central finite differences") {
  std::mt19937_64 rng(77);
  for (double alpha : {0.0, 0.4, 1.0}) {
    TrustBipartiteGraph g = random_graph(rng, 6, 5, 0.55);
    TrainConfig cfg;
    cfg.latent_dim = 2;
    cfg.alpha = alpha;
    cfg.lambda_s = 0.01;
    cfg.lambda_r = 0.01;
    LatentFactors f = random_factors(rng, 6, 5, cfg);
    TrustPatternMatrix gamma = random_gamma(rng, 6, 0.5);

    LossGradient grad = loss_gradient(g, f, gamma);
    const double h = 1e-6;

    auto probe = [&](std::vector<double>& params, std::size_t k,
                     double analytic) {
      const double save = params[k];
      params[k] = save + h;
      const double up = loss(g, f, gamma);
      params[k] = save - h;
      const double down = loss(g, f, gamma);
      params[k] = save;
      const double numeric = (up - down) / (2.0 * h);
      const double scale = std::max({1.0, std::abs(numeric)});
      CHECK(std::abs(analytic - numeric) / scale < 1e-4);
    };

    for (std::size_t k = 0; k < f.s().size(); ++k)
      probe(f.s(), k, grad.s[k]);
    for (std::size_t k = 0; k < f.r().size(); ++k)
      probe(f.r(), k, grad.r[k]);
  }
}

TEST_CASE("planted rank-one data is recovered on the observed entries") {
  std::mt19937_64 rng(12);
  const std::size_t n = 20, m = 15;
  std::vector<double> su(n), rv(m);
  std::uniform_real_distribution<double> unif(0.4, 1.6);
  for (double& x : su) x = unif(rng);
  for (double& x : rv) x = unif(rng);

  TrustBipartiteGraph g(n, m);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (TrustorId i = 0; i < n; ++i)
    for (TrusteeId j = 0; j < m; ++j)
      if (coin(rng) < 0.7) {
        const double b = 1.0 / (1.0 + std::exp(-su[i] * rv[j]));
        g.add_experience(i, j, b);
      }

  TrainConfig cfg;
  cfg.latent_dim = 1;
  cfg.alpha = 1.0;
  cfg.lambda_s = 1e-4;
  cfg.lambda_r = 1e-4;
  cfg.learning_rate = 0.5;
  cfg.epochs = 400;
  cfg.seed = 5;
  LatentFactors f = sgd_train(g, {}, cfg);

  PredictionMatrix pred = predict(f);
  double sq = 0.0;
  for (const RatingEdge& e : g.edges()) {
    const double err = pred.at(e.trustor, e.trustee) - e.value;
    sq += err * err;
  }
  CHECK(std::sqrt(sq / static_cast<double>(g.edge_count())) < 0.02);
}

TEST_CASE("training is deterministic for a fixed seed") {
  std::mt19937_64 rng(9);
  TrustBipartiteGraph g = random_graph(rng, 12, 9, 0.4);
  TrustPatternMatrix gamma = random_gamma(rng, 12, 0.3);
  TrainConfig cfg;
  cfg.epochs = 40;
  cfg.seed = 123;

  LatentFactors a = sgd_train(g, gamma, cfg);
  LatentFactors b = sgd_train(g, gamma, cfg);
  CHECK(a.s() == b.s());
  CHECK(a.r() == b.r());
  CHECK(a.loss_history() == b.loss_history());

  cfg.seed = 124;
  LatentFactors c = sgd_train(g, gamma, cfg);
  CHECK(a.s() != c.s());
}

TEST_CASE("empty social rows neutralize alpha entirely") {
  std::mt19937_64 rng(21);
  TrustBipartiteGraph g = random_graph(rng, 10, 8, 0.4);

  TrainConfig pure;
  pure.alpha = 0.0;
  pure.epochs = 30;
  pure.seed = 55;
  TrainConfig plain = pure;
  plain.alpha = 1.0;

  LatentFactors a = sgd_train(g, {}, pure);
  LatentFactors b = sgd_train(g, {}, plain);
  CHECK(a.s() == b.s());
  CHECK(a.r() == b.r());
}

TEST_CASE("runaway learning rate trips the divergence guard") {
  std::mt19937_64 rng(14);
  TrustBipartiteGraph g = random_graph(rng, 10, 8, 0.6);
  TrainConfig cfg;
  cfg.learning_rate = 5000.0;
  cfg.epochs = 200;
  CHECK_THROWS_AS(sgd_train(g, {}, cfg), DivergenceError);
}

TEST_CASE("per-epoch update work matches the visit accounting") {
  std::mt19937_64 rng(33);
  TrustBipartiteGraph g = random_graph(rng, 9, 7, 0.5);
  TrustPatternMatrix gamma = random_gamma(rng, 9, 0.4);
  TrainConfig cfg;
  cfg.latent_dim = 3;
  cfg.alpha = 0.4;
  cfg.epochs = 2;
  LatentFactors f = sgd_train(g, gamma, cfg);

  std::size_t expected = 0;
  for (const RatingEdge& e : g.edges())
    expected += (2 + gamma.row(e.trustor).size()) * cfg.latent_dim;
  CHECK(f.entry_updates_per_epoch() == expected);

  // alpha = 1 skips the friend updates
  cfg.alpha = 1.0;
  LatentFactors f1 = sgd_train(g, gamma, cfg);
  CHECK(f1.entry_updates_per_epoch() ==
        g.edge_count() * 2 * cfg.latent_dim);
}

TEST_CASE("loss history descends to below its starting point") {
  std::mt19937_64 rng(8);
  TrustBipartiteGraph g = random_graph(rng, 15, 10, 0.5);
  TrustPatternMatrix gamma = random_gamma(rng, 15, 0.3);
  TrainConfig cfg;
  cfg.epochs = 80;
  LatentFactors f = sgd_train(g, gamma, cfg);

  REQUIRE(f.loss_history().size() == 80);
  for (double l : f.loss_history()) CHECK(std::isfinite(l));
  CHECK(f.loss_history().back() < f.loss_history().front());
}

TEST_CASE("continuing training extends the same trajectory") {
  std::mt19937_64 rng(26);
  TrustBipartiteGraph g = random_graph(rng, 10, 8, 0.5);
  TrainConfig cfg;
  cfg.epochs = 25;
  cfg.seed = 7;
  LatentFactors f = sgd_train(g, {}, cfg);
  const double before = f.loss_history().back();
  sgd_continue(f, g, {}, 25, 1234);
  CHECK(f.loss_history().size() == 50);
  CHECK(f.loss_history().back() <= before * 1.05);
}

TEST_CASE("predictions apply the logistic to the chosen form") {
  std::mt19937_64 rng(61);
  TrustBipartiteGraph g = random_graph(rng, 7, 5, 0.6);
  TrustPatternMatrix gamma = random_gamma(rng, 7, 0.5);
  TrainConfig cfg;
  cfg.epochs = 20;
  cfg.alpha = 0.4;
  LatentFactors f = sgd_train(g, gamma, cfg);

  PredictionMatrix printed = predict(f);
  PredictionMatrix blended = predict_blended(f, gamma, cfg.alpha);
  for (TrustorId i = 0; i < 7; ++i)
    for (TrusteeId j = 0; j < 5; ++j) {
      CHECK(printed.at(i, j) > 0.0);
      CHECK(printed.at(i, j) < 1.0);
      CHECK(blended.at(i, j) ==
            doctest::Approx(
                logistic(blended_score(f, gamma, cfg.alpha, i, j))));
    }
}

TEST_CASE("trustee ranking is by value with id tiebreak") {
  PredictionMatrix pred;
  pred.n = 1;
  pred.m = 4;
  pred.values = {0.3, 0.9, 0.3, 0.1};
  auto order = rank_trustees(pred, 0);
  CHECK(order == std::vector<TrusteeId>{1, 0, 2, 3});
  CHECK_THROWS_AS(rank_trustees(pred, 5), std::out_of_range);
}

TEST_CASE("checkpoints round-trip bit for bit") {
  std::mt19937_64 rng(44);
  TrustBipartiteGraph g = random_graph(rng, 8, 6, 0.5);
  TrainConfig cfg;
  cfg.epochs = 15;
  cfg.alpha = 0.3;
  cfg.latent_dim = 3;
  cfg.seed = 99;
  LatentFactors f = sgd_train(g, {}, cfg);

  std::ostringstream out;
  save_factors(f, out);
  std::istringstream in(out.str());
  LatentFactors f2 = load_factors(in);

  CHECK(f2.s() == f.s());
  CHECK(f2.r() == f.r());
  CHECK(f2.latent_dim() == 3);
  CHECK(f2.config().alpha == cfg.alpha);
  CHECK(f2.config().seed == cfg.seed);

  std::istringstream garbage("not a checkpoint\n");
  CHECK_THROWS_AS(load_factors(garbage), DataError);
}

TEST_CASE("config validation rejects out-of-range values") {
  TrainConfig cfg;
  cfg.latent_dim = 0;
  CHECK_THROWS_AS(cfg.validate(), std::domain_error);
  cfg = {};
  cfg.alpha = 1.2;
  CHECK_THROWS_AS(cfg.validate(), std::domain_error);
  cfg = {};
  cfg.learning_rate = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::domain_error);
  cfg = {};
  cfg.lambda_s = -0.1;
  CHECK_THROWS_AS(cfg.validate(), std::domain_error);
}
