#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "siotrust/evaluation.hpp"
#include "siotrust/graph.hpp"

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

std::set<std::pair<TrustorId, TrusteeId>> pair_set(
    const std::vector<RatingEdge>& edges) {
  std::set<std::pair<TrustorId, TrusteeId>> out;
  for (const RatingEdge& e : edges) out.insert({e.trustor, e.trustee});
  return out;
}

}  // namespace

TEST_CASE("split partitions the ratings with the rounded train count") {
  std::mt19937_64 rng(10);
  TrustBipartiteGraph g = random_graph(rng, 20, 15, 0.35);
  const std::size_t total = g.edge_count();

  for (double frac : {0.5, 0.75, 0.9}) {
    SplitSpec spec{frac, 42};
    SplitResult r = split(g, spec);
    const auto want_train = static_cast<std::size_t>(
        std::llround(frac * static_cast<double>(total)));
    CHECK(r.train.edge_count() == want_train);
    CHECK(r.test.size() == total - want_train);

    auto train_pairs = pair_set(r.train.edges());
    auto test_pairs = pair_set(r.test);
    CHECK(train_pairs.size() + test_pairs.size() == total);
    for (const auto& p : test_pairs) CHECK(train_pairs.count(p) == 0);

    // the train side keeps the full index space
    CHECK(r.train.trustor_count() == g.trustor_count());
    CHECK(r.train.trustee_count() == g.trustee_count());

    // held-out values match the source graph
    for (const RatingEdge& e : r.test)
      CHECK(e.value == g.edge_value(e.trustor, e.trustee));
  }
}

TEST_CASE("split is seed-deterministic") {
  std::mt19937_64 rng(11);
  TrustBipartiteGraph g = random_graph(rng, 15, 12, 0.4);
  SplitResult a = split(g, {0.75, 7});
  SplitResult b = split(g, {0.75, 7});
  CHECK(pair_set(a.train.edges()) == pair_set(b.train.edges()));
  CHECK(pair_set(a.test) == pair_set(b.test));

  SplitResult c = split(g, {0.75, 8});
  CHECK(pair_set(a.test) != pair_set(c.test));
}

TEST_CASE("split rejects degenerate inputs") {
  std::mt19937_64 rng(12);
  TrustBipartiteGraph g = random_graph(rng, 5, 5, 0.5);
  CHECK_THROWS_AS(split(g, {0.0, 0}), std::domain_error);
  CHECK_THROWS_AS(split(g, {1.0, 0}), std::domain_error);
  TrustBipartiteGraph empty(3, 3);
  CHECK_THROWS_AS(split(empty, {0.75, 0}), DataError);
}

TEST_CASE("rmse and mae match a two-pass recompute") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> unif(1.0, 5.0);
  std::vector<double> pred(200), actual(200);
  for (std::size_t k = 0; k < 200; ++k) {
    pred[k] = unif(rng);
    actual[k] = unif(rng);
  }

  double sq = 0.0, ab = 0.0;
  for (std::size_t k = 0; k < 200; ++k) {
    sq += (pred[k] - actual[k]) * (pred[k] - actual[k]);
    ab += std::abs(pred[k] - actual[k]);
  }
  CHECK(rmse(pred, actual) ==
        doctest::Approx(std::sqrt(sq / 200.0)).epsilon(1e-12));
  CHECK(mae(pred, actual) == doctest::Approx(ab / 200.0).epsilon(1e-12));
  CHECK(mae(pred, actual) <= rmse(pred, actual));

  CHECK(rmse({2.0, 2.0}, {2.0, 2.0}) == 0.0);
  std::vector<double> shorter{1.0};
  CHECK_THROWS_AS(rmse(pred, shorter), std::invalid_argument);
  CHECK_THROWS_AS(rmse({}, {}), DataError);
}

TEST_CASE("precision clamps the scaled rmse complement") {
  CHECK(precision(0.0, 4.0) == doctest::Approx(1.0));
  CHECK(precision(1.0, 4.0) == doctest::Approx(0.75));
  CHECK(precision(4.0, 4.0) == doctest::Approx(0.0));
  CHECK(precision(9.0, 4.0) == 0.0);  // clamped
  CHECK_THROWS_AS(precision(1.0, 0.0), std::domain_error);
}

TEST_CASE("f-measure is the harmonic mean with a zero guard") {
  CHECK(f_measure(0.5, 1.0) == doctest::Approx(2.0 / 3.0));
  CHECK(f_measure(1.0, 1.0) == doctest::Approx(1.0));
  CHECK(f_measure(0.0, 0.0) == 0.0);
}

TEST_CASE("coverage counts predicted test ratings") {
  CHECK(coverage(10, 10) == doctest::Approx(1.0));
  CHECK(coverage(5, 10) == doctest::Approx(0.5));
  CHECK_THROWS_AS(coverage(0, 0), DataError);
}

TEST_CASE("scoring maps both sides to the external scale") {
  PredictionMatrix pred;
  pred.n = 1;
  pred.m = 2;
  pred.values = {0.8, 0.6};  // externals 4.0, 3.0
  std::vector<RatingEdge> test{{0, 0, 1.0}, {0, 1, 0.4}};  // externals 5, 2

  MetricReport r = score_predictions(pred, test, true);
  const double want = std::sqrt((1.0 + 1.0) / 2.0);
  CHECK(r.rmse == doctest::Approx(want).epsilon(1e-12));
  CHECK(r.mae == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.coverage == 1.0);
  CHECK(r.n == 2);
  CHECK(r.rmse_max == 4.0);
  CHECK(r.precision == doctest::Approx(precision(r.rmse, 4.0)));
  CHECK(r.f_measure == doctest::Approx(f_measure(r.precision, r.coverage)));

  MetricReport internal = score_predictions(pred, test, false);
  CHECK(internal.rmse == doctest::Approx(want / 5.0).epsilon(1e-12));
  CHECK(internal.rmse_max == 0.8);

  CHECK_THROWS_AS(score_predictions(pred, {}, true), DataError);
}

TEST_CASE("full pipeline reports complete coverage on every split") {
  std::mt19937_64 rng(14);
  TrustBipartiteGraph g = random_graph(rng, 25, 18, 0.4);

  EvalOptions opt;
  opt.train.epochs = 40;
  for (double frac : {0.6, 0.75, 0.85}) {
    EvalPoint point;
    point.split_fraction = frac;
    MetricReport r = evaluate_point(g, point, opt);
    CHECK(r.coverage == 1.0);
    CHECK(r.n > 0);
    CHECK(r.rmse >= 0.0);
    CHECK(r.mae <= r.rmse + 1e-12);
    CHECK(r.f_measure ==
          doctest::Approx(f_measure(r.precision, r.coverage)));
  }
}

TEST_CASE("a singleton sweep grid reproduces the single evaluation") {
  std::mt19937_64 rng(15);
  TrustBipartiteGraph g = random_graph(rng, 20, 14, 0.4);

  EvalOptions opt;
  opt.train.epochs = 30;
  SweepGrid grid;  // singleton defaults
  auto rows = sweep(g, grid, opt);
  REQUIRE(rows.size() == 1);

  EvalPoint point;  // same defaults
  MetricReport direct = evaluate_point(g, point, opt);
  CHECK(rows[0].report.rmse == direct.rmse);
  CHECK(rows[0].report.mae == direct.mae);

  grid.betas = {0.5, 1.0};
  grid.alphas = {0.2, 0.4};
  grid.latent_dims = {2, 4};
  grid.centralities = {CentralityKind::Degree};
  rows = sweep(g, grid, opt);
  CHECK(rows.size() == 8);
}

TEST_CASE("sweep csv carries the header and one line per point") {
  std::mt19937_64 rng(16);
  TrustBipartiteGraph g = random_graph(rng, 15, 10, 0.45);
  EvalOptions opt;
  opt.train.epochs = 20;
  SweepGrid grid;
  grid.betas = {0.0, 1.0};
  grid.centralities = {CentralityKind::Degree};
  auto rows = sweep(g, grid, opt);

  std::ostringstream out;
  write_sweep_csv(rows, out);
  std::istringstream lines(out.str());
  std::string line;
  REQUIRE(std::getline(lines, line));
  CHECK(line == "beta,alpha,L,sim,cen,split,rmse,mae,coverage,precision,f");
  std::size_t count = 0;
  while (std::getline(lines, line)) ++count;
  CHECK(count == rows.size());
}
