#include <sstream>

#include "doctest.h"
#include "siotrust/config.hpp"

using namespace siotrust;

TEST_CASE("settings land on the right fields") {
  ExperimentConfig cfg;
  cfg.apply("latent_dim", "6");
  cfg.apply("alpha", "0.25");
  cfg.apply("similarity", "bayesian");
  cfg.apply("centrality", "blc");
  cfg.apply("beta", "0.7");
  cfg.apply("hellinger_mode", "canonical");
  cfg.apply("predictor", "blended");
  cfg.apply("forgetful_baseline", "true");
  cfg.apply("maliciousness", "0.5");
  cfg.apply("sweep_betas", "0,0.5,1");
  cfg.apply("sweep_latent_dims", "2,4,8");

  CHECK(cfg.train.latent_dim == 6);
  CHECK(cfg.train.alpha == 0.25);
  CHECK(cfg.similarity == SimilarityKind::Bayesian);
  CHECK(cfg.centrality == CentralityKind::BLC);
  CHECK(cfg.beta == 0.7);
  CHECK(cfg.mode == HellingerMode::Canonical);
  CHECK(cfg.predictor == PredictorForm::Blended);
  CHECK(cfg.forgetful_baseline);
  CHECK(cfg.maliciousness == 0.5);
  CHECK(cfg.sweep_betas == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(cfg.sweep_latent_dims == std::vector<std::size_t>{2, 4, 8});
}

TEST_CASE("unknown keys and malformed values are rejected by name") {
  ExperimentConfig cfg;
  try {
    cfg.apply("latent_dmi", "4");
    FAIL("expected invalid_argument");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("latent_dmi") != std::string::npos);
  }
  CHECK_THROWS_AS(cfg.apply("alpha", "fast"), std::invalid_argument);
  CHECK_THROWS_AS(cfg.apply("epochs", "-3"), std::invalid_argument);
  CHECK_THROWS_AS(cfg.apply("similarity", "cosine"), std::invalid_argument);
  CHECK_THROWS_AS(cfg.apply("forgetful_baseline", "maybe"),
                  std::invalid_argument);
}

TEST_CASE("key-value files skip comments and report bad lines") {
  std::istringstream in(
      "# experiment setup\n"
      "\n"
      "alpha = 0.4\n"
      "beta=1\n"
      "  seed = 7  \n");
  auto pairs = read_key_values(in);
  REQUIRE(pairs.size() == 3);
  CHECK(pairs[0] == std::pair<std::string, std::string>{"alpha", "0.4"});
  CHECK(pairs[1] == std::pair<std::string, std::string>{"beta", "1"});
  CHECK(pairs[2] == std::pair<std::string, std::string>{"seed", "7"});

  std::istringstream bad("alpha = 0.4\nnot a setting\n");
  try {
    read_key_values(bad);
    FAIL("expected invalid_argument");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("serialization is a fixpoint and hashes stably") {
  ExperimentConfig cfg;
  cfg.apply("alpha", "0.3");
  cfg.apply("seed", "99");
  cfg.apply("sweep_alphas", "0.2,0.4");

  const std::string text = cfg.serialize();
  ExperimentConfig replay;
  std::istringstream in(text);
  for (const auto& [k, v] : read_key_values(in)) replay.apply(k, v);
  CHECK(replay.serialize() == text);
  CHECK(fnv1a_hash(replay.serialize()) == fnv1a_hash(text));

  ExperimentConfig other;
  other.apply("alpha", "0.31");
  CHECK(fnv1a_hash(other.serialize()) != fnv1a_hash(text));
}

TEST_CASE("manifest line carries seed, config hash and version") {
  ExperimentConfig cfg;
  const std::string line = manifest_line(cfg, 42);
  CHECK(line.rfind("# manifest seed=42 config=", 0) == 0);
  CHECK(line.find("version=0.1.0") != std::string::npos);

  const std::size_t at = line.find("config=") + 7;
  const std::string digest = line.substr(at, 16);
  CHECK(digest.size() == 16);
  for (char c : digest) CHECK(std::isxdigit(static_cast<unsigned char>(c)));

  // same config, same line; different seed or config, different line
  CHECK(manifest_line(cfg, 42) == line);
  CHECK(manifest_line(cfg, 43) != line);
  ExperimentConfig other;
  other.apply("alpha", "0.2");
  CHECK(manifest_line(other, 42) != line);
}

TEST_CASE("derived run configs inherit the shared knobs") {
  ExperimentConfig cfg;
  cfg.apply("seed", "5");
  cfg.apply("alpha", "0.35");
  cfg.apply("beta", "0.8");
  cfg.apply("centrality", "degree");
  cfg.apply("maliciousness", "0.4");
  cfg.apply("scale", "internal");
  cfg.apply("predictor", "blended");

  EvalOptions eval = cfg.eval_options();
  CHECK(eval.train.alpha == 0.35);
  CHECK_FALSE(eval.external_scale);
  CHECK(eval.predictor == PredictorForm::Blended);

  SimConfig sim = cfg.sim_config();
  CHECK(sim.seed == 5);
  CHECK(sim.maliciousness == 0.4);
  CHECK(sim.beta == 0.8);
  CHECK(sim.centrality == CentralityKind::Degree);
  sim.validate();

  UseCaseConfig uc = cfg.usecase_config();
  CHECK(uc.seed == 5);
  CHECK(uc.train.alpha == 0.35);
  uc.validate();
}
