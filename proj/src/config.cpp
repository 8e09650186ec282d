#include "siotrust/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>

namespace siotrust {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key +
                                "' expects a number, got '" + value + "'");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    // stoull wraps negative input instead of rejecting it
    if (value.find('-') != std::string::npos)
      throw std::invalid_argument(value);
    std::size_t used = 0;
    const unsigned long long v = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key +
                                "' expects a non-negative integer, got '" +
                                value + "'");
  }
}

std::size_t parse_size(const std::string& key, const std::string& value) {
  return static_cast<std::size_t>(parse_u64(key, value));
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true" || value == "yes" || value == "on")
    return true;
  if (value == "0" || value == "false" || value == "no" || value == "off")
    return false;
  throw std::invalid_argument("config key '" + key +
                              "' expects a boolean, got '" + value + "'");
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

std::vector<double> parse_double_list(const std::string& key,
                                      const std::string& value) {
  std::vector<double> out;
  for (const std::string& item : split_list(value))
    out.push_back(parse_double(key, item));
  if (out.empty())
    throw std::invalid_argument("config key '" + key + "' expects a list");
  return out;
}

std::vector<std::size_t> parse_size_list(const std::string& key,
                                         const std::string& value) {
  std::vector<std::size_t> out;
  for (const std::string& item : split_list(value))
    out.push_back(parse_size(key, item));
  if (out.empty())
    throw std::invalid_argument("config key '" + key + "' expects a list");
  return out;
}

HellingerMode mode_from_string(const std::string& key,
                               const std::string& value) {
  if (value == "literal") return HellingerMode::Literal;
  if (value == "canonical") return HellingerMode::Canonical;
  throw std::invalid_argument("config key '" + key +
                              "' expects literal|canonical, got '" + value +
                              "'");
}

PredictorForm predictor_from_string(const std::string& key,
                                    const std::string& value) {
  if (value == "printed") return PredictorForm::Printed;
  if (value == "blended") return PredictorForm::Blended;
  throw std::invalid_argument("config key '" + key +
                              "' expects printed|blended, got '" + value +
                              "'");
}

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt(const std::vector<double>& vs) {
  std::string out;
  for (std::size_t k = 0; k < vs.size(); ++k)
    out += (k ? "," : "") + fmt(vs[k]);
  return out;
}

std::string fmt(const std::vector<std::size_t>& vs) {
  std::string out;
  for (std::size_t k = 0; k < vs.size(); ++k)
    out += (k ? "," : "") + std::to_string(vs[k]);
  return out;
}

}  // namespace

void ExperimentConfig::apply(const std::string& key,
                             const std::string& value) {
  if (key == "latent_dim") train.latent_dim = parse_size(key, value);
  else if (key == "alpha") train.alpha = parse_double(key, value);
  else if (key == "lambda_s") train.lambda_s = parse_double(key, value);
  else if (key == "lambda_r") train.lambda_r = parse_double(key, value);
  else if (key == "learning_rate") train.learning_rate = parse_double(key, value);
  else if (key == "epochs") train.epochs = parse_size(key, value);
  else if (key == "seed") train.seed = parse_u64(key, value);
  else if (key == "init_scale") train.init_scale = parse_double(key, value);
  else if (key == "threshold") threshold = parse_double(key, value);
  else if (key == "threshold_percentile") threshold_percentile = parse_double(key, value);
  else if (key == "hellinger_mode") mode = mode_from_string(key, value);
  else if (key == "similarity") similarity = similarity_from_string(value);
  else if (key == "centrality") centrality = centrality_from_string(value);
  else if (key == "beta") beta = parse_double(key, value);
  else if (key == "bayesian_delta") bayesian_delta = parse_double(key, value);
  else if (key == "binary_gamma") binary_gamma = parse_bool(key, value);
  else if (key == "split_fraction") split_fraction = parse_double(key, value);
  else if (key == "split_seed") split_seed = parse_u64(key, value);
  else if (key == "predictor") predictor = predictor_from_string(key, value);
  else if (key == "scale") {
    if (value == "external") internal_scale = false;
    else if (value == "internal") internal_scale = true;
    else
      throw std::invalid_argument(
          "config key 'scale' expects external|internal, got '" + value + "'");
  }
  else if (key == "sweep_betas") sweep_betas = parse_double_list(key, value);
  else if (key == "sweep_alphas") sweep_alphas = parse_double_list(key, value);
  else if (key == "sweep_latent_dims") sweep_latent_dims = parse_size_list(key, value);
  else if (key == "sweep_similarities") {
    sweep_similarities.clear();
    for (const std::string& item : split_list(value))
      sweep_similarities.push_back(similarity_from_string(item));
  }
  else if (key == "sweep_centralities") {
    sweep_centralities.clear();
    for (const std::string& item : split_list(value))
      sweep_centralities.push_back(centrality_from_string(item));
  }
  else if (key == "sweep_splits") sweep_splits = parse_double_list(key, value);
  else if (key == "trustor_count") trustor_count = parse_size(key, value);
  else if (key == "trustee_count") trustee_count = parse_size(key, value);
  else if (key == "trustor_groups") trustor_groups = parse_size(key, value);
  else if (key == "trustee_groups") trustee_groups = parse_size(key, value);
  else if (key == "horizon_hours") horizon_hours = parse_double(key, value);
  else if (key == "retrain_period_hours") retrain_period_hours = parse_double(key, value);
  else if (key == "maliciousness") maliciousness = parse_double(key, value);
  else if (key == "pareto_shape") pareto_shape = parse_double(key, value);
  else if (key == "gap_min_hours") gap_min_hours = parse_double(key, value);
  else if (key == "gap_max_hours") gap_max_hours = parse_double(key, value);
  else if (key == "rating_noise") rating_noise = parse_double(key, value);
  else if (key == "epsilon_hi") epsilon_hi = parse_double(key, value);
  else if (key == "epsilon_lo") epsilon_lo = parse_double(key, value);
  else if (key == "epochs_per_retrain") epochs_per_retrain = parse_size(key, value);
  else if (key == "forgetful_baseline") forgetful_baseline = parse_bool(key, value);
  else if (key == "honest_trustors") honest_trustors = parse_size(key, value);
  else if (key == "accomplice_count") accomplice_count = parse_size(key, value);
  else if (key == "group_size") group_size = parse_size(key, value);
  else if (key == "warmup_ratings") warmup_ratings = parse_size(key, value);
  else if (key == "selections") selections = parse_size(key, value);
  else if (key == "usecase_epsilon_hi") usecase_epsilon_hi = parse_double(key, value);
  else if (key == "usecase_epsilon_lo") usecase_epsilon_lo = parse_double(key, value);
  else if (key == "epochs_initial") epochs_initial = parse_size(key, value);
  else if (key == "epochs_per_update") epochs_per_update = parse_size(key, value);
  else throw std::invalid_argument("unknown config key: " + key);
}

std::string ExperimentConfig::serialize() const {
  std::string s;
  auto put = [&s](const std::string& k, const std::string& v) {
    s += k;
    s += '=';
    s += v;
    s += '\n';
  };
  put("accomplice_count", std::to_string(accomplice_count));
  put("alpha", fmt(train.alpha));
  put("bayesian_delta", fmt(bayesian_delta));
  put("beta", fmt(beta));
  put("binary_gamma", binary_gamma ? "1" : "0");
  put("centrality", to_string(centrality));
  put("epochs", std::to_string(train.epochs));
  put("epochs_initial", std::to_string(epochs_initial));
  put("epochs_per_retrain", std::to_string(epochs_per_retrain));
  put("epochs_per_update", std::to_string(epochs_per_update));
  put("epsilon_hi", fmt(epsilon_hi));
  put("epsilon_lo", fmt(epsilon_lo));
  put("forgetful_baseline", forgetful_baseline ? "1" : "0");
  put("gap_max_hours", fmt(gap_max_hours));
  put("gap_min_hours", fmt(gap_min_hours));
  put("group_size", std::to_string(group_size));
  put("hellinger_mode",
      mode == HellingerMode::Literal ? "literal" : "canonical");
  put("honest_trustors", std::to_string(honest_trustors));
  put("horizon_hours", fmt(horizon_hours));
  put("init_scale", fmt(train.init_scale));
  put("lambda_r", fmt(train.lambda_r));
  put("lambda_s", fmt(train.lambda_s));
  put("latent_dim", std::to_string(train.latent_dim));
  put("learning_rate", fmt(train.learning_rate));
  put("maliciousness", fmt(maliciousness));
  put("pareto_shape", fmt(pareto_shape));
  put("predictor",
      predictor == PredictorForm::Printed ? "printed" : "blended");
  put("rating_noise", fmt(rating_noise));
  put("retrain_period_hours", fmt(retrain_period_hours));
  put("scale", internal_scale ? "internal" : "external");
  put("seed", std::to_string(train.seed));
  put("selections", std::to_string(selections));
  put("similarity", to_string(similarity));
  put("split_fraction", fmt(split_fraction));
  put("split_seed", std::to_string(split_seed));
  {
    std::string sims, cens;
    for (std::size_t k = 0; k < sweep_similarities.size(); ++k)
      sims += (k ? "," : "") + to_string(sweep_similarities[k]);
    for (std::size_t k = 0; k < sweep_centralities.size(); ++k)
      cens += (k ? "," : "") + to_string(sweep_centralities[k]);
    put("sweep_alphas", fmt(sweep_alphas));
    put("sweep_betas", fmt(sweep_betas));
    put("sweep_centralities", cens);
    put("sweep_latent_dims", fmt(sweep_latent_dims));
    put("sweep_similarities", sims);
    put("sweep_splits", fmt(sweep_splits));
  }
  put("threshold", fmt(threshold));
  put("threshold_percentile", fmt(threshold_percentile));
  put("trustee_count", std::to_string(trustee_count));
  put("trustee_groups", std::to_string(trustee_groups));
  put("trustor_count", std::to_string(trustor_count));
  put("trustor_groups", std::to_string(trustor_groups));
  put("usecase_epsilon_hi", fmt(usecase_epsilon_hi));
  put("usecase_epsilon_lo", fmt(usecase_epsilon_lo));
  put("warmup_ratings", std::to_string(warmup_ratings));
  return s;
}

EvalOptions ExperimentConfig::eval_options() const {
  EvalOptions opt;
  opt.train = train;
  opt.split_seed = split_seed;
  opt.threshold_percentile = threshold_percentile;
  opt.mode = mode;
  opt.bayesian_delta = bayesian_delta;
  opt.predictor = predictor;
  opt.external_scale = !internal_scale;
  opt.binary_gamma = binary_gamma;
  return opt;
}

SweepGrid ExperimentConfig::sweep_grid() const {
  SweepGrid grid;
  grid.betas = sweep_betas;
  grid.alphas = sweep_alphas;
  grid.latent_dims = sweep_latent_dims;
  grid.similarities = sweep_similarities;
  grid.centralities = sweep_centralities;
  grid.split_fractions = sweep_splits;
  return grid;
}

SimConfig ExperimentConfig::sim_config() const {
  SimConfig sim;
  sim.trustor_count = trustor_count;
  sim.trustee_count = trustee_count;
  sim.trustor_groups = trustor_groups;
  sim.trustee_groups = trustee_groups;
  sim.horizon_hours = horizon_hours;
  sim.retrain_period_hours = retrain_period_hours;
  sim.maliciousness = maliciousness;
  sim.pareto_shape = pareto_shape;
  sim.gap_min_hours = gap_min_hours;
  sim.gap_max_hours = gap_max_hours;
  sim.rating_noise = rating_noise;
  sim.epsilon_hi = epsilon_hi;
  sim.epsilon_lo = epsilon_lo;
  sim.epochs_per_retrain = epochs_per_retrain;
  sim.forgetful_baseline = forgetful_baseline;
  sim.seed = train.seed;
  sim.train = train;
  sim.threshold_percentile = threshold_percentile;
  sim.mode = mode;
  sim.similarity = similarity;
  sim.centrality = centrality;
  sim.beta = beta;
  return sim;
}

UseCaseConfig ExperimentConfig::usecase_config() const {
  UseCaseConfig uc;
  uc.honest_trustors = honest_trustors;
  uc.accomplice_count = accomplice_count;
  uc.group_size = group_size;
  uc.warmup_ratings = warmup_ratings;
  uc.selections = selections;
  uc.rating_noise = rating_noise;
  uc.epsilon_hi = usecase_epsilon_hi;
  uc.epsilon_lo = usecase_epsilon_lo;
  uc.epochs_initial = epochs_initial;
  uc.epochs_per_update = epochs_per_update;
  uc.seed = train.seed;
  uc.train = train;
  uc.threshold_percentile = threshold_percentile;
  uc.mode = mode;
  uc.similarity = similarity;
  uc.centrality = centrality;
  uc.beta = beta;
  return uc;
}

std::vector<std::pair<std::string, std::string>> read_key_values(
    std::istream& in) {
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty() || text[0] == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0)
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected key=value");
    out.emplace_back(trim(text.substr(0, eq)), trim(text.substr(eq + 1)));
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> read_key_values_file(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config file: " + path);
  return read_key_values(in);
}

std::uint64_t fnv1a_hash(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string manifest_line(const ExperimentConfig& cfg, std::uint64_t seed) {
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(fnv1a_hash(cfg.serialize())));
  return "# manifest seed=" + std::to_string(seed) + " config=" + hex +
         " version=" + kVersion;
}

}  // namespace siotrust
