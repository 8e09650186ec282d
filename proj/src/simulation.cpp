#include "siotrust/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

namespace siotrust {

std::string to_string(AttackKind k) {
  switch (k) {
    case AttackKind::None: return "none";
    case AttackKind::Whitewashing: return "whitewashing";
    case AttackKind::SelfPromoting: return "self-promoting";
    case AttackKind::BadMouthing: return "bad-mouthing";
    case AttackKind::BallotStuffing: return "ballot-stuffing";
    case AttackKind::Opportunistic: return "opportunistic";
  }
  return "none";
}

namespace {

// splitmix64 over (seed, stream): one master seed fans out into
// independent deterministic streams for world building, scheduling,
// the event loop, and per-retrain shuffles.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::size_t ceil_fraction(double fraction, std::size_t count) {
  // epsilon guard so 0.1 * 70 lands on 7, not 8
  const double raw = fraction * static_cast<double>(count) - 1e-9;
  if (raw <= 0.0) return 0;
  return static_cast<std::size_t>(std::ceil(raw));
}

double clamp_external(double v) { return std::clamp(v, 1.0, 5.0); }

double percentile_sorted(const std::vector<double>& sorted, double pct) {
  if (sorted.empty()) return 0.0;
  const double rank =
      pct / 100.0 * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(rank);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = rank - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

bool steady_malicious(AttackKind k) {
  return k == AttackKind::SelfPromoting || k == AttackKind::BadMouthing ||
         k == AttackKind::BallotStuffing;
}

bool stuffing_attack(AttackKind k) {
  return k == AttackKind::SelfPromoting || k == AttackKind::BallotStuffing;
}

}  // namespace

void SimConfig::validate() const {
  if (trustor_count == 0 || trustee_count == 0)
    throw std::domain_error("population counts must be positive");
  if (trustor_groups == 0 || trustor_count % trustor_groups != 0)
    throw std::domain_error("trustor count must divide into trustor groups");
  if (trustee_groups == 0 || trustee_count % trustee_groups != 0)
    throw std::domain_error("trustee count must divide into trustee groups");
  if (!(retrain_period_hours > 0.0) || !(horizon_hours > retrain_period_hours))
    throw std::domain_error("horizon must exceed the retrain period");
  if (maliciousness < 0.0 || maliciousness > 1.0)
    throw std::domain_error("maliciousness must be in [0,1]");
  if (!(gap_min_hours > 0.0) || !(gap_max_hours > gap_min_hours))
    throw std::domain_error("gap bounds must satisfy 0 < min < max");
  if (!(pareto_shape > 0.0))
    throw std::domain_error("pareto shape must be > 0");
  if (rating_noise < 0.0) throw std::domain_error("rating noise must be >= 0");
  if (epsilon_lo < 0.0 || epsilon_hi > 1.0 || epsilon_lo > epsilon_hi)
    throw std::domain_error("need 0 <= epsilon_lo <= epsilon_hi <= 1");
  if (epochs_per_retrain == 0)
    throw std::domain_error("epochs_per_retrain must be >= 1");
  if (threshold_percentile <= 0.0 || threshold_percentile >= 100.0)
    throw std::domain_error("threshold percentile must be in (0,100)");
  if (beta < 0.0 || beta > 1.0) throw std::domain_error("beta must be in [0,1]");
  train.validate();
}

SimWorld build_world(const SimConfig& cfg) {
  cfg.validate();
  SimWorld w;
  w.cfg = cfg;
  std::mt19937_64 rng(stream_seed(cfg.seed, 0));

  const std::size_t n = cfg.trustor_count;
  const std::size_t m = cfg.trustee_count;
  const std::size_t trustee_group_size = m / cfg.trustee_groups;
  const std::size_t trustor_group_size = n / cfg.trustor_groups;

  w.trustees.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    w.trustees[j].role = Role::Trustee;
    w.trustees[j].group = j / trustee_group_size;
  }

  // malicious trustees: random subset, kinds uniform over the five
  const std::size_t bad_trustees = ceil_fraction(cfg.maliciousness, m);
  std::vector<std::size_t> trustee_order(m);
  std::iota(trustee_order.begin(), trustee_order.end(), 0);
  std::shuffle(trustee_order.begin(), trustee_order.end(), rng);

  static constexpr AttackKind kKinds[5] = {
      AttackKind::Whitewashing, AttackKind::SelfPromoting,
      AttackKind::BadMouthing, AttackKind::BallotStuffing,
      AttackKind::Opportunistic};
  std::uniform_int_distribution<int> kind_pick(0, 4);
  std::vector<std::size_t> malicious(trustee_order.begin(),
                                     trustee_order.begin() + bad_trustees);
  std::sort(malicious.begin(), malicious.end());
  for (std::size_t j : malicious) w.trustees[j].attack = kKinds[kind_pick(rng)];

  // keep one steady-low and one opportunistic trustee trackable
  if (malicious.size() >= 2) {
    const bool any_steady = std::any_of(
        malicious.begin(), malicious.end(), [&](std::size_t j) {
          return steady_malicious(w.trustees[j].attack);
        });
    if (!any_steady)
      w.trustees[malicious.front()].attack = AttackKind::BallotStuffing;
    const bool any_opportunistic = std::any_of(
        malicious.begin(), malicious.end(), [&](std::size_t j) {
          return w.trustees[j].attack == AttackKind::Opportunistic;
        });
    if (!any_opportunistic)
      w.trustees[malicious.back()].attack = AttackKind::Opportunistic;
  }

  std::normal_distribution<double> jitter(0.0, 0.1);
  for (std::size_t j = 0; j < m; ++j) {
    NodeProfile& p = w.trustees[j];
    switch (p.attack) {
      case AttackKind::None:
        p.objective = std::clamp(4.5 + jitter(rng), 4.0, 5.0);
        break;
      case AttackKind::Opportunistic:
        p.objective = 4.5;
        p.objective_post = 2.5;
        p.switch_time = cfg.horizon_hours / 2.0;
        break;
      default:
        p.objective = std::clamp(1.5 + jitter(rng), 1.0, 2.0);
        if (p.attack == AttackKind::Whitewashing)
          p.switch_time = cfg.horizon_hours / 2.0;
        break;
    }
  }

  // malicious trustor groups, round-robin over attack targets
  w.trustors.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    w.trustors[i].role = Role::Trustor;
    w.trustors[i].group = i / trustor_group_size;
  }

  const std::size_t bad_groups = ceil_fraction(cfg.maliciousness,
                                               cfg.trustor_groups);
  std::vector<std::size_t> group_order(cfg.trustor_groups);
  std::iota(group_order.begin(), group_order.end(), 0);
  std::shuffle(group_order.begin(), group_order.end(), rng);
  std::vector<std::size_t> bad_group_ids(group_order.begin(),
                                         group_order.begin() + bad_groups);
  std::sort(bad_group_ids.begin(), bad_group_ids.end());

  std::vector<std::size_t> needing;  // trustees whose attack uses accomplices
  for (std::size_t j = 0; j < m; ++j)
    if (steady_malicious(w.trustees[j].attack)) needing.push_back(j);

  for (std::size_t k = 0; k < bad_group_ids.size() && !needing.empty(); ++k) {
    const std::size_t target = needing[k % needing.size()];
    const AttackKind kind = w.trustees[target].attack;
    const std::size_t g = bad_group_ids[k];
    for (std::size_t i = g * trustor_group_size;
         i < (g + 1) * trustor_group_size; ++i) {
      w.trustors[i].attack = kind;
      w.trustors[i].duty = target;
      w.trustees[target].accomplices.push_back(i);
    }
  }

  w.graph = TrustBipartiteGraph(n, m);

  // tracked trustees: benign, fixed-malicious, opportunistic, whitewashing
  auto first_trustee = [&](auto&& pred) {
    for (std::size_t j = 0; j < m; ++j)
      if (pred(w.trustees[j].attack)) return j;
    return m;  // absent
  };
  const std::size_t picks[4] = {
      first_trustee([](AttackKind k) { return k == AttackKind::None; }),
      first_trustee(steady_malicious),
      first_trustee([](AttackKind k) { return k == AttackKind::Opportunistic; }),
      first_trustee([](AttackKind k) { return k == AttackKind::Whitewashing; }),
  };
  for (std::size_t j : picks)
    if (j < m && std::find(w.tracked.begin(), w.tracked.end(), j) ==
                     w.tracked.end())
      w.tracked.push_back(j);
  return w;
}

double truncated_pareto_sample(double shape, double lo, double hi,
                               std::mt19937_64& rng) {
  if (!(shape > 0.0) || !(lo > 0.0) || !(hi > lo))
    throw std::domain_error("need shape > 0 and 0 < lo < hi");
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double cut = 1.0 - std::pow(lo / hi, shape);
  return lo / std::pow(1.0 - u01(rng) * cut, 1.0 / shape);
}

double truncated_pareto_mean(double shape, double lo, double hi) {
  if (!(shape > 0.0) || !(lo > 0.0) || !(hi > lo))
    throw std::domain_error("need shape > 0 and 0 < lo < hi");
  const double cut = 1.0 - std::pow(lo / hi, shape);
  const double c = shape * std::pow(lo, shape) / cut;
  if (shape == 1.0) return c * std::log(hi / lo);
  return c * (std::pow(lo, 1.0 - shape) - std::pow(hi, 1.0 - shape)) /
         (shape - 1.0);
}

std::vector<SimEvent> schedule_interactions(const SimWorld& world,
                                            const SimConfig& cfg) {
  std::mt19937_64 rng(stream_seed(cfg.seed, 1));
  std::vector<SimEvent> events;
  for (std::size_t i = 0; i < world.trustors.size(); ++i) {
    double t = 0.0;
    while (true) {
      t += truncated_pareto_sample(cfg.pareto_shape, cfg.gap_min_hours,
                                   cfg.gap_max_hours, rng);
      if (t > cfg.horizon_hours) break;
      events.push_back({t, i});
    }
  }
  std::sort(events.begin(), events.end(),
            [](const SimEvent& a, const SimEvent& b) {
              if (a.time != b.time) return a.time < b.time;
              return a.trustor < b.trustor;
            });
  return events;
}

double objective_at(const NodeProfile& trustee, double time) {
  if (trustee.attack == AttackKind::Opportunistic &&
      time >= trustee.switch_time)
    return trustee.objective_post;
  return trustee.objective;
}

double rate_experience(const SimWorld& world, std::size_t trustor,
                       std::size_t trustee, double time,
                       std::mt19937_64& rng) {
  const NodeProfile& tor = world.trustors.at(trustor);
  const NodeProfile& tee = world.trustees.at(trustee);

  if (tor.attack == AttackKind::BadMouthing &&
      tee.attack == AttackKind::None)
    return 1.0;
  if (stuffing_attack(tor.attack) && tor.duty == trustee) return 5.0;

  double v = objective_at(tee, time);
  if (world.cfg.rating_noise > 0.0) {
    std::normal_distribution<double> noise(0.0, world.cfg.rating_noise);
    v += noise(rng);
  }
  return clamp_external(v);
}

bool whitewash(SimWorld& world, std::size_t trustee) {
  NodeProfile& p = world.trustees.at(trustee);
  p.rejoin_count += 1;
  if (world.cfg.forgetful_baseline) {
    world.graph.erase_trustee_edges(trustee);
    return true;
  }
  return false;
}

namespace {

// Shared epsilon-greedy machinery for the event loop and the use case.
struct SelectionModel {
  bool trained = false;
  PredictionMatrix pred;          // blended reconstruction
  std::vector<double> col_mean;   // fallback for trustors without ratings

  void refresh(const LatentFactors& factors, const TrustPatternMatrix& gamma,
               double alpha, const TrustBipartiteGraph& g) {
    pred = predict_blended(factors, gamma, alpha);
    trained = true;
    col_mean.assign(pred.m, 0.0);
    std::size_t rated_trustors = 0;
    for (std::size_t i = 0; i < pred.n; ++i) {
      if (g.trustor_degree(i) == 0) continue;
      ++rated_trustors;
      for (std::size_t j = 0; j < pred.m; ++j) col_mean[j] += pred.at(i, j);
    }
    if (rated_trustors > 0)
      for (double& v : col_mean) v /= static_cast<double>(rated_trustors);
  }

  // honest policy: explore unexplored uniformly, else exploit the
  // highest-scoring trustee (ties to the smallest id)
  std::size_t select(const TrustBipartiteGraph& g, std::size_t trustor,
                     double epsilon, std::mt19937_64& rng) const {
    const std::size_t m = g.trustee_count();
    auto uniform_pick = [&](std::size_t bound) {
      std::uniform_int_distribution<std::size_t> d(0, bound - 1);
      return d(rng);
    };
    if (!trained) return uniform_pick(m);

    std::bernoulli_distribution explore(epsilon);
    if (explore(rng)) {
      std::vector<std::size_t> unexplored;
      for (std::size_t j = 0; j < m; ++j)
        if (!g.has_edge(trustor, j)) unexplored.push_back(j);
      if (!unexplored.empty())
        return unexplored[uniform_pick(unexplored.size())];
      return uniform_pick(m);
    }

    const bool cold = g.trustor_degree(trustor) == 0;
    std::size_t best = 0;
    double best_score = -1.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double s = cold ? col_mean[j] : pred.at(trustor, j);
      if (s > best_score) {
        best_score = s;
        best = j;
      }
    }
    return best;
  }
};

}  // namespace

TrajectoryLog run_simulation(SimWorld& world, const SimConfig& cfg) {
  cfg.validate();
  std::vector<SimEvent> events = schedule_interactions(world, cfg);
  std::mt19937_64 rng(stream_seed(cfg.seed, 2));

  TrajectoryLog log;
  log.tracked = world.tracked;

  std::vector<std::size_t> benign_trustors;
  for (std::size_t i = 0; i < world.trustors.size(); ++i)
    if (world.trustors[i].attack == AttackKind::None)
      benign_trustors.push_back(i);
  std::vector<std::size_t> benign_trustees;
  for (std::size_t j = 0; j < world.trustees.size(); ++j)
    if (world.trustees[j].attack == AttackKind::None)
      benign_trustees.push_back(j);

  // everyone starts at the middle of the trustworthiness range
  for (std::size_t j : log.tracked)
    log.snapshots.push_back(
        {0.0, j, 3.0, 3.0, 3.0, objective_at(world.trustees[j], 0.0)});

  enum MarkKind { kWhitewash = 0, kRetrain = 1 };
  struct Mark {
    double time;
    int kind;
    std::size_t payload;  // trustee id / retrain index
  };
  std::vector<Mark> marks;
  for (std::size_t j = 0; j < world.trustees.size(); ++j)
    if (world.trustees[j].attack == AttackKind::Whitewashing)
      marks.push_back({world.trustees[j].switch_time, kWhitewash, j});
  for (std::size_t k = 1;; ++k) {
    const double t = static_cast<double>(k) * cfg.retrain_period_hours;
    if (t > cfg.horizon_hours + 1e-9) break;
    marks.push_back({t, kRetrain, k});
  }
  std::sort(marks.begin(), marks.end(), [](const Mark& a, const Mark& b) {
    if (a.time != b.time) return a.time < b.time;
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.payload < b.payload;
  });

  LatentFactors factors;
  SelectionModel model;
  std::vector<bool> reset_pending(world.trustees.size(), false);

  auto snapshot = [&](double now) {
    std::vector<double> vals;
    for (std::size_t j : log.tracked) {
      vals.clear();
      vals.reserve(benign_trustors.size());
      double sum = 0.0;
      for (std::size_t i : benign_trustors) {
        const double v = clamp_external(5.0 * model.pred.at(i, j));
        vals.push_back(v);
        sum += v;
      }
      std::sort(vals.begin(), vals.end());
      log.snapshots.push_back({now, j,
                               sum / static_cast<double>(vals.size()),
                               percentile_sorted(vals, 5.0),
                               percentile_sorted(vals, 95.0),
                               objective_at(world.trustees[j], now)});
    }
  };

  auto retrain = [&](double now, std::size_t index) {
    SocialBuildResult social = build_social_network_percentile(
        world.graph, cfg.threshold_percentile, cfg.mode);
    TrustPatternOptions tp;
    tp.similarity = cfg.similarity;
    tp.centrality = cfg.centrality;
    tp.beta = cfg.beta;
    TrustPatternMatrix gamma =
        trust_pattern(world.graph, social.network, social.distances, tp);

    if (!model.trained) {
      TrainConfig tc = cfg.train;
      tc.epochs = cfg.epochs_per_retrain;
      tc.seed = stream_seed(cfg.seed, 99);
      factors = sgd_train(world.graph, gamma, tc);
    } else {
      std::normal_distribution<double> init(0.0, cfg.train.init_scale);
      for (std::size_t j = 0; j < reset_pending.size(); ++j) {
        if (!reset_pending[j]) continue;
        double* rj = factors.trustee_vector(j);
        for (std::size_t k = 0; k < factors.latent_dim(); ++k)
          rj[k] = init(rng);
        reset_pending[j] = false;
      }
      sgd_continue(factors, world.graph, gamma, cfg.epochs_per_retrain,
                   stream_seed(cfg.seed, 100 + index));
    }
    model.refresh(factors, gamma, cfg.train.alpha, world.graph);
    snapshot(now);
  };

  auto select_trustee = [&](const SimEvent& ev) -> std::size_t {
    const NodeProfile& tor = world.trustors[ev.trustor];
    if (stuffing_attack(tor.attack) && tor.duty != kNoDuty) return tor.duty;
    if (tor.attack == AttackKind::BadMouthing && !benign_trustees.empty()) {
      std::uniform_int_distribution<std::size_t> d(0,
                                                   benign_trustees.size() - 1);
      return benign_trustees[d(rng)];
    }
    const double eps =
        cfg.epsilon_hi + (cfg.epsilon_lo - cfg.epsilon_hi) *
                             std::min(ev.time / cfg.horizon_hours, 1.0);
    return model.select(world.graph, ev.trustor, eps, rng);
  };

  std::size_t ei = 0, mi = 0;
  while (ei < events.size() || mi < marks.size()) {
    const bool take_mark =
        mi < marks.size() &&
        (ei >= events.size() || marks[mi].time <= events[ei].time);
    if (take_mark) {
      const Mark& mk = marks[mi++];
      if (mk.kind == kWhitewash) {
        if (whitewash(world, mk.payload)) reset_pending[mk.payload] = true;
      } else {
        retrain(mk.time, mk.payload);
      }
    } else {
      const SimEvent& ev = events[ei++];
      const std::size_t j = select_trustee(ev);
      const double r = rate_experience(world, ev.trustor, j, ev.time, rng);
      world.graph.add_experience_external(ev.trustor, j, r);
      log.selections.push_back({ev.time, ev.trustor, j, r});
    }
  }

  log.rejoin_counts.reserve(world.trustees.size());
  for (const NodeProfile& p : world.trustees)
    log.rejoin_counts.push_back(p.rejoin_count);
  return log;
}

TrajectoryLog simulate(const SimConfig& cfg) {
  SimWorld world = build_world(cfg);
  return run_simulation(world, cfg);
}

void UseCaseConfig::validate() const {
  if (honest_trustors == 0) throw std::domain_error("need honest trustors");
  if (group_size == 0) throw std::domain_error("group size must be >= 1");
  if (selections == 0) throw std::domain_error("need at least one selection");
  if (epochs_initial == 0 || epochs_per_update == 0)
    throw std::domain_error("epoch counts must be >= 1");
  const std::size_t trustees = 8 * group_size + 1;
  if (warmup_ratings == 0 || warmup_ratings > trustees)
    throw std::domain_error("warmup ratings per trustor out of range");
  if (rating_noise < 0.0) throw std::domain_error("rating noise must be >= 0");
  if (epsilon_lo < 0.0 || epsilon_hi > 1.0 || epsilon_lo > epsilon_hi)
    throw std::domain_error("need 0 <= epsilon_lo <= epsilon_hi <= 1");
  if (threshold_percentile <= 0.0 || threshold_percentile >= 100.0)
    throw std::domain_error("threshold percentile must be in (0,100)");
  if (beta < 0.0 || beta > 1.0) throw std::domain_error("beta must be in [0,1]");
  train.validate();
}

UseCaseResult run_usecase(const UseCaseConfig& cfg) {
  cfg.validate();

  UseCaseResult result;
  result.group_objectives = {1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0};
  result.stuffed_group = 2;  // the objective-2 group

  // groups 0..7 hold group_size trustees; the objective-5 group is one node
  const std::size_t m = 8 * cfg.group_size + 1;
  std::vector<double> objective(m);
  std::vector<std::size_t> group_of(m);
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t g = std::min<std::size_t>(j / cfg.group_size, 8);
    group_of[j] = g;
    objective[j] = result.group_objectives[g];
  }
  result.stuffed_trustee = result.stuffed_group * cfg.group_size;

  const std::size_t focal = 0;
  const std::size_t n = 1 + cfg.honest_trustors + cfg.accomplice_count;

  std::mt19937_64 rng(stream_seed(cfg.seed, 10));
  std::normal_distribution<double> noise(0.0, cfg.rating_noise);
  auto honest_rating = [&](std::size_t j) {
    double v = objective[j];
    if (cfg.rating_noise > 0.0) v += noise(rng);
    return clamp_external(v);
  };

  TrustBipartiteGraph graph(n, m);
  std::vector<std::size_t> trustee_ids(m);
  std::iota(trustee_ids.begin(), trustee_ids.end(), 0);

  // warmup: honest trustors rate random trustees, accomplices promote
  // the stuffed node and blend in with honest cover ratings
  for (std::size_t i = 1; i <= cfg.honest_trustors; ++i) {
    std::shuffle(trustee_ids.begin(), trustee_ids.end(), rng);
    for (std::size_t k = 0; k < cfg.warmup_ratings; ++k)
      graph.add_experience_external(i, trustee_ids[k],
                                    honest_rating(trustee_ids[k]));
  }
  for (std::size_t a = 0; a < cfg.accomplice_count; ++a) {
    const std::size_t i = 1 + cfg.honest_trustors + a;
    graph.add_experience_external(i, result.stuffed_trustee, 5.0);
    std::shuffle(trustee_ids.begin(), trustee_ids.end(), rng);
    std::size_t placed = 0;
    for (std::size_t k = 0; k < m && placed + 1 < cfg.warmup_ratings; ++k) {
      if (trustee_ids[k] == result.stuffed_trustee) continue;
      graph.add_experience_external(i, trustee_ids[k],
                                    honest_rating(trustee_ids[k]));
      ++placed;
    }
  }

  // trust arm: retrain after every selection so the newcomer's history
  // feeds back into the next pick
  LatentFactors factors;
  SelectionModel model;
  auto retrain = [&](std::size_t index, std::size_t epochs) {
    SocialBuildResult social = build_social_network_percentile(
        graph, cfg.threshold_percentile, cfg.mode);
    TrustPatternOptions tp;
    tp.similarity = cfg.similarity;
    tp.centrality = cfg.centrality;
    tp.beta = cfg.beta;
    TrustPatternMatrix gamma =
        trust_pattern(graph, social.network, social.distances, tp);
    if (!model.trained) {
      TrainConfig tc = cfg.train;
      tc.epochs = epochs;
      tc.seed = stream_seed(cfg.seed, 99);
      factors = sgd_train(graph, gamma, tc);
    } else {
      sgd_continue(factors, graph, gamma, epochs,
                   stream_seed(cfg.seed, 100 + index));
    }
    model.refresh(factors, gamma, cfg.train.alpha, graph);
  };

  retrain(0, cfg.epochs_initial);
  result.trust_usage.assign(9, 0);
  const double steps =
      cfg.selections > 1 ? static_cast<double>(cfg.selections - 1) : 1.0;
  for (std::size_t k = 0; k < cfg.selections; ++k) {
    const double eps = cfg.epsilon_hi + (cfg.epsilon_lo - cfg.epsilon_hi) *
                                            static_cast<double>(k) / steps;
    const std::size_t j = model.select(graph, focal, eps, rng);
    const double r = honest_rating(j);
    graph.add_experience_external(focal, j, r);
    result.trust_selections.push_back({static_cast<double>(k), focal, j, r});
    result.trust_usage[group_of[j]] += 1;
    retrain(k + 1, cfg.epochs_per_update);
  }

  // random baseline: same newcomer, uniform picks, no mechanism
  std::mt19937_64 baseline_rng(stream_seed(cfg.seed, 12));
  std::normal_distribution<double> baseline_noise(0.0, cfg.rating_noise);
  std::uniform_int_distribution<std::size_t> any_trustee(0, m - 1);
  result.random_usage.assign(9, 0);
  for (std::size_t k = 0; k < cfg.selections; ++k) {
    const std::size_t j = any_trustee(baseline_rng);
    double v = objective[j];
    if (cfg.rating_noise > 0.0) v += baseline_noise(baseline_rng);
    const double r = clamp_external(v);
    result.random_selections.push_back({static_cast<double>(k), focal, j, r});
    result.random_usage[group_of[j]] += 1;
  }
  return result;
}

namespace {

std::string fmt_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

void write_trajectory_csv(const TrajectoryLog& log, std::ostream& out) {
  out << "epoch_hour,trustee_id,mean_pred,band_lo,band_hi,objective\n";
  for (const TrajectorySnapshot& s : log.snapshots)
    out << fmt_double(s.epoch_hour) << ',' << s.trustee << ','
        << fmt_double(s.mean_pred) << ',' << fmt_double(s.band_lo) << ','
        << fmt_double(s.band_hi) << ',' << fmt_double(s.objective) << '\n';
}

void write_selection_csv(const std::vector<SelectionRecord>& selections,
                         std::ostream& out) {
  out << "time,trustor,trustee,rating\n";
  for (const SelectionRecord& s : selections)
    out << fmt_double(s.time) << ',' << s.trustor << ',' << s.trustee << ','
        << fmt_double(s.rating) << '\n';
}

void write_usecase_csv(const UseCaseResult& result, std::ostream& out) {
  out << "group,objective,trust_uses,random_uses\n";
  for (std::size_t g = 0; g < result.group_objectives.size(); ++g)
    out << g << ',' << fmt_double(result.group_objectives[g]) << ','
        << result.trust_usage[g] << ',' << result.random_usage[g] << '\n';
}

}  // namespace siotrust
