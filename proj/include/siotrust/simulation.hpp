#ifndef SIOTRUST_SIMULATION_HPP
#define SIOTRUST_SIMULATION_HPP

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "siotrust/factorization.hpp"
#include "siotrust/graph.hpp"
#include "siotrust/social_net.hpp"
#include "siotrust/trust_pattern.hpp"

namespace siotrust {

enum class AttackKind {
  None,
  Whitewashing,
  SelfPromoting,
  BadMouthing,
  BallotStuffing,
  Opportunistic,
};

std::string to_string(AttackKind k);

enum class Role { Trustor, Trustee };

constexpr std::size_t kNoDuty = std::numeric_limits<std::size_t>::max();

struct NodeProfile {
  Role role = Role::Trustee;
  AttackKind attack = AttackKind::None;
  std::size_t group = 0;
  // trustee side
  double objective = 0.0;       // ground trustworthiness on the 1..5 scale
  double objective_post = 0.0;  // opportunistic second phase
  double switch_time = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> accomplices;  // trustor ids serving this trustee
  std::size_t rejoin_count = 0;
  // trustor side
  std::size_t duty = kNoDuty;  // trustee this attacker promotes, if any
};

struct SimConfig {
  std::size_t trustor_count = 100;
  std::size_t trustee_count = 70;
  std::size_t trustor_groups = 20;
  std::size_t trustee_groups = 14;
  double horizon_hours = 150.0;
  double retrain_period_hours = 24.0;
  double maliciousness = 0.30;  // fraction lambda of hostile nodes/groups

  // truncated-Pareto inter-contact gaps
  double pareto_shape = 1.5;
  double gap_min_hours = 0.5;
  double gap_max_hours = 12.0;

  double rating_noise = 0.25;  // honest-observation sigma, 1..5 scale
  double epsilon_hi = 0.5;     // exploration schedule endpoints
  double epsilon_lo = 0.05;
  std::size_t epochs_per_retrain = 80;
  bool forgetful_baseline = false;  // erase a whitewasher's history on rejoin

  std::uint64_t seed = 0;
  TrainConfig train;  // epochs field ignored; epochs_per_retrain rules
  double threshold_percentile = 20.0;
  HellingerMode mode = HellingerMode::Literal;
  SimilarityKind similarity = SimilarityKind::Hellinger;
  CentralityKind centrality = CentralityKind::None;
  double beta = 1.0;

  void validate() const;
};

struct SimWorld {
  SimConfig cfg;
  std::vector<NodeProfile> trustors;
  std::vector<NodeProfile> trustees;
  TrustBipartiteGraph graph;
  std::vector<std::size_t> tracked;  // benign, fixed-malicious, opportunistic,
                                     // whitewashing — whichever exist
};

/// Seeded population: ceil(lambda*m) malicious trustees with uniformly
/// drawn attack kinds (at least one steady-low and one opportunistic
/// enforced when any are malicious), ceil(lambda*groups) malicious
/// trustor groups assigned round-robin as accomplice pools.
SimWorld build_world(const SimConfig& cfg);

struct SimEvent {
  double time = 0.0;
  std::size_t trustor = 0;
};

/// Per-trustor truncated-Pareto inter-contact gaps, merged and sorted.
std::vector<SimEvent> schedule_interactions(const SimWorld& world,
                                            const SimConfig& cfg);

double truncated_pareto_sample(double shape, double lo, double hi,
                               std::mt19937_64& rng);
double truncated_pareto_mean(double shape, double lo, double hi);

/// Ground trustworthiness at a given time (opportunistic switch applied).
double objective_at(const NodeProfile& trustee, double time);

/// External 1..5 rating the trustor emits for this pairing: honest
/// observation with Gaussian noise, or the attack value.
double rate_experience(const SimWorld& world, std::size_t trustor,
                       std::size_t trustee, double time,
                       std::mt19937_64& rng);

/// Departure-and-rejoin under a persistent identifier.  Returns true when
/// the forgetful baseline erased the node's rating history instead.
bool whitewash(SimWorld& world, std::size_t trustee);

struct TrajectorySnapshot {
  double epoch_hour = 0.0;
  std::size_t trustee = 0;
  double mean_pred = 0.0;  // over benign trustors, external 1..5
  double band_lo = 0.0;    // empirical 90% band endpoints
  double band_hi = 0.0;
  double objective = 0.0;
};

struct SelectionRecord {
  double time = 0.0;
  std::size_t trustor = 0;
  std::size_t trustee = 0;
  double rating = 0.0;  // external 1..5
};

struct TrajectoryLog {
  std::vector<std::size_t> tracked;
  std::vector<TrajectorySnapshot> snapshots;  // per retrain x tracked
  std::vector<SelectionRecord> selections;
  std::vector<std::size_t> rejoin_counts;  // per trustee
};

/// Event loop with epsilon-greedy trustee selection over the latest
/// reconstruction and periodic retrains; all trustees start at the
/// middle of the range (3) until the first retrain.
TrajectoryLog run_simulation(SimWorld& world, const SimConfig& cfg);

/// build_world + schedule_interactions + run_simulation in one call.
TrajectoryLog simulate(const SimConfig& cfg);

struct UseCaseConfig {
  std::size_t honest_trustors = 60;
  std::size_t accomplice_count = 5;
  std::size_t group_size = 5;  // the objective-5 group is a single trustee
  std::size_t warmup_ratings = 12;
  std::size_t selections = 20;
  double rating_noise = 0.25;
  double epsilon_hi = 0.3;
  double epsilon_lo = 0.05;
  std::size_t epochs_initial = 120;
  std::size_t epochs_per_update = 30;
  std::uint64_t seed = 0;
  TrainConfig train;
  double threshold_percentile = 20.0;
  HellingerMode mode = HellingerMode::Literal;
  SimilarityKind similarity = SimilarityKind::Hellinger;
  CentralityKind centrality = CentralityKind::None;
  double beta = 1.0;

  void validate() const;
};

struct UseCaseResult {
  std::vector<double> group_objectives;  // {1, 1.5, ..., 5}
  std::size_t stuffed_group = 0;         // the objective-2 group
  std::size_t stuffed_trustee = 0;       // the promoted node inside it
  std::vector<std::size_t> trust_usage;  // selections per group
  std::vector<std::size_t> random_usage;
  std::vector<SelectionRecord> trust_selections;
  std::vector<SelectionRecord> random_selections;
};

/// Newcomer cold-start scenario: 9 trustee groups with objectives 1..5,
/// a ballot-stuffed objective-2 node, 20 mechanism-guided selections
/// against a uniform-random baseline.
UseCaseResult run_usecase(const UseCaseConfig& cfg);

/// `epoch_hour,trustee_id,mean_pred,band_lo,band_hi,objective`
void write_trajectory_csv(const TrajectoryLog& log, std::ostream& out);
/// `time,trustor,trustee,rating`
void write_selection_csv(const std::vector<SelectionRecord>& selections,
                         std::ostream& out);
/// `group,objective,trust_uses,random_uses`
void write_usecase_csv(const UseCaseResult& result, std::ostream& out);

}  // namespace siotrust

#endif  // SIOTRUST_SIMULATION_HPP
