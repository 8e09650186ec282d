#ifndef SIOTRUST_SOCIAL_NET_HPP
#define SIOTRUST_SOCIAL_NET_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "siotrust/graph.hpp"

namespace siotrust {

/// How the distance between two neighbor-degree distributions is taken.
/// Literal: (1/sqrt(2)) * ||p - q||_2, the formula as published.
/// Canonical: (1/sqrt(2)) * ||sqrt(p) - sqrt(q)||_2, the textbook
/// Hellinger distance.
enum class HellingerMode { Literal, Canonical };

/// Normalized distribution of a trustor's neighbor degrees over bins
/// 1..d (d = maximum trustee degree in the graph).  Trustors without any
/// experience carry the empty marker instead of a fabricated profile.
struct DegreeDistribution {
  std::vector<double> probs;  // probs[k-1] = share of neighbors with degree k
  bool empty = true;

  static DegreeDistribution empty_marker() { return {}; }
};

DegreeDistribution degree_distribution(const TrustBipartiteGraph& g,
                                       TrustorId u);

/// All trustor distributions sharing one bin layout 1..d.
std::vector<DegreeDistribution> degree_distributions(
    const TrustBipartiteGraph& g);

double hellinger_distance(const DegreeDistribution& p,
                          const DegreeDistribution& q,
                          HellingerMode mode = HellingerMode::Literal);

/// Symmetric pairwise distances with zero diagonal.  Pairs involving a
/// trustor with no experiences have no defined distance.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  DistanceMatrix(std::size_t n, std::vector<bool> has_profile)
      : n_(n),
        values_(n < 2 ? 0 : n * (n - 1) / 2, 0.0),
        has_profile_(std::move(has_profile)) {}

  std::size_t size() const { return n_; }
  bool has_profile(std::size_t i) const { return has_profile_[i]; }

  std::optional<double> distance(std::size_t i, std::size_t j) const {
    if (i >= n_ || j >= n_) throw std::out_of_range("trustor id out of range");
    if (!has_profile_[i] || !has_profile_[j]) return std::nullopt;
    if (i == j) return 0.0;
    return values_[tri_index(i, j)];
  }

  void set(std::size_t i, std::size_t j, double d) {
    values_[tri_index(i, j)] = d;
  }

  /// Defined off-diagonal distances, one per unordered pair.
  std::vector<double> off_diagonal() const;

 private:
  std::size_t tri_index(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    // packed upper triangle, row i, column j > i
    return i * n_ - i * (i + 1) / 2 + (j - i - 1);
  }

  std::size_t n_ = 0;
  std::vector<double> values_;
  std::vector<bool> has_profile_;
};

/// Friendship network over trustors: i and j are friends iff their
/// Hellinger distance is strictly below the threshold.
class TrustorSocialNetwork {
 public:
  TrustorSocialNetwork() = default;
  explicit TrustorSocialNetwork(std::size_t n)
      : n_(n), friends_(n), threshold_(0.0) {}

  std::size_t size() const { return n_; }
  double threshold() const { return threshold_; }
  void set_threshold(double t) { threshold_ = t; }

  bool adjacent(std::size_t i, std::size_t j) const;
  void add_edge(std::size_t i, std::size_t j);

  const std::vector<std::size_t>& friends(std::size_t i) const {
    if (i >= n_) throw std::out_of_range("trustor id out of range");
    return friends_[i];
  }
  std::size_t degree(std::size_t i) const { return friends(i).size(); }
  std::size_t edge_count() const;

 private:
  std::size_t n_ = 0;
  std::vector<std::vector<std::size_t>> friends_;  // sorted ascending
  double threshold_ = 0.0;
};

/// Work counters for the complexity guard on network construction.
struct SocialBuildStats {
  std::size_t distance_ops = 0;      // per-pair bin visits
  std::size_t distribution_ops = 0;  // per-edge visits building profiles
};

struct SocialBuildResult {
  TrustorSocialNetwork network;
  DistanceMatrix distances;
  SocialBuildStats stats;
};

SocialBuildResult build_social_network(
    const TrustBipartiteGraph& g, double threshold,
    HellingerMode mode = HellingerMode::Literal);

/// Adjacency derived from an existing distance matrix: edge iff the
/// defined distance is strictly below the threshold.
TrustorSocialNetwork network_from_distances(const DistanceMatrix& dm,
                                            double threshold);

/// pct-th percentile (linear interpolation) of the defined off-diagonal
/// distances, each unordered pair counted once.
double percentile_threshold(const DistanceMatrix& dm, double pct);

/// Builds the network with the threshold resolved from the pct-th
/// percentile of the pairwise distances themselves.
SocialBuildResult build_social_network_percentile(
    const TrustBipartiteGraph& g, double pct,
    HellingerMode mode = HellingerMode::Literal);

}  // namespace siotrust

#endif  // SIOTRUST_SOCIAL_NET_HPP
