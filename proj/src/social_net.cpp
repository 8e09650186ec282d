#include "siotrust/social_net.hpp"

#include <algorithm>
#include <cmath>

namespace siotrust {

namespace {

std::size_t max_trustee_degree(const TrustBipartiteGraph& g) {
  std::size_t d = 0;
  for (TrusteeId v = 0; v < g.trustee_count(); ++v)
    d = std::max(d, g.trustee_degree(v));
  return d;
}

DegreeDistribution profile_for(const TrustBipartiteGraph& g, TrustorId u,
                               std::size_t d, SocialBuildStats* stats) {
  auto row = g.rating_row(u);
  if (row.empty() || d == 0) return DegreeDistribution::empty_marker();

  DegreeDistribution dist;
  dist.empty = false;
  dist.probs.assign(d, 0.0);
  for (const auto& [v, r] : row) {
    // a rated trustee has degree >= 1, so bin k lives at index k-1
    dist.probs[g.trustee_degree(v) - 1] += 1.0;
    if (stats) ++stats->distribution_ops;
  }
  for (double& p : dist.probs) p /= static_cast<double>(row.size());
  return dist;
}

}  // namespace

DegreeDistribution degree_distribution(const TrustBipartiteGraph& g,
                                       TrustorId u) {
  return profile_for(g, u, max_trustee_degree(g), nullptr);
}

std::vector<DegreeDistribution> degree_distributions(
    const TrustBipartiteGraph& g) {
  const std::size_t d = max_trustee_degree(g);
  std::vector<DegreeDistribution> out;
  out.reserve(g.trustor_count());
  for (TrustorId u = 0; u < g.trustor_count(); ++u)
    out.push_back(profile_for(g, u, d, nullptr));
  return out;
}

double hellinger_distance(const DegreeDistribution& p,
                          const DegreeDistribution& q, HellingerMode mode) {
  if (p.empty || q.empty)
    throw std::invalid_argument(
        "hellinger distance undefined for empty-marker distribution");
  if (p.probs.size() != q.probs.size())
    throw std::invalid_argument("distribution length mismatch");

  double sum = 0.0;
  if (mode == HellingerMode::Literal) {
    for (std::size_t k = 0; k < p.probs.size(); ++k) {
      const double diff = p.probs[k] - q.probs[k];
      sum += diff * diff;
    }
  } else {
    for (std::size_t k = 0; k < p.probs.size(); ++k) {
      const double diff = std::sqrt(p.probs[k]) - std::sqrt(q.probs[k]);
      sum += diff * diff;
    }
  }
  return std::sqrt(sum) / std::sqrt(2.0);
}

std::vector<double> DistanceMatrix::off_diagonal() const {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < n_; ++i) {
    if (!has_profile_[i]) continue;
    for (std::size_t j = i + 1; j < n_; ++j)
      if (has_profile_[j]) out.push_back(values_[tri_index(i, j)]);
  }
  return out;
}

bool TrustorSocialNetwork::adjacent(std::size_t i, std::size_t j) const {
  if (i >= n_ || j >= n_) throw std::out_of_range("trustor id out of range");
  if (i == j) return false;
  const auto& f = friends_[i];
  return std::binary_search(f.begin(), f.end(), j);
}

void TrustorSocialNetwork::add_edge(std::size_t i, std::size_t j) {
  if (i >= n_ || j >= n_) throw std::out_of_range("trustor id out of range");
  if (i == j) throw std::invalid_argument("self-loops are not allowed");
  friends_[i].insert(
      std::upper_bound(friends_[i].begin(), friends_[i].end(), j), j);
  friends_[j].insert(
      std::upper_bound(friends_[j].begin(), friends_[j].end(), i), i);
}

std::size_t TrustorSocialNetwork::edge_count() const {
  std::size_t total = 0;
  for (const auto& f : friends_) total += f.size();
  return total / 2;
}

namespace {

// Profiles + pairwise distances; adjacency is derived separately so the
// threshold can come from the distances themselves.
void compute_distances(const TrustBipartiteGraph& g, HellingerMode mode,
                       SocialBuildResult& result) {
  const std::size_t n = g.trustor_count();
  const std::size_t d = max_trustee_degree(g);

  std::vector<DegreeDistribution> profiles;
  profiles.reserve(n);
  std::vector<bool> has_profile(n, false);
  for (TrustorId u = 0; u < n; ++u) {
    profiles.push_back(profile_for(g, u, d, &result.stats));
    has_profile[u] = !profiles.back().empty;
  }

  result.distances = DistanceMatrix(n, has_profile);

  const double sqrt2 = std::sqrt(2.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!has_profile[i]) continue;
    const auto& p = profiles[i].probs;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!has_profile[j]) continue;
      const auto& q = profiles[j].probs;
      double sum = 0.0;
      if (mode == HellingerMode::Literal) {
        for (std::size_t k = 0; k < d; ++k) {
          const double diff = p[k] - q[k];
          sum += diff * diff;
        }
      } else {
        for (std::size_t k = 0; k < d; ++k) {
          const double diff = std::sqrt(p[k]) - std::sqrt(q[k]);
          sum += diff * diff;
        }
      }
      result.stats.distance_ops += d;
      result.distances.set(i, j, std::sqrt(sum) / sqrt2);
    }
  }
}

}  // namespace

TrustorSocialNetwork network_from_distances(const DistanceMatrix& dm,
                                            double threshold) {
  if (threshold < 0.0 || threshold > 1.0)
    throw std::domain_error("threshold must be in [0,1]");
  const std::size_t n = dm.size();
  TrustorSocialNetwork net(n);
  net.set_threshold(threshold);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!dm.has_profile(i)) continue;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!dm.has_profile(j)) continue;
      if (*dm.distance(i, j) < threshold) net.add_edge(i, j);
    }
  }
  return net;
}

SocialBuildResult build_social_network(const TrustBipartiteGraph& g,
                                       double threshold, HellingerMode mode) {
  if (threshold <= 0.0 || threshold > 1.0)
    throw std::domain_error("threshold must be in (0,1]");
  SocialBuildResult result;
  compute_distances(g, mode, result);
  result.network = network_from_distances(result.distances, threshold);
  return result;
}

SocialBuildResult build_social_network_percentile(const TrustBipartiteGraph& g,
                                                  double pct,
                                                  HellingerMode mode) {
  SocialBuildResult result;
  compute_distances(g, mode, result);
  double threshold = 0.0;
  if (!result.distances.off_diagonal().empty())
    threshold = percentile_threshold(result.distances, pct);
  result.network = network_from_distances(result.distances, threshold);
  return result;
}

double percentile_threshold(const DistanceMatrix& dm, double pct) {
  if (pct <= 0.0 || pct >= 100.0)
    throw std::domain_error("percentile must be in (0,100)");
  std::vector<double> values = dm.off_diagonal();
  if (values.empty())
    throw std::invalid_argument(
        "distance matrix has no defined off-diagonal entries");

  std::sort(values.begin(), values.end());
  const double rank = pct / 100.0 * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(rank);
  if (lo + 1 >= values.size()) return values.back();
  const double frac = rank - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

}  // namespace siotrust
