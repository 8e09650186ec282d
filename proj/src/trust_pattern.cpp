#include "siotrust/trust_pattern.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <limits>
#include <unordered_map>

namespace siotrust {

std::string to_string(SimilarityKind k) {
  switch (k) {
    case SimilarityKind::Hellinger: return "hellinger";
    case SimilarityKind::Bayesian: return "bayesian";
    case SimilarityKind::Connection: return "connection";
  }
  return "?";
}

std::string to_string(CentralityKind k) {
  switch (k) {
    case CentralityKind::Degree: return "degree";
    case CentralityKind::BLC: return "blc";
    case CentralityKind::None: return "none";
  }
  return "?";
}

SimilarityKind similarity_from_string(const std::string& s) {
  if (s == "hellinger") return SimilarityKind::Hellinger;
  if (s == "bayesian") return SimilarityKind::Bayesian;
  if (s == "connection") return SimilarityKind::Connection;
  throw std::invalid_argument("unknown similarity: " + s);
}

CentralityKind centrality_from_string(const std::string& s) {
  if (s == "degree") return CentralityKind::Degree;
  if (s == "blc") return CentralityKind::BLC;
  if (s == "none") return CentralityKind::None;
  throw std::invalid_argument("unknown centrality: " + s);
}

double hellinger_similarity(const DistanceMatrix& dm, std::size_t i,
                            std::size_t j) {
  auto d = dm.distance(i, j);
  return d ? 1.0 - *d : 0.0;
}

namespace {

constexpr int kLevels = 5;  // rating-distance levels 0..4 on the 1..5 grid

int quantized_external(double internal) {
  const int q = static_cast<int>(std::lround(rating::to_external(internal)));
  return std::clamp(q, 1, 5);
}

// Marginal distribution of a trustor's ratings over the 1..5 grid;
// uniform when the trustor has no experiences.
std::array<double, kLevels> rating_marginal(const TrustBipartiteGraph& g,
                                            TrustorId u) {
  std::array<double, kLevels> p{};
  auto row = g.rating_row(u);
  if (row.empty()) {
    p.fill(1.0 / kLevels);
    return p;
  }
  for (const auto& [v, r] : row) p[quantized_external(r) - 1] += 1.0;
  for (double& x : p) x /= static_cast<double>(row.size());
  return p;
}

// Weighted Dirichlet posterior mean over distance levels: uniform prior
// of 1 per level plus the supplied pseudo-counts, weighted by 1 - l/4.
double level_functional(const std::array<double, kLevels>& counts) {
  double total = 0.0;
  for (double c : counts) total += c;
  double value = 0.0;
  for (int l = 0; l < kLevels; ++l) {
    const double weight = 1.0 - static_cast<double>(l) / 4.0;
    value += weight * (1.0 + counts[l]) / (kLevels + total);
  }
  return value;
}

}  // namespace

BayesianSimilarityDetail bayesian_similarity_detail(
    const TrustBipartiteGraph& g, TrustorId i, TrustorId j, double delta) {
  if (delta < 0.0) throw std::domain_error("delta must be >= 0");

  std::unordered_map<TrusteeId, int> ratings_i;
  for (const auto& [v, r] : g.rating_row(i))
    ratings_i.emplace(v, quantized_external(r));

  std::array<double, kLevels> evidence{};
  std::size_t co_rated = 0;
  for (const auto& [v, r] : g.rating_row(j)) {
    auto it = ratings_i.find(v);
    if (it == ratings_i.end()) continue;
    const int level = std::abs(it->second - quantized_external(r));
    evidence[level] += 1.0;
    ++co_rated;
  }

  const auto pi = rating_marginal(g, i);
  const auto pj = rating_marginal(g, j);
  std::array<double, kLevels> chance{};
  for (int a = 0; a < kLevels; ++a)
    for (int b = 0; b < kLevels; ++b)
      chance[std::abs(a - b)] += pi[a] * pj[b];
  for (double& c : chance) c *= static_cast<double>(co_rated);

  BayesianSimilarityDetail out;
  out.co_rated = co_rated;
  out.low_confidence = co_rated == 0;
  out.evidence_side = level_functional(evidence);
  out.chance_side = level_functional(chance);
  out.value = std::min(
      1.0, std::max(out.evidence_side - out.chance_side - delta, 0.0));
  return out;
}

double bayesian_similarity(const TrustBipartiteGraph& g, TrustorId i,
                           TrustorId j, double delta) {
  return bayesian_similarity_detail(g, i, j, delta).value;
}

double connection_similarity(const TrustorSocialNetwork& net, std::size_t i,
                             std::size_t j) {
  const auto& fi = net.friends(i);
  const auto& fj = net.friends(j);
  if (fi.empty()) return 0.0;
  std::size_t common = 0;
  auto a = fi.begin();
  auto b = fj.begin();
  while (a != fi.end() && b != fj.end()) {
    if (*a < *b) ++a;
    else if (*b < *a) ++b;
    else { ++common; ++a; ++b; }
  }
  return static_cast<double>(common) / static_cast<double>(fi.size());
}

double degree_centrality(const TrustorSocialNetwork& net, std::size_t i) {
  return static_cast<double>(net.degree(i));
}

std::vector<double> betweenness_centralities(const TrustorSocialNetwork& net) {
  const std::size_t n = net.size();
  std::vector<double> bc(n, 0.0);

  // Brandes' accumulation; undirected, so pair dependencies are halved.
  std::vector<std::size_t> sigma(n);
  std::vector<long long> dist(n);
  std::vector<double> delta(n);
  std::vector<std::vector<std::size_t>> pred(n);
  std::vector<std::size_t> order;
  order.reserve(n);

  for (std::size_t s = 0; s < n; ++s) {
    std::fill(sigma.begin(), sigma.end(), 0);
    std::fill(dist.begin(), dist.end(), -1);
    std::fill(delta.begin(), delta.end(), 0.0);
    for (auto& p : pred) p.clear();
    order.clear();

    sigma[s] = 1;
    dist[s] = 0;
    std::deque<std::size_t> queue{s};
    while (!queue.empty()) {
      const std::size_t v = queue.front();
      queue.pop_front();
      order.push_back(v);
      for (std::size_t w : net.friends(v)) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          queue.push_back(w);
        }
        if (dist[w] == dist[v] + 1) {
          sigma[w] += sigma[v];
          pred[w].push_back(v);
        }
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const std::size_t w = *it;
      for (std::size_t v : pred[w])
        delta[v] += static_cast<double>(sigma[v]) /
                    static_cast<double>(sigma[w]) * (1.0 + delta[w]);
      if (w != s) bc[w] += delta[w];
    }
  }
  for (double& x : bc) x /= 2.0;
  return bc;
}

std::vector<double> clustering_coefficients(const TrustorSocialNetwork& net) {
  const std::size_t n = net.size();
  std::vector<double> cc(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& f = net.friends(i);
    const std::size_t k = f.size();
    if (k < 2) continue;
    std::size_t links = 0;
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = a + 1; b < k; ++b)
        if (net.adjacent(f[a], f[b])) ++links;
    cc[i] = 2.0 * static_cast<double>(links) /
            (static_cast<double>(k) * static_cast<double>(k - 1));
  }
  return cc;
}

std::vector<double> blc_centralities(const TrustorSocialNetwork& net) {
  const auto bc = betweenness_centralities(net);
  const auto cc = clustering_coefficients(net);

  double cc_floor = std::numeric_limits<double>::infinity();
  for (double c : cc)
    if (c > 0.0) cc_floor = std::min(cc_floor, c);
  if (!std::isfinite(cc_floor)) cc_floor = 1.0;

  std::vector<double> blc(net.size());
  for (std::size_t i = 0; i < net.size(); ++i)
    blc[i] = bc[i] / (cc[i] > 0.0 ? cc[i] : cc_floor);
  return blc;
}

double blc_centrality(const TrustorSocialNetwork& net, std::size_t i) {
  return blc_centralities(net).at(i);
}

double TrustPatternMatrix::gamma(std::size_t i, std::size_t j) const {
  for (const auto& [k, v] : rows_.at(i))
    if (k == j) return v;
  return 0.0;
}

TrustPatternMatrix trust_pattern(const TrustBipartiteGraph& g,
                                 const TrustorSocialNetwork& net,
                                 const DistanceMatrix& dm,
                                 const TrustPatternOptions& opt) {
  if (opt.beta < 0.0 || opt.beta > 1.0)
    throw std::domain_error("beta must be in [0,1]");
  if (opt.centrality == CentralityKind::None && opt.beta != 1.0)
    throw std::invalid_argument("centrality 'none' requires beta = 1");

  const std::size_t n = net.size();
  TrustPatternMatrix gamma(n, opt.beta, false);

  std::vector<double> centrality;
  if (opt.beta < 1.0) {
    centrality = opt.centrality == CentralityKind::BLC
                     ? blc_centralities(net)
                     : [&] {
                         std::vector<double> deg(n);
                         for (std::size_t i = 0; i < n; ++i)
                           deg[i] = degree_centrality(net, i);
                         return deg;
                       }();
  }

  for (std::size_t i = 0; i < n; ++i) {
    const auto& friends = net.friends(i);
    if (friends.empty()) continue;

    std::vector<double> sims(friends.size(), 0.0);
    if (opt.beta > 0.0) {
      for (std::size_t a = 0; a < friends.size(); ++a) {
        switch (opt.similarity) {
          case SimilarityKind::Hellinger:
            sims[a] = hellinger_similarity(dm, i, friends[a]);
            break;
          case SimilarityKind::Bayesian:
            sims[a] = bayesian_similarity(g, i, friends[a],
                                          opt.bayesian_delta);
            break;
          case SimilarityKind::Connection:
            sims[a] = connection_similarity(net, i, friends[a]);
            break;
        }
      }
    }

    double sim_sum = 0.0;
    for (double s : sims) sim_sum += s;
    double cen_sum = 0.0;
    if (opt.beta < 1.0)
      for (std::size_t a = 0; a < friends.size(); ++a)
        cen_sum += centrality[friends[a]];

    const double uniform = 1.0 / static_cast<double>(friends.size());
    std::vector<std::pair<std::size_t, double>> row;
    row.reserve(friends.size());
    for (std::size_t a = 0; a < friends.size(); ++a) {
      const double sim_part = sim_sum > 0.0 ? sims[a] / sim_sum : uniform;
      const double cen_part =
          opt.beta < 1.0
              ? (cen_sum > 0.0 ? centrality[friends[a]] / cen_sum : uniform)
              : 0.0;
      row.emplace_back(friends[a],
                       opt.beta * sim_part + (1.0 - opt.beta) * cen_part);
    }
    gamma.set_row(i, std::move(row));
  }
  return gamma;
}

TrustPatternMatrix binary_trust_pattern(const TrustorSocialNetwork& net) {
  TrustPatternMatrix gamma(net.size(), 1.0, true);
  for (std::size_t i = 0; i < net.size(); ++i) {
    std::vector<std::pair<std::size_t, double>> row;
    row.reserve(net.friends(i).size());
    for (std::size_t j : net.friends(i)) row.emplace_back(j, 1.0);
    gamma.set_row(i, std::move(row));
  }
  return gamma;
}

}  // namespace siotrust
