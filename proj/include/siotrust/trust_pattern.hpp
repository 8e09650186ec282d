#ifndef SIOTRUST_TRUST_PATTERN_HPP
#define SIOTRUST_TRUST_PATTERN_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "siotrust/graph.hpp"
#include "siotrust/social_net.hpp"

namespace siotrust {

enum class SimilarityKind { Hellinger, Bayesian, Connection };
enum class CentralityKind { Degree, BLC, None };

std::string to_string(SimilarityKind k);
std::string to_string(CentralityKind k);
SimilarityKind similarity_from_string(const std::string& s);
CentralityKind centrality_from_string(const std::string& s);

/// 1 - Hell(i,j); undefined distances count as zero similarity.
double hellinger_similarity(const DistanceMatrix& dm, std::size_t i,
                            std::size_t j);

struct BayesianSimilarityDetail {
  double value = 0.0;
  double evidence_side = 0.0;  // BS'
  double chance_side = 0.0;    // BS''
  std::size_t co_rated = 0;
  bool low_confidence = false;  // no co-rated trustees, prior only
};

/// Dirichlet-evidence similarity over rating-distance levels 0..4.
/// Co-rated ratings (snapped to the integer 1..5 grid) feed level counts;
/// the chance side applies the same posterior-mean functional to expected
/// counts from the product of the two trustors' marginal rating
/// distributions.  Result is max(BS' - BS'' - delta, 0), capped at 1.
BayesianSimilarityDetail bayesian_similarity_detail(
    const TrustBipartiteGraph& g, TrustorId i, TrustorId j, double delta);

double bayesian_similarity(const TrustBipartiteGraph& g, TrustorId i,
                           TrustorId j, double delta = 0.0);

/// |F(i) intersect F(j)| / |F(i)|; zero when F(i) is empty.
double connection_similarity(const TrustorSocialNetwork& net, std::size_t i,
                             std::size_t j);

double degree_centrality(const TrustorSocialNetwork& net, std::size_t i);

/// Shortest-path betweenness, each unordered pair counted once.
std::vector<double> betweenness_centralities(const TrustorSocialNetwork& net);

/// Local clustering coefficients; nodes of degree < 2 get 0.
std::vector<double> clustering_coefficients(const TrustorSocialNetwork& net);

/// BC(i)/CC(i).  Zero clustering substitutes the smallest strictly
/// positive coefficient in the network, or 1 when there is none.
std::vector<double> blc_centralities(const TrustorSocialNetwork& net);
double blc_centrality(const TrustorSocialNetwork& net, std::size_t i);

/// Friend-restricted weights: Gamma(i,j) blends the row-normalized
/// similarity and centrality of friend j with weight beta.  Rows sum to 1
/// for trustors with friends; degenerate denominators fall back to the
/// uniform row.
class TrustPatternMatrix {
 public:
  TrustPatternMatrix() = default;
  TrustPatternMatrix(std::size_t n, double beta, bool binary)
      : rows_(n), beta_(beta), binary_(binary) {}

  std::size_t size() const { return rows_.size(); }
  double beta() const { return beta_; }
  bool binary() const { return binary_; }

  const std::vector<std::pair<std::size_t, double>>& row(std::size_t i) const {
    return rows_.at(i);
  }
  double gamma(std::size_t i, std::size_t j) const;
  void set_row(std::size_t i,
               std::vector<std::pair<std::size_t, double>> entries) {
    rows_.at(i) = std::move(entries);
  }

 private:
  std::vector<std::vector<std::pair<std::size_t, double>>> rows_;
  double beta_ = 1.0;
  bool binary_ = false;
};

struct TrustPatternOptions {
  SimilarityKind similarity = SimilarityKind::Hellinger;
  CentralityKind centrality = CentralityKind::None;
  double beta = 1.0;
  double bayesian_delta = 0.0;
};

TrustPatternMatrix trust_pattern(const TrustBipartiteGraph& g,
                                 const TrustorSocialNetwork& net,
                                 const DistanceMatrix& dm,
                                 const TrustPatternOptions& opt);

/// Gamma = 1 for every friend pair (the binary trust baseline).
TrustPatternMatrix binary_trust_pattern(const TrustorSocialNetwork& net);

}  // namespace siotrust

#endif  // SIOTRUST_TRUST_PATTERN_HPP
