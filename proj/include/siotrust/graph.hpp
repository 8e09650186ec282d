#ifndef SIOTRUST_GRAPH_HPP
#define SIOTRUST_GRAPH_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace siotrust {

using TrustorId = std::size_t;
using TrusteeId = std::size_t;

/// Raised on malformed or out-of-range input data (files, ratings).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace rating {

constexpr double kExternalMin = 1.0;
constexpr double kExternalMax = 5.0;

// Internal trust weights live in (0, 1]; the external scale is [1, 5].
// external -> internal is r/5 so that 5 maps to 1.0 and 1 stays strictly
// positive (0.2).
inline bool internal_valid(double r) { return r > 0.0 && r <= 1.0; }
inline bool external_valid(double r) {
  return r >= kExternalMin && r <= kExternalMax;
}

inline double from_external(double r) {
  if (!external_valid(r))
    throw std::domain_error("external rating outside [1,5]: " +
                            std::to_string(r));
  return r / kExternalMax;
}

inline double to_external(double r) { return r * kExternalMax; }

}  // namespace rating

struct RatingEdge {
  TrustorId trustor;
  TrusteeId trustee;
  double value;  // internal scale, (0, 1]
};

/// Sparse bipartite graph of trust experiences: trustors 0..n-1 rate
/// trustees 0..m-1 with weights in (0, 1].  At most one edge per pair;
/// a repeated experience overwrites the stored weight (or blends into it
/// when exponential averaging is enabled).
class TrustBipartiteGraph {
 public:
  TrustBipartiteGraph() = default;
  TrustBipartiteGraph(std::size_t n, std::size_t m) : n_(n), m_(m) {
    trustor_edges_.resize(n);
    trustee_degree_.resize(m, 0);
  }

  std::size_t trustor_count() const { return n_; }
  std::size_t trustee_count() const { return m_; }
  std::size_t edge_count() const { return edges_.size(); }

  /// Blend factor for repeated experiences; 0 keeps last-write-wins.
  void set_averaging_memory(double memory) {
    if (memory < 0.0 || memory >= 1.0)
      throw std::domain_error("averaging memory must be in [0,1)");
    averaging_memory_ = memory;
  }

  void add_experience(TrustorId u, TrusteeId v, double r);
  void add_experience_external(TrustorId u, TrusteeId v, double external) {
    add_experience(u, v, rating::from_external(external));
  }

  std::size_t trustee_degree(TrusteeId v) const {
    check_trustee(v);
    return trustee_degree_[v];
  }

  std::size_t trustor_degree(TrustorId u) const {
    check_trustor(u);
    return trustor_edges_[u].size();
  }

  /// Sparse row of (trustee, internal rating), ordered by insertion.
  std::vector<std::pair<TrusteeId, double>> rating_row(TrustorId u) const;

  /// All edges in insertion order (overwrites keep the original slot).
  const std::vector<RatingEdge>& edges() const { return edges_; }

  bool has_edge(TrustorId u, TrusteeId v) const {
    check_trustor(u);
    check_trustee(v);
    return pair_index_.count(key(u, v)) > 0;
  }

  double edge_value(TrustorId u, TrusteeId v) const {
    check_trustor(u);
    check_trustee(v);
    auto it = pair_index_.find(key(u, v));
    if (it == pair_index_.end()) throw std::out_of_range("no such edge");
    return edges_[it->second].value;
  }

  /// Drops every edge incident to trustee v (forgetful-rejoin support).
  void erase_trustee_edges(TrusteeId v);

  /// External string identifiers; empty when the graph was built
  /// programmatically, in which case labels default to decimal indices.
  const std::vector<std::string>& trustor_labels() const {
    return trustor_labels_;
  }
  const std::vector<std::string>& trustee_labels() const {
    return trustee_labels_;
  }
  std::string trustor_label(TrustorId u) const {
    check_trustor(u);
    return trustor_labels_.empty() ? std::to_string(u) : trustor_labels_[u];
  }
  std::string trustee_label(TrusteeId v) const {
    check_trustee(v);
    return trustee_labels_.empty() ? std::to_string(v) : trustee_labels_[v];
  }
  void set_labels(std::vector<std::string> trustors,
                  std::vector<std::string> trustees);

 private:
  void check_trustor(TrustorId u) const {
    if (u >= n_) throw std::out_of_range("trustor id out of range");
  }
  void check_trustee(TrusteeId v) const {
    if (v >= m_) throw std::out_of_range("trustee id out of range");
  }
  std::uint64_t key(TrustorId u, TrusteeId v) const {
    return static_cast<std::uint64_t>(u) * static_cast<std::uint64_t>(m_) + v;
  }

  std::size_t n_ = 0;
  std::size_t m_ = 0;
  double averaging_memory_ = 0.0;
  std::vector<RatingEdge> edges_;
  std::unordered_map<std::uint64_t, std::size_t> pair_index_;
  std::vector<std::vector<std::size_t>> trustor_edges_;  // edge slots per row
  std::vector<std::size_t> trustee_degree_;
  std::vector<std::string> trustor_labels_;
  std::vector<std::string> trustee_labels_;
};

/// Reads a TSV rating file (`trustor<TAB>trustee<TAB>rating`, external 1-5
/// scale, `#` comments).  Ids are arbitrary strings mapped to dense indices
/// by first appearance.
TrustBipartiteGraph read_ratings_tsv(std::istream& in);
TrustBipartiteGraph read_ratings_tsv_file(const std::string& path);

/// Writes edges back out on the external scale, one per line.
void write_ratings_tsv(const TrustBipartiteGraph& g, std::ostream& out);

}  // namespace siotrust

#endif  // SIOTRUST_GRAPH_HPP
