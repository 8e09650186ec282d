#include "siotrust/graph.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace siotrust {

void TrustBipartiteGraph::add_experience(TrustorId u, TrusteeId v, double r) {
  check_trustor(u);
  check_trustee(v);
  if (!rating::internal_valid(r))
    throw std::domain_error("rating outside (0,1]: " + std::to_string(r));

  auto [it, inserted] = pair_index_.try_emplace(key(u, v), edges_.size());
  if (inserted) {
    edges_.push_back({u, v, r});
    trustor_edges_[u].push_back(it->second);
    ++trustee_degree_[v];
  } else {
    double& slot = edges_[it->second].value;
    slot = averaging_memory_ > 0.0
               ? averaging_memory_ * slot + (1.0 - averaging_memory_) * r
               : r;
  }
}

std::vector<std::pair<TrusteeId, double>> TrustBipartiteGraph::rating_row(
    TrustorId u) const {
  check_trustor(u);
  std::vector<std::pair<TrusteeId, double>> row;
  row.reserve(trustor_edges_[u].size());
  for (std::size_t slot : trustor_edges_[u])
    row.emplace_back(edges_[slot].trustee, edges_[slot].value);
  return row;
}

void TrustBipartiteGraph::erase_trustee_edges(TrusteeId v) {
  check_trustee(v);
  std::vector<RatingEdge> kept;
  kept.reserve(edges_.size());
  for (const RatingEdge& e : edges_)
    if (e.trustee != v) kept.push_back(e);

  edges_ = std::move(kept);
  pair_index_.clear();
  for (auto& row : trustor_edges_) row.clear();
  trustee_degree_.assign(m_, 0);
  for (std::size_t slot = 0; slot < edges_.size(); ++slot) {
    const RatingEdge& e = edges_[slot];
    pair_index_.emplace(key(e.trustor, e.trustee), slot);
    trustor_edges_[e.trustor].push_back(slot);
    ++trustee_degree_[e.trustee];
  }
}

void TrustBipartiteGraph::set_labels(std::vector<std::string> trustors,
                                     std::vector<std::string> trustees) {
  if (trustors.size() != n_ || trustees.size() != m_)
    throw std::invalid_argument("label vectors must match node counts");
  trustor_labels_ = std::move(trustors);
  trustee_labels_ = std::move(trustees);
}

namespace {

std::size_t intern(std::unordered_map<std::string, std::size_t>& index,
                   std::vector<std::string>& labels, const std::string& id) {
  auto [it, inserted] = index.try_emplace(id, labels.size());
  if (inserted) labels.push_back(id);
  return it->second;
}

}  // namespace

TrustBipartiteGraph read_ratings_tsv(std::istream& in) {
  struct Record {
    std::size_t u, v;
    double external;
    std::size_t line_no;
  };
  std::unordered_map<std::string, std::size_t> trustor_index, trustee_index;
  std::vector<std::string> trustor_labels, trustee_labels;
  std::vector<Record> records;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;

    auto tab1 = line.find('\t');
    auto tab2 = tab1 == std::string::npos ? std::string::npos
                                          : line.find('\t', tab1 + 1);
    if (tab1 == std::string::npos || tab2 == std::string::npos)
      throw DataError("line " + std::to_string(line_no) +
                      ": expected trustor<TAB>trustee<TAB>rating");

    std::string u_id = line.substr(0, tab1);
    std::string v_id = line.substr(tab1 + 1, tab2 - tab1 - 1);
    std::string rating_str = line.substr(tab2 + 1);
    double external = 0.0;
    auto [ptr, ec] = std::from_chars(
        rating_str.data(), rating_str.data() + rating_str.size(), external);
    if (ec != std::errc{} || ptr != rating_str.data() + rating_str.size())
      throw DataError("line " + std::to_string(line_no) +
                      ": unparseable rating '" + rating_str + "'");
    if (!rating::external_valid(external))
      throw DataError("line " + std::to_string(line_no) +
                      ": rating outside [1,5]: " + rating_str);

    records.push_back({intern(trustor_index, trustor_labels, u_id),
                       intern(trustee_index, trustee_labels, v_id), external,
                       line_no});
  }

  TrustBipartiteGraph g(trustor_labels.size(), trustee_labels.size());
  for (const Record& r : records)
    g.add_experience(r.u, r.v, rating::from_external(r.external));
  g.set_labels(std::move(trustor_labels), std::move(trustee_labels));
  return g;
}

TrustBipartiteGraph read_ratings_tsv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open rating file: " + path);
  return read_ratings_tsv(in);
}

void write_ratings_tsv(const TrustBipartiteGraph& g, std::ostream& out) {
  char buf[64];
  for (const RatingEdge& e : g.edges()) {
    std::snprintf(buf, sizeof(buf), "%.17g", rating::to_external(e.value));
    out << g.trustor_label(e.trustor) << '\t' << g.trustee_label(e.trustee)
        << '\t' << buf << '\n';
  }
}

}  // namespace siotrust
