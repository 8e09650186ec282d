#include <set>
#include <sstream>
#include <tuple>

#include "doctest.h"
#include "siotrust/graph.hpp"

using namespace siotrust;

namespace {

std::set<std::tuple<std::string, std::string, double>> triples(
    const TrustBipartiteGraph& g) {
  std::set<std::tuple<std::string, std::string, double>> out;
  for (const RatingEdge& e : g.edges())
    out.insert({g.trustor_label(e.trustor), g.trustee_label(e.trustee),
                e.value});
  return out;
}

}  // namespace

TEST_CASE("external ratings map onto (0,1] by dividing by five") {
  CHECK(rating::from_external(5.0) == doctest::Approx(1.0));
  CHECK(rating::from_external(1.0) == doctest::Approx(0.2));
  CHECK(rating::from_external(2.5) == doctest::Approx(0.5));
  for (double r = 1.0; r <= 5.0; r += 0.5)
    CHECK(rating::to_external(rating::from_external(r)) ==
          doctest::Approx(r).epsilon(1e-12));
  CHECK_THROWS_AS(rating::from_external(0.5), std::domain_error);
  CHECK_THROWS_AS(rating::from_external(5.5), std::domain_error);
}

TEST_CASE("repeat experience overwrites by default") {
  TrustBipartiteGraph g(2, 2);
  g.add_experience_external(0, 1, 4.0);
  g.add_experience_external(0, 1, 2.0);
  CHECK(g.edge_count() == 1);
  CHECK(g.edge_value(0, 1) == doctest::Approx(0.4));
}

TEST_CASE("exponential averaging memory blends old and new") {
  TrustBipartiteGraph g(1, 1);
  g.set_averaging_memory(0.5);
  g.add_experience(0, 0, 0.8);
  g.add_experience(0, 0, 0.4);
  CHECK(g.edge_value(0, 0) == doctest::Approx(0.6));
  CHECK_THROWS_AS(g.set_averaging_memory(1.5), std::domain_error);
}

TEST_CASE("degrees and rows track the edge set") {
  TrustBipartiteGraph g(3, 3);
  g.add_experience(0, 0, 1.0);
  g.add_experience(0, 2, 0.4);
  g.add_experience(1, 2, 0.6);
  CHECK(g.trustor_degree(0) == 2);
  CHECK(g.trustee_degree(2) == 2);
  CHECK(g.trustee_degree(1) == 0);
  auto row = g.rating_row(0);
  REQUIRE(row.size() == 2);
  CHECK(row[0].first == 0);
  CHECK(row[1].first == 2);
  CHECK_THROWS_AS(g.edge_value(0, 1), std::out_of_range);
  CHECK_THROWS_AS((void)g.trustor_degree(3), std::out_of_range);
}

TEST_CASE("erasing a trustee column removes only its edges") {
  TrustBipartiteGraph g(2, 2);
  g.add_experience(0, 0, 0.2);
  g.add_experience(0, 1, 0.4);
  g.add_experience(1, 0, 0.6);
  g.erase_trustee_edges(0);
  CHECK(g.edge_count() == 1);
  CHECK(g.has_edge(0, 1));
  CHECK_FALSE(g.has_edge(0, 0));
  CHECK_FALSE(g.has_edge(1, 0));
}

TEST_CASE("tsv round trip preserves the rating triples") {
  std::istringstream in(
      "alice\tprinter\t5\n"
      "bob\tprinter\t3\n"
      "# comment line\n"
      "alice\tscanner\t1.5\n");
  TrustBipartiteGraph g = read_ratings_tsv(in);
  CHECK(g.trustor_count() == 2);
  CHECK(g.trustee_count() == 2);
  CHECK(g.edge_count() == 3);

  std::ostringstream first;
  write_ratings_tsv(g, first);
  std::istringstream again(first.str());
  TrustBipartiteGraph g2 = read_ratings_tsv(again);
  CHECK(triples(g) == triples(g2));

  std::ostringstream second;
  write_ratings_tsv(g2, second);
  CHECK(first.str() == second.str());
}

TEST_CASE("tsv reader reports the offending line") {
  std::istringstream bad("a\tb\t5\nc\td\n");
  try {
    read_ratings_tsv(bad);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }

  std::istringstream range("a\tb\t9\n");
  CHECK_THROWS_AS(read_ratings_tsv(range), DataError);
  std::istringstream text("a\tb\tgood\n");
  CHECK_THROWS_AS(read_ratings_tsv(text), DataError);
}

TEST_CASE("duplicate tsv rows keep the latest rating") {
  std::istringstream in("u\tv\t2\nu\tv\t4\n");
  TrustBipartiteGraph g = read_ratings_tsv(in);
  CHECK(g.edge_count() == 1);
  CHECK(rating::to_external(g.edge_value(0, 0)) == doctest::Approx(4.0));
}
