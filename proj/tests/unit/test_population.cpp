#include <doctest.h>

#include "helpers.hpp"
#include "netglm/error.hpp"
#include "netglm/population.hpp"

using namespace netglm;

namespace {

RawPopulation units(int n) {
  RawPopulation raw;
  for (int i = 0; i < n; ++i) {
    raw.unit_ids.push_back("u" + std::to_string(i));
    raw.x.push_back(0.0);
    raw.y.push_back(0.0);
  }
  return raw;
}

std::string build_error(const RawPopulation& raw, BuildFlags f = {}) {
  try {
    build_population(raw, f);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_SUITE("population") {
  TEST_CASE("undirected edges are stored in both orientations") {
    RawPopulation raw = units(3);
    raw.edges = {{0, 1}};
    BuildFlags f;
    f.directed = false;
    PopulationData d = build_population(raw, f);
    CHECK(d.z.out(0) == std::vector<int>{1});
    CHECK(d.z.out(1) == std::vector<int>{0});
    CHECK(d.z.out(2).empty());
    CHECK(d.z.edge_count() == 1);
    CHECK(d.z.edge_list() == std::vector<std::pair<int, int>>{{0, 1}});
  }

  TEST_CASE("invalid records are named") {
    RawPopulation raw = units(3);
    raw.edges = {{2, 2}};
    CHECK(build_error(raw).find("self-loop") != std::string::npos);
    raw.edges = {{0, 1}, {0, 1}};
    CHECK(build_error(raw).find("duplicate edge") != std::string::npos);
    raw.edges = {{0, 1}, {1, 0}};
    BuildFlags undirected;
    undirected.directed = false;
    CHECK(build_error(raw, undirected).find("duplicate edge") != std::string::npos);
    CHECK(build_error(raw).empty());
    raw.edges = {{0, 7}};
    CHECK(build_error(raw).find("out of range") != std::string::npos);
    raw = units(3);
    raw.y[1] = 2.0;
    CHECK(build_error(raw).find("y[1]") != std::string::npos);
    BuildFlags poisson;
    poisson.y_family = Family::poisson;
    raw.y[1] = 1.5;
    CHECK_FALSE(build_error(raw, poisson).empty());
    raw = units(3);
    BuildFlags both;
    both.fix_z = true;
    both.fix_z_alocal = true;
    CHECK_FALSE(build_error(raw, both).empty());
    raw.unit_ids[2] = "u0";
    CHECK(build_error(raw).find("duplicate unit id") != std::string::npos);
  }

  TEST_CASE("normal scale defaults to the sample variance") {
    RawPopulation raw = units(4);
    raw.y = {1.0, 2.0, 4.0, 5.0};
    BuildFlags f;
    f.y_family = Family::normal;
    PopulationData d = build_population(raw, f);
    CHECK(d.y.scale == doctest::Approx(10.0 / 3.0));
    CHECK(d.y.scaled(3) == doctest::Approx(1.5));
    f.y_scale = 2.0;
    CHECK(build_population(raw, f).y.scale == 2.0);
    f.y_scale = -1.0;
    CHECK_THROWS_AS(build_population(raw, f), ValidationError);
  }

  TEST_CASE("overlap predicate") {
    Neighborhoods full = Neighborhoods::full(4);
    CHECK(full.overlap(0, 3));
    CHECK_FALSE(full.contains(2, 2));
    Neighborhoods nb(4, {{0, 1}, {1}, {2}, {3, 2}});
    CHECK(nb.overlap(0, 1));
    CHECK(nb.overlap(2, 3));
    CHECK_FALSE(nb.overlap(0, 2));
    CHECK(nb.overlap_partners(3) == std::vector<int>{2});
    CHECK(nb.membership_count() == 6);

    testing::RandomSpec spec;
    spec.n = 40;
    spec.member_p = 0.05;
    PopulationData d = testing::random_population(spec, 5);
    SplitMix64 rng(1);
    for (int t = 0; t < 10000; ++t) {
      int i = static_cast<int>(uniform_index(rng, 40)), j = static_cast<int>(uniform_index(rng, 40));
      CHECK(d.nb->overlap(i, j) == d.nb->overlap(j, i));
      bool shared = false;
      for (int k : d.nb->members(i)) shared = shared || d.nb->contains(j, k);
      if (i != j) CHECK(d.nb->overlap(i, j) == shared);
    }
  }

  TEST_CASE("isolated units are removed and ids remapped") {
    RawPopulation raw = units(4);
    raw.edges = {{0, 1}, {2, 0}};
    raw.neighborhood_pairs = std::vector<std::pair<int, int>>{{0, 3}, {3, 3}, {2, 1}};
    raw.unit_covariates["v"] = {10, 11, 12, 13};
    PopulationData d = delete_isolates(build_population(raw, {}));
    CHECK(d.n() == 3);
    CHECK(d.unit_ids == std::vector<std::string>{"u0", "u1", "u2"});
    CHECK(d.z.has_edge(0, 1));
    CHECK(d.z.has_edge(2, 0));
    CHECK(*d.covariates.find_unit("v") == std::vector<double>{10, 11, 12});
    CHECK(d.nb->contains(2, 1));
    CHECK_FALSE(d.nb->overlap(0, 2));
    PopulationData again = delete_isolates(d);
    CHECK(again.n() == 3);
    CHECK(again.z == d.z);

    RawPopulation three = units(3);
    three.edges = {{0, 1}};
    CHECK(delete_isolates(build_population(three, {})).n() == 2);
    CHECK(delete_isolates(build_population(units(5), {})).n() == 0);
  }

  TEST_CASE("match covariates are derived from unit covariates") {
    RawPopulation raw = units(3);
    raw.unit_covariates["g"] = {1, 2, 1};
    PopulationData d = build_population(raw, {});
    auto m = d.covariates.find_dyad("match_g");
    REQUIRE(m.has_value());
    CHECK((*m)(0, 2) == 1.0);
    CHECK((*m)(0, 1) == 0.0);
    CHECK_FALSE(d.covariates.find_dyad("match_none").has_value());
  }

  TEST_CASE("sample variance") {
    CHECK(empirical_variance({1, 2, 3, 4}) == doctest::Approx(5.0 / 3.0));
    CHECK(dyad_count(5, true) == 20);
    CHECK(dyad_count(5, false) == 10);
  }
}
