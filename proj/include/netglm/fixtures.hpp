#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "netglm/population.hpp"

namespace netglm {

enum class FixtureProfile {
  directed_binary,   // binary x and y, directed ties, block neighborhoods, match covariates
  undirected_normal  // fixed binary x, normal y, undirected ties, sparse neighborhoods
};

FixtureProfile parse_fixture_profile(const std::string& name);
const char* fixture_profile_name(FixtureProfile p);

// Model the fixture is simulated from, with its weights.
struct FixtureTruth {
  std::string formula;
  Eigen::VectorXd theta;
};
FixtureTruth fixture_truth(FixtureProfile p);

// A model that fits the fixture quickly, used by the fixture fit runs.
std::string fixture_fit_formula(FixtureProfile p);

// Simulates a population of n units from fixture_truth(p). Edge, membership
// and attribute counts are then nudged to targets that scale with n like the
// two reference studies (9218 ties, 24398 memberships, 195 and 204 ones at
// n = 495; 2517 ties, 744 memberships, 90 ones at n = 409).
PopulationData generate_fixture(FixtureProfile p, int n, std::uint64_t seed);

}  // namespace netglm
