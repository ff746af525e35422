#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "netglm/exact_oracle.hpp"
#include "netglm/sampler.hpp"

namespace testing {

// Index of a network among all 2^(dyads) graphs on its units.
inline std::uint64_t network_index(const netglm::Network& z) {
  std::uint64_t key = 0;
  int bit = 0;
  for (int i = 0; i < z.n(); ++i)
    for (int j = z.directed() ? 0 : i + 1; j < z.n(); ++j) {
      if (i == j) continue;
      if (z.has_edge(i, j)) key |= std::uint64_t{1} << bit;
      ++bit;
    }
  return key;
}

inline std::uint64_t binary_index(const std::vector<double>& v) {
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] == 1.0) key |= std::uint64_t{1} << i;
  return key;
}

// Exact law of one block (network or y) from enumeration, marginalizing the rest.
inline std::vector<double> exact_marginal(const netglm::ExactDistribution& dist, bool network_block) {
  const netglm::PopulationData& d = *dist.design;
  std::size_t size = network_block ? std::size_t{1} << netglm::dyad_count(d.n(), d.directed())
                                   : std::size_t{1} << d.n();
  std::vector<double> p(size, 0.0);
  for (std::uint64_t s = 0; s < dist.size(); ++s) {
    netglm::State st = dist.state_at(s);
    p[network_block ? network_index(st.z) : binary_index(st.y)] += dist.prob[s];
  }
  return p;
}

inline double total_variation(const std::vector<double>& a, const std::vector<double>& b) {
  double tv = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) tv += std::abs(a[k] - b[k]);
  return tv / 2.0;
}

// Empirical law of the network after each of `steps` connection updates.
inline std::vector<double> network_frequencies(netglm::Sampler& s, netglm::ZKernel kernel, std::int64_t steps) {
  const netglm::Network& z = s.state().z;
  std::vector<double> f(std::size_t{1} << netglm::dyad_count(z.n(), z.directed()), 0.0);
  for (std::int64_t t = 0; t < steps; ++t) {
    s.z_step(kernel);
    f[network_index(s.state().z)] += 1.0;
  }
  for (auto& v : f) v /= static_cast<double>(steps);
  return f;
}

// Empirical law of binary y after each single-unit Gibbs update (systematic scan).
inline std::vector<double> attribute_frequencies(netglm::Sampler& s, std::int64_t steps) {
  const int n = static_cast<int>(s.state().y.size());
  std::vector<double> f(std::size_t{1} << n, 0.0);
  for (std::int64_t t = 0; t < steps; ++t) {
    s.gibbs_attribute_step(netglm::Target::of_y(static_cast<int>(t % n)));
    f[binary_index(s.state().y)] += 1.0;
  }
  for (auto& v : f) v /= static_cast<double>(steps);
  return f;
}

}  // namespace testing
