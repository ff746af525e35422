#include "netglm/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>

#include "netglm/error.hpp"
#include "netglm/formula.hpp"
#include "netglm/model.hpp"
#include "netglm/rng.hpp"
#include "netglm/sampler.hpp"

namespace netglm {

FixtureProfile parse_fixture_profile(const std::string& name) {
  if (name == "directed_binary") return FixtureProfile::directed_binary;
  if (name == "undirected_normal") return FixtureProfile::undirected_normal;
  throw ValidationError("unknown fixture profile '" + name + "' (directed_binary, undirected_normal)");
}

const char* fixture_profile_name(FixtureProfile p) {
  return p == FixtureProfile::directed_binary ? "directed_binary" : "undirected_normal";
}

FixtureTruth fixture_truth(FixtureProfile p) {
  FixtureTruth t;
  if (p == FixtureProfile::directed_binary) {
    t.formula =
        "attribute_x + attribute_y + attribute_xy + edges(mode = 'alocal') + edges(mode = 'local') + "
        "cov_z(data = match_state, mode = 'local') + mutual(mode = 'local') + spillover_xy(mode = 'local') + "
        "spillover_yy(mode = 'local')";
    t.theta.resize(9);
    t.theta << -0.4, -0.5, 0.3, -4.5, -1.2, 0.5, 1.5, 0.1, 0.1;
  } else {
    t.formula =
        "attribute_y + attribute_xy + edges(mode = 'alocal') + edges(mode = 'local') + spillover_xy + spillover_yy";
    t.theta.resize(6);
    t.theta << 1.2, 0.4, -3.5, -1.0, 0.2, 0.05;
  }
  return t;
}

std::string fixture_fit_formula(FixtureProfile p) {
  if (p == FixtureProfile::directed_binary)
    return "attribute_y + attribute_xy + degrees + edges(mode = 'alocal') + "
           "cov_z(data = match_state, mode = 'local') + mutual(mode = 'local') + spillover_yy(mode = 'local')";
  return "attribute_y + attribute_xy + degrees + edges(mode = 'alocal') + spillover_xy + spillover_yy";
}

namespace {

std::int64_t scaled_target(double at_reference, int reference_n, int n) {
  return std::llround(at_reference * n / reference_n);
}

// Neighborhood memberships (unit, member), every unit a member of its own.
std::vector<std::pair<int, int>> block_memberships(int n, int block) {
  std::vector<std::pair<int, int>> m;
  for (int i = 0; i < n; ++i) {
    int b0 = (i / block) * block, b1 = std::min(n, b0 + block);
    for (int k = b0; k < b1; ++k) m.emplace_back(i, k);
  }
  return m;
}

std::vector<std::pair<int, int>> pair_memberships(int n, std::int64_t target, SplitMix64& rng) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (int k = n - 1; k > 0; --k) std::swap(order[k], order[uniform_index(rng, k + 1)]);
  std::vector<std::pair<int, int>> m;
  for (int i = 0; i < n; ++i) m.emplace_back(i, i);
  std::int64_t pairs = std::max<std::int64_t>(0, (target - n) / 2);
  for (std::int64_t p = 0; p < pairs && 2 * p + 1 < n; ++p) {
    int a = order[2 * p], b = order[2 * p + 1];
    m.emplace_back(a, b);
    m.emplace_back(b, a);
  }
  return m;
}

// Drops random non-self memberships or adds random new ones until the count matches.
void nudge_memberships(std::vector<std::pair<int, int>>& m, int n, std::int64_t target, SplitMix64& rng) {
  target = std::clamp<std::int64_t>(target, n, static_cast<std::int64_t>(n) * n);
  std::set<std::pair<int, int>> have(m.begin(), m.end());
  while (static_cast<std::int64_t>(have.size()) > target) {
    auto [i, k] = m[uniform_index(rng, m.size())];
    if (i != k) have.erase({i, k});
    m.assign(have.begin(), have.end());
  }
  while (static_cast<std::int64_t>(have.size()) < target) {
    int i = static_cast<int>(uniform_index(rng, n)), k = static_cast<int>(uniform_index(rng, n));
    have.insert({i, k});
  }
  m.assign(have.begin(), have.end());
}

void nudge_edges(Network& z, const Neighborhoods& nb, std::int64_t target, SplitMix64& rng) {
  const int n = z.n();
  target = std::clamp<std::int64_t>(target, 0, dyad_count(n, z.directed()) / 2);
  auto edges = z.edge_list();
  while (z.edge_count() > target) {
    std::size_t k = uniform_index(rng, edges.size());
    z.remove_edge(edges[k].first, edges[k].second);
    edges[k] = edges.back();
    edges.pop_back();
  }
  // New ties go to overlapping pairs half of the time, like simulated ones mostly do.
  while (z.edge_count() < target) {
    int i = static_cast<int>(uniform_index(rng, n)), j;
    const auto& partners = nb.overlap_partners(i);
    if (!partners.empty() && uniform01(rng) < 0.5 && !nb.is_full())
      j = partners[uniform_index(rng, partners.size())];
    else
      j = static_cast<int>(uniform_index(rng, n));
    if (i != j) z.add_edge(i, j);
  }
}

void nudge_ones(std::vector<double>& v, std::int64_t target, SplitMix64& rng) {
  const int n = static_cast<int>(v.size());
  target = std::clamp<std::int64_t>(target, 0, n);
  auto ones = [&] { return static_cast<std::int64_t>(std::count(v.begin(), v.end(), 1.0)); };
  std::int64_t c = ones();
  while (c != target) {
    int i = static_cast<int>(uniform_index(rng, n));
    if (c > target && v[i] == 1.0) {
      v[i] = 0.0;
      --c;
    } else if (c < target && v[i] == 0.0) {
      v[i] = 1.0;
      ++c;
    }
  }
}

std::vector<std::string> unit_ids(int n) {
  std::vector<std::string> ids;
  char buf[32];
  for (int i = 0; i < n; ++i) {
    std::snprintf(buf, sizeof buf, "u%04d", i);
    ids.emplace_back(buf);
  }
  return ids;
}

}  // namespace

PopulationData generate_fixture(FixtureProfile p, int n, std::uint64_t seed) {
  if (n < 2) throw ValidationError("fixture needs at least 2 units");
  SplitMix64 rng(derive_seed(seed, 11));
  const bool directed = p == FixtureProfile::directed_binary;
  RawPopulation raw;
  raw.unit_ids = unit_ids(n);
  raw.x.assign(n, 0.0);
  raw.y.assign(n, 0.0);
  BuildFlags flags;
  flags.directed = directed;

  if (directed) {
    auto m = block_memberships(n, 50);
    nudge_memberships(m, n, scaled_target(24398, 495, n), rng);
    raw.neighborhood_pairs = m;
    std::vector<double> gender(n), race(n), state(n);
    for (int i = 0; i < n; ++i) {
      gender[i] = uniform01(rng) < 0.5 ? 1.0 : 0.0;
      race[i] = static_cast<double>(uniform_index(rng, 3));
      state[i] = uniform01(rng) < 0.8 ? i / 50 : static_cast<double>(uniform_index(rng, (n + 49) / 50));
    }
    raw.unit_covariates = {{"gender", gender}, {"race", race}, {"state", state}};
  } else {
    raw.neighborhood_pairs = pair_memberships(n, scaled_target(744, 409, n), rng);
    nudge_memberships(*raw.neighborhood_pairs, n, scaled_target(744, 409, n), rng);
    nudge_ones(raw.x, scaled_target(90, 409, n), rng);
    flags.fix_x = true;
    flags.y_family = Family::normal;
    flags.y_scale = 3.157;
  }

  PopulationData start = build_population(raw, flags);
  FixtureTruth truth = fixture_truth(p);
  Model model = Model::bind(parse_formula(truth.formula), start);
  SamplerConfig cfg;
  cfg.seed = derive_seed(seed, 12);
  cfg.n_burn_in = 4;
  cfg.n_simulation = 1;
  cfg.y_proposals_per_draw = 5 * n;
  cfg.z_proposals_per_draw = dyad_count(n, directed);
  cfg.keep_states = true;
  State s = simulate(model, truth.theta, start, cfg).states.back();

  if (directed) {
    nudge_edges(s.z, *start.nb, scaled_target(9218, 495, n), rng);
    nudge_ones(s.x, scaled_target(195, 495, n), rng);
    nudge_ones(s.y, scaled_target(204, 495, n), rng);
  } else {
    nudge_edges(s.z, *start.nb, scaled_target(2517, 409, n), rng);
    // Match the reference outcome's location and spread; sd^2 = 3.157 exactly
    // so both printed figures agree with the reference summary.
    const double target_sd = std::sqrt(3.157);
    double mean = std::accumulate(s.y.begin(), s.y.end(), 0.0) / n, ss = 0.0;
    for (double v : s.y) ss += (v - mean) * (v - mean);
    double sd = std::sqrt(ss / (n - 1));
    for (double& v : s.y) v = 1.334 + target_sd * (sd > 0 ? (v - mean) / sd : 0.0);
    flags.y_scale.reset();  // plug in the empirical variance
  }

  raw.x = s.x;
  raw.y = s.y;
  raw.edges = s.z.edge_list();
  return build_population(raw, flags);
}

}  // namespace netglm
