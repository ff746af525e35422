#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "netglm/population.hpp"
#include "netglm/rng.hpp"

namespace testing {

struct RandomSpec {
  int n = 5;
  bool directed = true;
  netglm::Family x_family = netglm::Family::binomial;
  netglm::Family y_family = netglm::Family::binomial;
  double edge_p = 0.4;
  double member_p = 0.3;  // chance k joins N_i besides i itself
  bool full_neighborhoods = false;
  bool fix_x = false, fix_z = false, fix_z_alocal = false;
};

inline double draw_value(netglm::Family f, netglm::SplitMix64& rng) {
  switch (f) {
    case netglm::Family::binomial: return netglm::uniform01(rng) < 0.5 ? 1.0 : 0.0;
    case netglm::Family::poisson: return static_cast<double>(netglm::uniform_index(rng, 4));
    case netglm::Family::normal: return std::round((netglm::uniform01(rng) * 4.0 - 2.0) * 100.0) / 100.0;
  }
  return 0.0;
}

// Small random population with unit covariate "v", dyad covariate "w" and a
// categorical unit covariate "g" (so "match_g" resolves).
inline netglm::PopulationData random_population(const RandomSpec& spec, std::uint64_t seed) {
  netglm::SplitMix64 rng(seed);
  netglm::RawPopulation raw;
  const int n = spec.n;
  for (int i = 0; i < n; ++i) {
    raw.unit_ids.push_back("u" + std::to_string(i));
    raw.x.push_back(draw_value(spec.x_family, rng));
    raw.y.push_back(draw_value(spec.y_family, rng));
  }
  for (int i = 0; i < n; ++i)
    for (int j = spec.directed ? 0 : i + 1; j < n; ++j)
      if (i != j && netglm::uniform01(rng) < spec.edge_p) raw.edges.emplace_back(i, j);
  if (!spec.full_neighborhoods) {
    std::vector<std::pair<int, int>> m;
    for (int i = 0; i < n; ++i) {
      m.emplace_back(i, i);
      for (int k = 0; k < n; ++k)
        if (k != i && netglm::uniform01(rng) < spec.member_p) m.emplace_back(i, k);
    }
    raw.neighborhood_pairs = m;
  }
  std::vector<double> v(n), g(n), w(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    v[i] = std::round((netglm::uniform01(rng) * 2.0 - 1.0) * 100.0) / 100.0;
    g[i] = static_cast<double>(netglm::uniform_index(rng, 2));
  }
  for (auto& e : w) e = std::round(netglm::uniform01(rng) * 100.0) / 100.0;
  if (!spec.directed)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < i; ++j) w[static_cast<std::size_t>(i) * n + j] = w[static_cast<std::size_t>(j) * n + i];
  raw.unit_covariates = {{"v", v}, {"g", g}};
  raw.dyad_covariates.emplace("w", netglm::DyadCovariate::dense(n, w));
  netglm::BuildFlags f;
  f.directed = spec.directed;
  f.x_family = spec.x_family;
  f.y_family = spec.y_family;
  f.fix_x = spec.fix_x;
  f.fix_z = spec.fix_z;
  f.fix_z_alocal = spec.fix_z_alocal;
  if (spec.x_family == netglm::Family::normal) f.x_scale = 1.7;
  if (spec.y_family == netglm::Family::normal) f.y_scale = 0.6;
  return netglm::build_population(raw, f);
}

// Every catalog entry with every accepted mode (and type for typed terms).
inline std::vector<std::string> catalog_terms(bool directed) {
  std::vector<std::string> t;
  auto modes = [&](const std::string& name, std::vector<std::string> ms, const std::string& extra = "") {
    for (const auto& m : ms) t.push_back(name + "(" + extra + (extra.empty() ? "" : ", ") + "mode = '" + m + "')");
  };
  const std::vector<std::string> all{"global", "local", "alocal"}, gl{"global", "local"};
  t.insert(t.end(), {"attribute_x", "attribute_y", "cov_x(data = v)", "cov_y(data = v)", "degrees", "isolates",
                     "nonisolates", "transitive", "gwdegree(decay = 0.7)"});
  modes("attribute_xy", all);
  modes("edges", all);
  modes("cov_z", all, "data = w");
  modes("cov_z", gl, "data = match_g");
  modes("gwesp_symm", all, "decay = 0.4");
  modes("gwdsp_symm", {"local"}, "decay = 0.9");
  modes("attribute_xz", {"local"});
  modes("attribute_yz", {"local"});
  modes("edges_x_match", gl);
  modes("edges_y_match", gl);
  for (const char* s : {"spillover_xx", "spillover_yy", "spillover_xy"}) modes(s, {"local"});
  for (const char* s : {"spillover_xx_scaled", "spillover_yy_scaled", "spillover_xy_scaled", "spillover_yx_scaled"})
    modes(s, all);
  modes("spillover_yc", {"local"}, "data = v");
  if (directed) {
    modes("mutual", all);
    modes("cov_z_out", all, "data = v");
    modes("cov_z_in", all, "data = v");
    modes("gwodegree", gl, "decay = 0.6");
    modes("gwidegree", gl, "decay = 0.6");
    for (const char* type : {"OTP", "ISP", "OSP", "ITP"}) {
      modes("gwesp", gl, std::string("decay = 0.5, type = '") + type + "'");
      modes("gwdsp", gl, std::string("decay = 0.3, type = '") + type + "'");
    }
    for (const char* s : {"outedges_x", "inedges_x", "outedges_y", "inedges_y"}) modes(s, all);
    modes("spillover_yx", {"local"});
  }
  return t;
}

// Terms whose statistics need binary attributes.
inline bool binary_only(const std::string& term) {
  return term.rfind("edges_x_match", 0) == 0 || term.rfind("edges_y_match", 0) == 0;
}

}  // namespace testing
