#pragma once

#include <string>
#include <vector>

#include "netglm/population.hpp"

namespace netglm {

// Read-only view of one configuration (x, y, z) against the fixed design.
// This is also the query surface handed to user-defined terms.
class TermContext {
 public:
  TermContext(const PopulationData& design, const State& state) : d_(design), s_(state) {}

  int n() const { return d_.n(); }
  bool directed() const { return d_.directed(); }

  // Scaled values (divided by the normal-family variance) enter statistics.
  double x(int i) const { return d_.x.family == Family::normal ? s_.x[i] / d_.x.scale : s_.x[i]; }
  double y(int i) const { return d_.y.family == Family::normal ? s_.y[i] / d_.y.scale : s_.y[i]; }
  double x_raw(int i) const { return s_.x[i]; }
  double y_raw(int i) const { return s_.y[i]; }

  bool edge(int from, int to) const { return s_.z.has_edge(from, to); }
  bool overlap(int i, int j) const { return d_.nb->overlap(i, j); }
  bool in_neighborhood(int i, int k) const { return d_.nb->contains(i, k); }
  const Neighborhoods& neighborhoods() const { return *d_.nb; }

  const std::vector<int>& out_neighbors(int i) const { return s_.z.out(i); }
  const std::vector<int>& in_neighbors(int i) const { return s_.z.in(i); }
  // Connections restricted to units with overlapping neighborhoods.
  std::vector<int> out_neighbors_overlap(int i) const;
  std::vector<int> in_neighbors_overlap(int i) const;

  int out_degree(int i) const { return s_.z.out_degree(i); }
  int in_degree(int i) const { return s_.z.in_degree(i); }
  int out_degree_overlap(int i) const;
  int in_degree_overlap(int i) const;

  // Common partners h of (from, to) for the given orientation; with
  // overlap_only, every link on the path must join overlapping units.
  std::vector<int> common_partners(int from, int to, PathType type, bool overlap_only = false) const;
  int count_common_partners(int from, int to, PathType type, bool overlap_only = false) const;

  const std::vector<double>* unit_covariate(const std::string& name) const {
    return d_.covariates.find_unit(name);
  }

  const PopulationData& design() const { return d_; }
  const State& state() const { return s_; }
  const Network& z() const { return s_.z; }

 private:
  const PopulationData& d_;
  const State& s_;
};

}  // namespace netglm
