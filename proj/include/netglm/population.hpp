#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "netglm/family.hpp"

namespace netglm {

struct AttributeVector {
  std::vector<double> values;
  Family family = Family::binomial;
  bool fixed = false;
  // Variance psi of the normal family. Values enter the statistics divided by it.
  double scale = 1.0;

  double scaled(int i) const { return family == Family::normal ? values[i] / scale : values[i]; }
  void validate(const std::string& name) const;
};

// Binary network on n units stored as sorted adjacency lists. Undirected
// networks keep both orientations in the out-lists; in() aliases out().
class Network {
 public:
  Network() = default;
  Network(int n, bool directed);

  int n() const { return n_; }
  bool directed() const { return directed_; }

  bool has_edge(int i, int j) const;
  // Return false when the edge was already present (resp. absent).
  bool add_edge(int i, int j);
  bool remove_edge(int i, int j);

  const std::vector<int>& out(int i) const { return out_[i]; }
  const std::vector<int>& in(int i) const { return directed_ ? in_[i] : out_[i]; }
  int out_degree(int i) const { return static_cast<int>(out_[i].size()); }
  int in_degree(int i) const { return static_cast<int>(in(i).size()); }

  // Directed edges, or unordered pairs when undirected.
  std::int64_t edge_count() const { return edges_; }
  // (i, j) pairs; i < j when undirected.
  std::vector<std::pair<int, int>> edge_list() const;

  bool fixed = false;
  // Only dyads between units with non-overlapping neighborhoods are fixed.
  bool fixed_alocal_only = false;

  bool operator==(const Network& o) const {
    return n_ == o.n_ && directed_ == o.directed_ && out_ == o.out_;
  }

 private:
  int n_ = 0;
  bool directed_ = true;
  std::int64_t edges_ = 0;
  std::vector<std::vector<int>> out_;
  std::vector<std::vector<int>> in_;
};

// Square bit matrix.
class BitMatrix {
 public:
  BitMatrix() = default;
  explicit BitMatrix(int n) : n_(n), words_((static_cast<std::size_t>(n) * n + 63) / 64, 0) {}
  bool get(int i, int j) const {
    std::size_t k = static_cast<std::size_t>(i) * n_ + j;
    return (words_[k >> 6] >> (k & 63)) & 1u;
  }
  void set(int i, int j) {
    std::size_t k = static_cast<std::size_t>(i) * n_ + j;
    words_[k >> 6] |= std::uint64_t{1} << (k & 63);
  }

 private:
  int n_ = 0;
  std::vector<std::uint64_t> words_;
};

// Neighborhoods N_i and the overlap predicate c_ij = 1{N_i and N_j intersect}.
class Neighborhoods {
 public:
  Neighborhoods() = default;
  // Every unit's neighborhood is all other units; c is identically 1.
  static Neighborhoods full(int n);
  // members[i] lists N_i (self allowed). Duplicates are removed.
  Neighborhoods(int n, std::vector<std::vector<int>> members);

  int n() const { return n_; }
  bool is_full() const { return full_; }
  bool overlap(int i, int j) const { return full_ ? true : overlap_.get(i, j); }
  bool contains(int i, int k) const { return full_ ? i != k : member_.get(i, k); }
  // Materialized member lists; empty when is_full().
  const std::vector<int>& members(int i) const;
  // Units whose neighborhood contains k.
  const std::vector<int>& holders(int k) const;
  // Total number of memberships sum_i |N_i|.
  std::int64_t membership_count() const;
  // Units j != i with c_ij = 1.
  const std::vector<int>& overlap_partners(int i) const;

 private:
  int n_ = 0;
  bool full_ = true;
  std::vector<std::vector<int>> members_;
  std::vector<std::vector<int>> holders_;
  std::vector<std::vector<int>> partners_;
  BitMatrix overlap_;
  BitMatrix member_;
};

// Dyad-level covariate: either a dense n x n matrix or the match indicator
// 1{v_i == v_j} of a unit-level vector.
class DyadCovariate {
 public:
  static DyadCovariate dense(int n, std::vector<double> row_major);
  static DyadCovariate match(std::shared_ptr<const std::vector<double>> unit);
  double operator()(int i, int j) const {
    if (match_) return (*unit_)[i] == (*unit_)[j] ? 1.0 : 0.0;
    return (*dense_)[static_cast<std::size_t>(i) * n_ + j];
  }
  int n() const { return n_; }
  DyadCovariate subset(const std::vector<int>& keep) const;

 private:
  int n_ = 0;
  bool match_ = false;
  std::shared_ptr<const std::vector<double>> dense_;
  std::shared_ptr<const std::vector<double>> unit_;
};

struct Covariates {
  std::map<std::string, std::shared_ptr<const std::vector<double>>> unit;
  std::map<std::string, DyadCovariate> dyad;

  const std::vector<double>* find_unit(const std::string& name) const;
  // Explicit dyad covariates first; "match_<v>" is derived from unit covariate v.
  std::optional<DyadCovariate> find_dyad(const std::string& name) const;
};

// Mutable part of the population: the random (x, y, z) configuration.
struct State {
  std::vector<double> x;
  std::vector<double> y;
  Network z;
  bool operator==(const State& o) const { return x == o.x && y == o.y && z == o.z; }
};

struct PopulationData {
  std::vector<std::string> unit_ids;
  AttributeVector x;
  AttributeVector y;
  Network z;
  std::shared_ptr<const Neighborhoods> nb;
  Covariates covariates;

  int n() const { return z.n(); }
  bool directed() const { return z.directed(); }
  State state() const { return State{x.values, y.values, z}; }
  // Same design with the random components replaced.
  PopulationData with_state(const State& s) const;
};

struct BuildFlags {
  bool directed = true;
  Family x_family = Family::binomial;
  Family y_family = Family::binomial;
  bool fix_x = false;
  bool fix_z = false;
  bool fix_z_alocal = false;
  std::optional<double> x_scale;
  std::optional<double> y_scale;
};

struct RawPopulation {
  std::vector<std::string> unit_ids;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<std::pair<int, int>> edges;
  // Absent means every unit's neighborhood is all other units.
  std::optional<std::vector<std::pair<int, int>>> neighborhood_pairs;
  std::map<std::string, std::vector<double>> unit_covariates;
  std::map<std::string, DyadCovariate> dyad_covariates;
};

PopulationData build_population(const RawPopulation& raw, const BuildFlags& flags);
PopulationData delete_isolates(const PopulationData& data);
// Sample variance (n - 1 denominator), the default normal scale.
double empirical_variance(const std::vector<double>& v);

// Number of dyads, ordered when directed.
inline std::int64_t dyad_count(int n, bool directed) {
  std::int64_t m = static_cast<std::int64_t>(n) * (n - 1);
  return directed ? m : m / 2;
}

}  // namespace netglm
