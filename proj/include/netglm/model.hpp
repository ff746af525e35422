#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "netglm/formula.hpp"

namespace netglm {

// A variable whose full conditional is being asked about.
struct Target {
  enum Kind { x, y, z } kind = y;
  int i = 0;
  int j = -1;  // z only
  static Target of_x(int i) { return {x, i, -1}; }
  static Target of_y(int i) { return {y, i, -1}; }
  static Target of_z(int i, int j) { return {z, i, j}; }
};

// A ModelSpec bound to one design (covariates, neighborhoods, families).
// Weight layout: the degree block (outdeg_0.., indeg_0.. or deg_0..) first,
// then one coordinate per remaining term in formula order.
class Model {
 public:
  static Model bind(const ModelSpec& spec, const PopulationData& design,
                    const TermRegistry& registry = TermRegistry::builtin());

  const ModelSpec& spec() const { return spec_; }
  int dim() const { return p1_ + p2_; }
  int degree_dim() const { return p1_; }
  int generic_dim() const { return p2_; }
  bool has_degrees() const { return p1_ > 0; }
  bool directed() const { return directed_; }
  int n() const { return n_; }
  const std::vector<std::string>& labels() const { return labels_; }
  // Labels of the generic block only.
  std::vector<std::string> generic_labels() const;

  // Degree coordinates touched by a tie i->j (undirected: {i, j}).
  int degree_out_index(int i) const { return i; }
  int degree_in_index(int j) const { return directed_ ? n_ + j : j; }

  // Sufficient statistic, computed term by term from its definition.
  Eigen::VectorXd global_statistic(const PopulationData& design, const State& s) const;
  // Full-length change statistic. For z targets the dyad is toggled off in a
  // copy first, so any state is accepted.
  Eigen::VectorXd change_statistic(const PopulationData& design, const State& s, Target t) const;

  // Generic-block change statistics written to out[0..p2). change_z requires
  // the dyad (both orientations when undirected) to be absent in ctx.
  void change_x(const TermContext& ctx, int i, double* out) const;
  void change_y(const TermContext& ctx, int i, double* out) const;
  void change_z(const TermContext& ctx, int i, int j, double* out) const;

 private:
  ModelSpec spec_;
  std::vector<std::shared_ptr<const Term>> terms_;
  std::vector<std::string> labels_;
  int p1_ = 0;
  int p2_ = 0;
  int n_ = 0;
  bool directed_ = true;
};

}  // namespace netglm
