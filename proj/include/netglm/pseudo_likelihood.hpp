#pragma once

#include <vector>

#include <Eigen/Dense>

#include "netglm/model.hpp"

namespace netglm {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// One free variable of the pseudo-likelihood.
struct Component {
  Target::Kind kind;
  int i;
  int j;  // z only
  double value;
  Family family;
  double scale;
  // Degree coordinates on the linear predictor (z components of models with degrees).
  int deg_a = -1;
  int deg_b = -1;
};

// Change statistics of every free component for one state, computed once
// and reused by every evaluation at that state.
struct PlDesign {
  int p1 = 0;
  int p2 = 0;
  std::vector<Component> comps;
  RowMatrix delta;  // comps x p2, generic block

  static PlDesign build(const Model& model, const PopulationData& design, const State& s);
  int dim() const { return p1 + p2; }
  int size() const { return static_cast<int>(comps.size()); }
  // Free dyads incident to each degree coordinate.
  std::vector<int> degree_counts() const;
};

// theta . delta, with a dimension check.
double linear_predictor(const Eigen::VectorXd& theta, const Eigen::VectorXd& delta);

// eta of every component. `generic` is the generic-block part alone.
Eigen::VectorXd generic_offsets(const PlDesign& d, const Eigen::VectorXd& theta);
Eigen::VectorXd linear_predictors(const PlDesign& d, const Eigen::VectorXd& theta);

// Throws NumericalError naming the first component with a non-finite value.
double pseudo_loglik(const PlDesign& d, const Eigen::VectorXd& theta);
Eigen::VectorXd pl_gradient(const PlDesign& d, const Eigen::VectorXd& theta);
Eigen::MatrixXd pl_hessian(const PlDesign& d, const Eigen::VectorXd& theta);

struct PlEvaluation {
  double loglik;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
};
PlEvaluation evaluate_all(const PlDesign& d, const Eigen::VectorXd& theta);

// Convenience wrappers that build the design from the state.
double pseudo_loglik(const Model& model, const PopulationData& design, const State& s, const Eigen::VectorXd& theta);

}  // namespace netglm
