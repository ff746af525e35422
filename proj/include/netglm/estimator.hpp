#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "netglm/pseudo_likelihood.hpp"

namespace netglm {

struct FitConfig {
  int max_it = 300;
  double grad_tol = 1e-6;
  // A full Newton step on the generic block must also be this small. Without
  // it a separated fit, whose gradient vanishes at infinity, would pass.
  double step_tol = 1e-4;
  int step_halving_max = 20;
  bool mm_accel = true;
  // MM cycles on the degree block per outer iteration.
  int mm_cycles = 2;
  std::optional<Eigen::VectorXd> start;
};

struct TraceRow {
  int iteration = 0;
  double loglik = 0.0;
  double grad_norm = 0.0;
  Eigen::VectorXd generic;
  std::optional<std::array<double, 5>> degree_summary;  // min, q1, median, q3, max
};

struct FitResult {
  Eigen::VectorXd theta;
  std::vector<std::string> labels;
  int p1 = 0;
  bool converged = false;
  int iterations = 0;
  double loglik = 0.0;
  double grad_norm = 0.0;
  double seconds = 0.0;
  std::vector<TraceRow> trace;

  Eigen::VectorXd generic() const { return theta.tail(theta.size() - p1); }
  Eigen::VectorXd degrees() const { return theta.head(p1); }
};

// Fails with ValidationError when the model has degree weights and the data
// has isolated units (those weights have no finite maximizer).
FitResult fit(const Model& model, const PopulationData& data, const FitConfig& config = {});
FitResult fit(const Model& model, const PopulationData& data, const PlDesign& design, const FitConfig& config);

// One ascent step on the degree block with the generic block held fixed.
Eigen::VectorXd mm_degree_update(const PlDesign& d, const Eigen::VectorXd& theta, bool accelerate = true);

struct NewtonStep {
  Eigen::VectorXd theta;
  double full_step_norm = 0.0;  // sup-norm of the undamped step
  int halvings = 0;
  // The ridge retry was needed; such a step never certifies convergence.
  bool regularized = false;
};
// One damped Newton step on the generic block with the degree block fixed.
// Throws ValidationError naming the collinear terms when the block is singular.
NewtonStep newton_generic_update(const PlDesign& d, const Eigen::VectorXd& theta,
                                 const std::vector<std::string>& generic_labels, int max_halving = 20);

void write_trace_csv(const FitResult& fit, const std::string& path);

}  // namespace netglm
