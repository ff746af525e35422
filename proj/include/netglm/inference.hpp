#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "netglm/estimator.hpp"

namespace netglm {

struct CovarianceResult {
  Eigen::MatrixXd covariance;
  int used = 0;
  int dropped = 0;  // samples whose Hessian could not be solved
};

// Sample covariance over simulated states m of v_m = -H_m^{-1} g_m, with g_m
// and H_m the pseudo-likelihood gradient and Hessian at theta_hat on state m.
// More than 10% unusable samples is an error. The result does not depend on threads.
CovarianceResult mple_covariance(const Model& model, const PopulationData& data, const Eigen::VectorXd& theta_hat,
                                 const std::vector<State>& samples, int threads = 1);

struct SummaryRow {
  std::string label;
  double estimate = 0.0;
  double se = 0.0;
  double t = 0.0;
  double p = 1.0;
  bool degenerate_se = false;  // SE = 0 with a non-zero estimate
};

// Five-number summary plus mean: min, q1, median, mean, q3, max.
using DegreeSummary = std::array<double, 6>;

struct SummaryTable {
  std::vector<SummaryRow> rows;
  std::optional<DegreeSummary> out_degrees;  // or the single block when undirected
  std::optional<DegreeSummary> in_degrees;
  double seconds = 0.0;
};

SummaryRow summary_row(const std::string& label, double estimate, double se);
SummaryTable summarize(const FitResult& fit, const Eigen::MatrixXd& covariance);

// "<0.0001" below 1e-4, otherwise two decimals.
std::string format_p(double p);
std::string format_row(const SummaryRow& row, std::size_t label_width);
// Aligned text; with_time = false drops the timing line.
std::string render_summary(const SummaryTable& table, bool with_time = true);
nlohmann::json summary_json(const SummaryTable& table, bool with_time = true);

}  // namespace netglm
