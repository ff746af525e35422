#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "netglm/describe.hpp"
#include "netglm/sampler.hpp"

namespace netglm {

// Observed curve and per-bin envelope over simulated draws.
struct Curve {
  std::string name;
  std::vector<std::int64_t> bins;
  std::vector<double> observed;
  std::vector<double> sim_min;
  std::vector<double> sim_median;
  std::vector<double> sim_max;
};

struct AssessmentReport {
  std::vector<Curve> curves;
  std::uint64_t transitions = 0;  // sampler transitions spent by assess itself
};

// Known names: degree, spillover_degree, geodesic, dyadwise_shared_partner,
// edgewise_shared_partner, x_distribution, y_distribution.
const std::vector<std::string>& assessment_statistics();

// Histograms of one state for a known statistic name; degree statistics split
// into _out and _in curves when directed.
using NamedHistograms = std::vector<std::pair<std::string, Histogram>>;
NamedHistograms named_distributions(const std::string& name, const PopulationData& data, const State& s);

// With samples, no new draws are made; otherwise the model is simulated at theta.
AssessmentReport assess(const Model& model, const Eigen::VectorXd& theta, const PopulationData& data,
                        const std::vector<std::string>& stats, const SimulationResult* samples,
                        const SamplerConfig& config = {});

std::string curve_csv(const Curve& c);

enum class PredictionVariant { conditional, marginal };

struct UnitPrediction {
  int unit;
  double target;
  double prediction;
};
struct DyadPrediction {
  int src;
  int dst;
  double target;
  double prediction;
};
struct Predictions {
  std::vector<UnitPrediction> x;
  std::vector<UnitPrediction> y;
  std::vector<DyadPrediction> z;
};

// Conditional: means of the full conditionals at the observed data (x and z
// only when free). Marginal: averages over the simulated states (x always).
Predictions predict(const Model& model, const Eigen::VectorXd& theta, const PopulationData& data,
                    PredictionVariant variant, const SimulationResult* samples);

std::string unit_predictions_csv(const std::vector<UnitPrediction>& rows, const PopulationData& data);
std::string dyad_predictions_csv(const std::vector<DyadPrediction>& rows, const PopulationData& data);

}  // namespace netglm
