#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "netglm/model.hpp"

namespace netglm {

// Full joint law over the free binary components of a tiny population.
struct ExactDistribution {
  const PopulationData* design = nullptr;
  std::vector<Target> vars;         // bit k of a state index is vars[k]
  std::vector<double> log_weight;   // theta . s(state)
  std::vector<double> prob;
  double log_c = 0.0;               // log normalizing constant
  Eigen::MatrixXd statistics;       // one row per state (kept up to 2^20 states)

  std::uint64_t size() const { return log_weight.size(); }
  State state_at(std::uint64_t index) const;
  std::uint64_t index_of(const State& s) const;
  int bit_of(Target t) const;  // -1 when the target is not free
};

inline constexpr int kMaxOracleBits = 24;

enum class Enumeration {
  direct,    // global statistic of every state from scratch
  gray_code  // walk states in Gray-code order adding change statistics
};

// Requires binomial free attributes and at most kMaxOracleBits free components.
ExactDistribution enumerate(const Model& model, const PopulationData& design, const Eigen::VectorXd& theta,
                            Enumeration how = Enumeration::direct);

// P(target = 1 | all other components as in context).
double exact_conditional(const ExactDistribution& dist, Target target, const State& context);

}  // namespace netglm
