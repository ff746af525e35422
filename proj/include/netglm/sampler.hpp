#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "netglm/model.hpp"
#include "netglm/rng.hpp"

namespace netglm {

enum class ZKernel { gibbs, tnt };

struct SamplerConfig {
  int n_burn_in = 100;  // discarded draws
  int n_simulation = 100;
  std::uint64_t seed = 1;
  // Single-unit attribute updates per draw (systematic scan); 0 means 10 N.
  int y_proposals_per_draw = 0;
  // Connection proposals per draw; 0 means 10 N.
  std::int64_t z_proposals_per_draw = 0;
  ZKernel z_kernel = ZKernel::tnt;
  bool keep_states = true;
  // Start from this state instead of the observed data.
  std::optional<State> start;
  // Recompute the global statistic every k-th recorded draw and fail on drift (0 = off).
  int verify_every = 0;
};

// Proposal counts of the reference workflow: 10 N attribute updates and
// 10 proposals per free dyad.
SamplerConfig reference_shaped(const PopulationData& data, SamplerConfig base = {});

struct SimulationResult {
  std::vector<State> states;
  std::vector<Eigen::VectorXd> statistics;
  std::uint64_t transitions = 0;
};

// Single Markov chain over (x, y, z) holding its running sufficient statistic.
class Sampler {
 public:
  Sampler(const Model& model, const PopulationData& design, const Eigen::VectorXd& theta, std::uint64_t seed,
          std::optional<State> start = std::nullopt);

  // Draw from the full conditional of one attribute.
  void gibbs_attribute_step(Target t);
  // One connection proposal with the given kernel.
  void z_step(ZKernel kernel);
  // Runs burn-in and recorded draws.
  SimulationResult run(const SamplerConfig& config);

  const State& state() const { return state_; }
  const Eigen::VectorXd& statistic() const { return stat_; }
  std::uint64_t transitions() const { return transitions_; }
  // Number of dyads the connection kernels may toggle.
  std::int64_t proposable_dyads() const { return proposable_; }

 private:
  std::uint64_t key(int i, int j) const;
  void pick_dyad(int& i, int& j);
  bool proposable(int i, int j) const;
  double eta_z(int i, int j, Eigen::VectorXd& delta);
  void add_edge(int i, int j, const Eigen::VectorXd& delta);
  void remove_edge(int i, int j, const Eigen::VectorXd& delta);
  void draw(const SamplerConfig& config, int y_count, std::int64_t z_count, int& x_cursor, int& y_cursor);

  const Model& model_;
  const PopulationData& design_;
  Eigen::VectorXd theta_;
  SplitMix64 rng_;
  State state_;
  TermContext ctx_;
  Eigen::VectorXd stat_;
  std::uint64_t transitions_ = 0;

  std::int64_t proposable_ = 0;
  std::vector<std::pair<int, int>> restricted_;  // proposable dyads when not all are
  std::vector<std::uint64_t> edge_keys_;          // proposable edges
  std::unordered_map<std::uint64_t, std::size_t> edge_pos_;
  std::vector<double> scratch_;
};

SimulationResult simulate(const Model& model, const Eigen::VectorXd& theta, const PopulationData& data,
                          const SamplerConfig& config);

}  // namespace netglm
