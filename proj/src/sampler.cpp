#include "netglm/sampler.hpp"

#include <cmath>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>

#include "netglm/error.hpp"
#include "netglm/glm.hpp"

namespace netglm {

SamplerConfig reference_shaped(const PopulationData& data, SamplerConfig base) {
  base.y_proposals_per_draw = 10 * data.n();
  std::int64_t free_dyads = 0;
  if (!data.z.fixed) {
    if (data.z.fixed_alocal_only) {
      for (int i = 0; i < data.n(); ++i)
        for (int j : data.nb->overlap_partners(i)) free_dyads += data.directed() || i < j;
    } else {
      free_dyads = dyad_count(data.n(), data.directed());
    }
  }
  base.z_proposals_per_draw = 10 * free_dyads;
  return base;
}

Sampler::Sampler(const Model& model, const PopulationData& design, const Eigen::VectorXd& theta, std::uint64_t seed,
                 std::optional<State> start)
    : model_(model),
      design_(design),
      theta_(theta),
      rng_(seed),
      state_(start ? std::move(*start) : design.state()),
      ctx_(design_, state_),
      scratch_(model.generic_dim()) {
  if (theta_.size() != model.dim()) throw ValidationError("theta has the wrong length for this model");
  if (state_.z.n() != design.n() || static_cast<int>(state_.x.size()) != design.n() ||
      static_cast<int>(state_.y.size()) != design.n())
    throw ValidationError("start state does not match the population size");
  stat_ = model.global_statistic(design_, state_);

  const int n = design.n();
  const bool directed = design.directed();
  if (!design.z.fixed) {
    if (design.z.fixed_alocal_only) {
      for (int i = 0; i < n; ++i)
        for (int j : design.nb->overlap_partners(i))
          if (directed || i < j) restricted_.emplace_back(i, j);
      proposable_ = static_cast<std::int64_t>(restricted_.size());
    } else {
      proposable_ = dyad_count(n, directed);
    }
  }
  for (auto [i, j] : state_.z.edge_list())
    if (proposable(i, j)) {
      edge_pos_.emplace(key(i, j), edge_keys_.size());
      edge_keys_.push_back(key(i, j));
    }
}

std::uint64_t Sampler::key(int i, int j) const {
  if (!design_.directed() && j < i) std::swap(i, j);
  return static_cast<std::uint64_t>(i) * design_.n() + j;
}

bool Sampler::proposable(int i, int j) const {
  if (design_.z.fixed) return false;
  return !design_.z.fixed_alocal_only || design_.nb->overlap(i, j);
}

void Sampler::pick_dyad(int& i, int& j) {
  if (!restricted_.empty()) {
    auto [a, b] = restricted_[uniform_index(rng_, restricted_.size())];
    i = a;
    j = b;
    return;
  }
  const int n = design_.n();
  i = static_cast<int>(uniform_index(rng_, n));
  j = static_cast<int>(uniform_index(rng_, n - 1));
  if (j >= i) ++j;
  if (!design_.directed() && j < i) std::swap(i, j);
}

// Linear predictor of z_ij with the dyad absent from state_.
double Sampler::eta_z(int i, int j, Eigen::VectorXd& delta) {
  const int p1 = model_.degree_dim(), p2 = model_.generic_dim();
  delta.setZero(model_.dim());
  model_.change_z(ctx_, i, j, scratch_.data());
  for (int k = 0; k < p2; ++k) delta[p1 + k] = scratch_[k];
  if (p1 > 0) {
    delta[model_.degree_out_index(i)] += 1.0;
    delta[model_.degree_in_index(j)] += 1.0;
  }
  return theta_.dot(delta);
}

void Sampler::add_edge(int i, int j, const Eigen::VectorXd& delta) {
  state_.z.add_edge(i, j);
  stat_ += delta;
  std::uint64_t k = key(i, j);
  edge_pos_.emplace(k, edge_keys_.size());
  edge_keys_.push_back(k);
}

void Sampler::remove_edge(int i, int j, const Eigen::VectorXd& delta) {
  state_.z.remove_edge(i, j);
  stat_ -= delta;
  std::uint64_t k = key(i, j);
  auto it = edge_pos_.find(k);
  std::size_t pos = it->second;
  edge_pos_.erase(it);
  if (pos + 1 != edge_keys_.size()) {
    edge_keys_[pos] = edge_keys_.back();
    edge_pos_[edge_keys_[pos]] = pos;
  }
  edge_keys_.pop_back();
}

void Sampler::gibbs_attribute_step(Target t) {
  const bool is_x = t.kind == Target::x;
  const AttributeVector& attr = is_x ? design_.x : design_.y;
  if (t.kind == Target::z) throw std::logic_error("gibbs_attribute_step needs an attribute target");
  if (attr.fixed) throw ValidationError("cannot resample a fixed attribute");
  const int p1 = model_.degree_dim(), p2 = model_.generic_dim();
  const int i = t.i;
  if (is_x)
    model_.change_x(ctx_, i, scratch_.data());
  else
    model_.change_y(ctx_, i, scratch_.data());
  double eta = 0.0;
  for (int k = 0; k < p2; ++k) eta += theta_[p1 + k] * scratch_[k];

  double value = 0.0;
  switch (attr.family) {
    case Family::binomial: value = uniform01(rng_) < logistic(eta) ? 1.0 : 0.0; break;
    case Family::poisson: {
      double mu = conditional_mean(Family::poisson, eta);
      if (mu > 1e15) throw NumericalError("poisson mean too large to sample: " + std::to_string(mu));
      value = mu <= 0.0 ? 0.0 : static_cast<double>(boost::random::poisson_distribution<long long, double>(mu)(rng_));
      break;
    }
    case Family::normal:
      value = boost::random::normal_distribution<double>(eta, std::sqrt(attr.scale))(rng_);
      break;
  }
  double& slot = is_x ? state_.x[i] : state_.y[i];
  double old_scaled = attr.family == Family::normal ? slot / attr.scale : slot;
  double new_scaled = attr.family == Family::normal ? value / attr.scale : value;
  slot = value;
  if (new_scaled != old_scaled)
    for (int k = 0; k < p2; ++k) stat_[p1 + k] += scratch_[k] * (new_scaled - old_scaled);
  ++transitions_;
}

void Sampler::z_step(ZKernel kernel) {
  if (proposable_ == 0) throw ValidationError("network is fixed; no connection can be resampled");
  Eigen::VectorXd delta;
  if (kernel == ZKernel::gibbs) {
    int i, j;
    pick_dyad(i, j);
    bool was = state_.z.has_edge(i, j);
    if (was) state_.z.remove_edge(i, j);
    double eta = eta_z(i, j, delta);
    bool now = uniform01(rng_) < logistic(eta);
    if (was) state_.z.add_edge(i, j);
    if (now && !was) add_edge(i, j, delta);
    if (!now && was) remove_edge(i, j, delta);
    ++transitions_;
    return;
  }

  // Tie / no-tie: pick the edge class or the non-edge class with probability
  // 1/2 (forced when one class is empty), then a uniform member of it.
  const double e = static_cast<double>(edge_keys_.size());
  const double ne = static_cast<double>(proposable_) - e;
  auto remove_class_prob = [](double edges, double non_edges) {
    if (edges == 0) return 0.0;
    if (non_edges == 0) return 1.0;
    return 0.5;
  };
  double q_rem = remove_class_prob(e, ne);
  bool remove = q_rem == 1.0 || (q_rem > 0.0 && uniform01(rng_) < q_rem);
  int i, j;
  if (remove) {
    std::uint64_t k = edge_keys_[uniform_index(rng_, edge_keys_.size())];
    i = static_cast<int>(k / design_.n());
    j = static_cast<int>(k % design_.n());
    state_.z.remove_edge(i, j);
    double eta = eta_z(i, j, delta);
    double log_ratio = -eta + std::log((1.0 - remove_class_prob(e - 1, ne + 1)) / (ne + 1)) - std::log(q_rem / e);
    state_.z.add_edge(i, j);
    if (std::log(uniform01(rng_)) < log_ratio) remove_edge(i, j, delta);
  } else {
    do pick_dyad(i, j);
    while (state_.z.has_edge(i, j));
    double eta = eta_z(i, j, delta);
    double log_ratio = eta + std::log(remove_class_prob(e + 1, ne - 1) / (e + 1)) - std::log((1.0 - q_rem) / ne);
    if (std::log(uniform01(rng_)) < log_ratio) add_edge(i, j, delta);
  }
  ++transitions_;
}

void Sampler::draw(const SamplerConfig& config, int y_count, std::int64_t z_count, int& x_cursor, int& y_cursor) {
  const int n = design_.n();
  if (!design_.x.fixed)
    for (int k = 0; k < y_count; ++k) {
      gibbs_attribute_step(Target::of_x(x_cursor));
      x_cursor = (x_cursor + 1) % n;
    }
  if (!design_.y.fixed)
    for (int k = 0; k < y_count; ++k) {
      gibbs_attribute_step(Target::of_y(y_cursor));
      y_cursor = (y_cursor + 1) % n;
    }
  if (proposable_ > 0)
    for (std::int64_t k = 0; k < z_count; ++k) z_step(config.z_kernel);
}

SimulationResult Sampler::run(const SamplerConfig& config) {
  const int n = design_.n();
  int y_count = config.y_proposals_per_draw > 0 ? config.y_proposals_per_draw : 10 * n;
  std::int64_t z_count = config.z_proposals_per_draw > 0 ? config.z_proposals_per_draw : 10 * n;
  int x_cursor = 0, y_cursor = 0;
  std::uint64_t start = transitions_;
  for (int b = 0; b < config.n_burn_in; ++b) draw(config, y_count, z_count, x_cursor, y_cursor);
  SimulationResult res;
  for (int s = 0; s < config.n_simulation; ++s) {
    draw(config, y_count, z_count, x_cursor, y_cursor);
    if (config.verify_every > 0 && s % config.verify_every == 0) {
      Eigen::VectorXd exact = model_.global_statistic(design_, state_);
      double tol = 1e-8 * std::max(1.0, exact.lpNorm<Eigen::Infinity>());
      if ((exact - stat_).lpNorm<Eigen::Infinity>() > tol)
        throw NumericalError("running statistic drifted from the recomputed value at draw " + std::to_string(s));
    }
    res.statistics.push_back(stat_);
    if (config.keep_states) res.states.push_back(state_);
  }
  res.transitions = transitions_ - start;
  return res;
}

SimulationResult simulate(const Model& model, const Eigen::VectorXd& theta, const PopulationData& data,
                          const SamplerConfig& config) {
  if (config.n_simulation <= 0) throw ValidationError("n_simulation must be positive");
  if (config.n_burn_in < 0) throw ValidationError("n_burn_in must be non-negative");
  Sampler s(model, data, theta, config.seed, config.start);
  return s.run(config);
}

}  // namespace netglm
