#include "netglm/exact_oracle.hpp"

#include <bit>
#include <cmath>

#include "netglm/error.hpp"
#include "netglm/glm.hpp"

namespace netglm {

namespace {

std::vector<Target> free_variables(const PopulationData& d) {
  std::vector<Target> v;
  const int n = d.n();
  if (!d.x.fixed) {
    if (d.x.family != Family::binomial) throw ValidationError("enumeration needs binary free attributes");
    for (int i = 0; i < n; ++i) v.push_back(Target::of_x(i));
  }
  if (!d.y.fixed) {
    if (d.y.family != Family::binomial) throw ValidationError("enumeration needs binary free attributes");
    for (int i = 0; i < n; ++i) v.push_back(Target::of_y(i));
  }
  if (!d.z.fixed)
    for (int i = 0; i < n; ++i)
      for (int j = d.directed() ? 0 : i + 1; j < n; ++j) {
        if (i == j) continue;
        if (d.z.fixed_alocal_only && !d.nb->overlap(i, j)) continue;
        v.push_back(Target::of_z(i, j));
      }
  return v;
}

bool read(const State& s, Target t) {
  switch (t.kind) {
    case Target::x: return s.x[t.i] == 1.0;
    case Target::y: return s.y[t.i] == 1.0;
    case Target::z: return s.z.has_edge(t.i, t.j);
  }
  return false;
}

void write(State& s, Target t, bool on) {
  switch (t.kind) {
    case Target::x: s.x[t.i] = on ? 1.0 : 0.0; break;
    case Target::y: s.y[t.i] = on ? 1.0 : 0.0; break;
    case Target::z:
      if (on)
        s.z.add_edge(t.i, t.j);
      else
        s.z.remove_edge(t.i, t.j);
      break;
  }
}

bool same(Target a, Target b) { return a.kind == b.kind && a.i == b.i && (a.kind != Target::z || a.j == b.j); }

}  // namespace

State ExactDistribution::state_at(std::uint64_t index) const {
  State s = design->state();
  for (std::size_t k = 0; k < vars.size(); ++k) write(s, vars[k], (index >> k) & 1u);
  return s;
}

std::uint64_t ExactDistribution::index_of(const State& s) const {
  std::uint64_t idx = 0;
  for (std::size_t k = 0; k < vars.size(); ++k)
    if (read(s, vars[k])) idx |= std::uint64_t{1} << k;
  return idx;
}

int ExactDistribution::bit_of(Target t) const {
  if (t.kind == Target::z && !design->directed() && t.j < t.i) std::swap(t.i, t.j);
  for (std::size_t k = 0; k < vars.size(); ++k)
    if (same(vars[k], t)) return static_cast<int>(k);
  return -1;
}

ExactDistribution enumerate(const Model& model, const PopulationData& design, const Eigen::VectorXd& theta,
                            Enumeration how) {
  if (theta.size() != model.dim()) throw ValidationError("theta has the wrong length for this model");
  ExactDistribution dist;
  dist.design = &design;
  dist.vars = free_variables(design);
  const int bits = static_cast<int>(dist.vars.size());
  if (bits > kMaxOracleBits)
    throw ValidationError("enumeration over " + std::to_string(bits) + " free components exceeds the limit of " +
                          std::to_string(kMaxOracleBits));
  const std::uint64_t count = std::uint64_t{1} << bits;
  const bool keep = bits <= 20;
  dist.log_weight.resize(count);
  if (keep) dist.statistics.resize(static_cast<Eigen::Index>(count), model.dim());

  if (how == Enumeration::direct) {
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      Eigen::VectorXd s = model.global_statistic(design, dist.state_at(idx));
      dist.log_weight[idx] = theta.dot(s);
      if (keep) dist.statistics.row(static_cast<Eigen::Index>(idx)) = s.transpose();
    }
  } else {
    State st = dist.state_at(0);
    Eigen::VectorXd s = model.global_statistic(design, st);
    std::uint64_t idx = 0;
    for (std::uint64_t step = 0; step < count; ++step) {
      if (step > 0) {
        int k = std::countr_zero(step);  // the Gray code flips this bit
        Target t = dist.vars[k];
        bool on = (idx >> k) & 1u;
        Eigen::VectorXd delta = model.change_statistic(design, st, t);
        if (on)
          s -= delta;
        else
          s += delta;
        write(st, t, !on);
        idx ^= std::uint64_t{1} << k;
      }
      dist.log_weight[idx] = theta.dot(s);
      if (keep) dist.statistics.row(static_cast<Eigen::Index>(idx)) = s.transpose();
    }
  }

  double mx = *std::max_element(dist.log_weight.begin(), dist.log_weight.end());
  double sum = 0.0;
  for (double lw : dist.log_weight) sum += std::exp(lw - mx);
  dist.log_c = mx + std::log(sum);
  dist.prob.resize(count);
  for (std::uint64_t idx = 0; idx < count; ++idx) dist.prob[idx] = std::exp(dist.log_weight[idx] - dist.log_c);
  return dist;
}

double exact_conditional(const ExactDistribution& dist, Target target, const State& context) {
  int b = dist.bit_of(target);
  if (b < 0) throw ValidationError("target is fixed or not binary; no conditional to enumerate");
  std::uint64_t idx = dist.index_of(context);
  std::uint64_t on = idx | (std::uint64_t{1} << b);
  std::uint64_t off = idx & ~(std::uint64_t{1} << b);
  return logistic(dist.log_weight[on] - dist.log_weight[off]);
}

}  // namespace netglm
