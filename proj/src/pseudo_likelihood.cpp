#include "netglm/pseudo_likelihood.hpp"

#include <cmath>
#include <string>

#include "netglm/error.hpp"
#include "netglm/glm.hpp"

namespace netglm {

PlDesign PlDesign::build(const Model& model, const PopulationData& design, const State& s) {
  PlDesign d;
  d.p1 = model.degree_dim();
  d.p2 = model.generic_dim();
  const int n = design.n();
  const bool directed = design.directed();
  const Network& z0 = design.z;

  std::vector<Component> comps;
  if (!design.x.fixed)
    for (int i = 0; i < n; ++i) comps.push_back({Target::x, i, -1, s.x[i], design.x.family, design.x.scale});
  if (!design.y.fixed)
    for (int i = 0; i < n; ++i) comps.push_back({Target::y, i, -1, s.y[i], design.y.family, design.y.scale});
  if (!z0.fixed) {
    for (int i = 0; i < n; ++i)
      for (int j = directed ? 0 : i + 1; j < n; ++j) {
        if (i == j) continue;
        if (z0.fixed_alocal_only && !design.nb->overlap(i, j)) continue;
        Component c{Target::z, i, -1, 0.0, Family::binomial, 1.0};
        c.j = j;
        c.value = s.z.has_edge(i, j) ? 1.0 : 0.0;
        if (d.p1 > 0) {
          c.deg_a = model.degree_out_index(i);
          c.deg_b = model.degree_in_index(j);
        }
        comps.push_back(c);
      }
  }
  d.comps = std::move(comps);
  d.delta.resize(d.size(), d.p2);

  State work = s;
  TermContext ctx(design, work);
  for (int k = 0; k < d.size(); ++k) {
    const Component& c = d.comps[k];
    double* row = d.delta.row(k).data();
    switch (c.kind) {
      case Target::x: model.change_x(ctx, c.i, row); break;
      case Target::y: model.change_y(ctx, c.i, row); break;
      case Target::z:
        if (c.value == 1.0) {
          work.z.remove_edge(c.i, c.j);
          model.change_z(ctx, c.i, c.j, row);
          work.z.add_edge(c.i, c.j);
        } else {
          model.change_z(ctx, c.i, c.j, row);
        }
        break;
    }
  }
  return d;
}

std::vector<int> PlDesign::degree_counts() const {
  std::vector<int> cnt(p1, 0);
  for (const Component& c : comps)
    if (c.deg_a >= 0) {
      ++cnt[c.deg_a];
      ++cnt[c.deg_b];
    }
  return cnt;
}

double linear_predictor(const Eigen::VectorXd& theta, const Eigen::VectorXd& delta) {
  if (theta.size() != delta.size())
    throw ValidationError("dimension mismatch: theta has " + std::to_string(theta.size()) + " entries, delta " +
                          std::to_string(delta.size()));
  return theta.dot(delta);
}

Eigen::VectorXd generic_offsets(const PlDesign& d, const Eigen::VectorXd& theta) {
  if (d.p2 == 0) return Eigen::VectorXd::Zero(d.size());
  return d.delta * theta.tail(d.p2);
}

Eigen::VectorXd linear_predictors(const PlDesign& d, const Eigen::VectorXd& theta) {
  if (theta.size() != d.dim())
    throw ValidationError("theta has " + std::to_string(theta.size()) + " entries, model needs " +
                          std::to_string(d.dim()));
  Eigen::VectorXd eta = generic_offsets(d, theta);
  for (int k = 0; k < d.size(); ++k) {
    const Component& c = d.comps[k];
    if (c.deg_a >= 0) eta[k] += theta[c.deg_a] + theta[c.deg_b];
  }
  return eta;
}

namespace {

[[noreturn]] void non_finite(const PlDesign& d, int k) {
  const Component& c = d.comps[k];
  std::string what = c.kind == Target::x ? "x[" + std::to_string(c.i) + "]"
                     : c.kind == Target::y ? "y[" + std::to_string(c.i) + "]"
                                           : "z[" + std::to_string(c.i) + "," + std::to_string(c.j) + "]";
  throw NumericalError("non-finite pseudo-likelihood contribution at component " + std::to_string(k) + " (" + what +
                       ")");
}

void accumulate_gradient(const PlDesign& d, int k, double r, Eigen::VectorXd& g) {
  const Component& c = d.comps[k];
  if (c.deg_a >= 0) {
    g[c.deg_a] += r;
    g[c.deg_b] += r;
  }
  if (d.p2 > 0) g.tail(d.p2).noalias() += r * d.delta.row(k).transpose();
}

void accumulate_hessian(const PlDesign& d, int k, double w, Eigen::MatrixXd& h) {
  const Component& c = d.comps[k];
  const int p1 = d.p1, p2 = d.p2;
  const double* row = d.delta.row(k).data();
  for (int a = 0; a < p2; ++a) {
    double wa = w * row[a];
    if (wa == 0.0) continue;
    for (int b = 0; b <= a; ++b) h(p1 + a, p1 + b) -= wa * row[b];
  }
  if (c.deg_a >= 0) {
    int u = c.deg_a, v = c.deg_b;
    h(u, u) -= w;
    h(v, v) -= w;
    if (u != v) h(std::max(u, v), std::min(u, v)) -= w;
    for (int a = 0; a < p2; ++a) {
      h(p1 + a, u) -= w * row[a];
      h(p1 + a, v) -= w * row[a];
    }
  }
}

void symmetrize_lower(Eigen::MatrixXd& h) {
  for (int a = 0; a < h.rows(); ++a)
    for (int b = 0; b < a; ++b) h(b, a) = h(a, b);
}

}  // namespace

double pseudo_loglik(const PlDesign& d, const Eigen::VectorXd& theta) {
  Eigen::VectorXd eta = linear_predictors(d, theta);
  double total = 0.0;
  for (int k = 0; k < d.size(); ++k) {
    const Component& c = d.comps[k];
    double v = component_loglik(c.family, c.value, eta[k], c.scale);
    if (!std::isfinite(v)) non_finite(d, k);
    total += v;
  }
  return total;
}

Eigen::VectorXd pl_gradient(const PlDesign& d, const Eigen::VectorXd& theta) {
  Eigen::VectorXd eta = linear_predictors(d, theta);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(d.dim());
  for (int k = 0; k < d.size(); ++k) {
    const Component& c = d.comps[k];
    double r = score_factor(c.family, c.value, eta[k], c.scale);
    if (!std::isfinite(r)) non_finite(d, k);
    accumulate_gradient(d, k, r, g);
  }
  return g;
}

Eigen::MatrixXd pl_hessian(const PlDesign& d, const Eigen::VectorXd& theta) {
  Eigen::VectorXd eta = linear_predictors(d, theta);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(d.dim(), d.dim());
  for (int k = 0; k < d.size(); ++k) {
    const Component& c = d.comps[k];
    double w = curvature(c.family, eta[k], c.scale);
    if (!std::isfinite(w)) non_finite(d, k);
    accumulate_hessian(d, k, w, h);
  }
  symmetrize_lower(h);
  return h;
}

PlEvaluation evaluate_all(const PlDesign& d, const Eigen::VectorXd& theta) {
  Eigen::VectorXd eta = linear_predictors(d, theta);
  PlEvaluation e{0.0, Eigen::VectorXd::Zero(d.dim()), Eigen::MatrixXd::Zero(d.dim(), d.dim())};
  for (int k = 0; k < d.size(); ++k) {
    const Component& c = d.comps[k];
    double v = component_loglik(c.family, c.value, eta[k], c.scale);
    double r = score_factor(c.family, c.value, eta[k], c.scale);
    double w = curvature(c.family, eta[k], c.scale);
    if (!std::isfinite(v) || !std::isfinite(r) || !std::isfinite(w)) non_finite(d, k);
    e.loglik += v;
    accumulate_gradient(d, k, r, e.gradient);
    accumulate_hessian(d, k, w, e.hessian);
  }
  symmetrize_lower(e.hessian);
  return e;
}

double pseudo_loglik(const Model& model, const PopulationData& design, const State& s, const Eigen::VectorXd& theta) {
  return pseudo_loglik(PlDesign::build(model, design, s), theta);
}

}  // namespace netglm
