#include "netglm/estimator.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>

#include "netglm/csv_io.hpp"
#include "netglm/error.hpp"
#include "netglm/glm.hpp"
#include "netglm/quantile.hpp"

namespace netglm {

namespace {

// The pseudo-likelihood as a function of the degree block alone.
class DegreeBlock {
 public:
  DegreeBlock(const PlDesign& d, const Eigen::VectorXd& theta) : d_(d), offset_(generic_offsets(d, theta)) {
    counts_ = d.degree_counts();
  }

  double loglik(const Eigen::VectorXd& t1) const {
    double s = 0.0;
    for (int k = 0; k < d_.size(); ++k) {
      const Component& c = d_.comps[k];
      if (c.deg_a < 0) continue;
      s += component_loglik(c.family, c.value, eta(k, t1), c.scale);
    }
    return s;
  }

  // MM map: the binomial curvature is at most 1/4 and (a + b)^2 <= 2a^2 + 2b^2,
  // so l(t + d) >= l(t) + g.d - sum_a n_a d_a^2 / 4 with n_a the number of free
  // dyads touching coordinate a. Its maximizer is d_a = 2 g_a / n_a.
  Eigen::VectorXd map(const Eigen::VectorXd& t1) const {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(t1.size());
    for (int k = 0; k < d_.size(); ++k) {
      const Component& c = d_.comps[k];
      if (c.deg_a < 0) continue;
      double r = score_factor(c.family, c.value, eta(k, t1), c.scale);
      g[c.deg_a] += r;
      g[c.deg_b] += r;
    }
    Eigen::VectorXd out = t1;
    for (int a = 0; a < t1.size(); ++a)
      if (counts_[a] > 0) out[a] += 2.0 * g[a] / counts_[a];
    return out;
  }

 private:
  double eta(int k, const Eigen::VectorXd& t1) const {
    const Component& c = d_.comps[k];
    return offset_[k] + t1[c.deg_a] + t1[c.deg_b];
  }

  const PlDesign& d_;
  Eigen::VectorXd offset_;
  std::vector<int> counts_;
};

Eigen::VectorXd squarem_step(const DegreeBlock& blk, const Eigen::VectorXd& t0) {
  Eigen::VectorXd t1 = blk.map(t0);
  Eigen::VectorXd t2 = blk.map(t1);
  Eigen::VectorXd r = t1 - t0;
  Eigen::VectorXd v = t2 - t1 - r;
  double nv = v.norm();
  if (nv == 0.0) return t2;
  double alpha = std::min(-r.norm() / nv, -1.0);
  Eigen::VectorXd acc = t0 - 2.0 * alpha * r + alpha * alpha * v;
  // Fall back to the plain double MM step whenever extrapolation loses ground.
  double l_acc = blk.loglik(acc);
  if (std::isfinite(l_acc) && l_acc >= blk.loglik(t2)) return acc;
  return t2;
}

// In the directed case adding c to every out-weight and subtracting it from
// every in-weight leaves all predictors unchanged; pin equal means.
void center_degrees(Eigen::VectorXd& theta, int p1, bool directed) {
  if (!directed || p1 == 0) return;
  int n = p1 / 2;
  double c = (theta.segment(n, n).mean() - theta.head(n).mean()) / 2.0;
  theta.head(n).array() += c;
  theta.segment(n, n).array() -= c;
}

std::array<double, 5> degree_summary(const Eigen::VectorXd& theta, int p1) {
  std::vector<double> v(theta.data(), theta.data() + p1);
  return five_numbers(std::move(v));
}

}  // namespace

Eigen::VectorXd mm_degree_update(const PlDesign& d, const Eigen::VectorXd& theta, bool accelerate) {
  Eigen::VectorXd out = theta;
  if (d.p1 == 0) return out;
  DegreeBlock blk(d, theta);
  Eigen::VectorXd t1 = theta.head(d.p1);
  out.head(d.p1) = accelerate ? squarem_step(blk, t1) : blk.map(t1);
  return out;
}

NewtonStep newton_generic_update(const PlDesign& d, const Eigen::VectorXd& theta,
                                 const std::vector<std::string>& generic_labels, int max_halving) {
  const int p2 = d.p2;
  NewtonStep res{theta, 0.0, 0};
  if (p2 == 0) return res;

  Eigen::VectorXd eta = linear_predictors(d, theta);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(p2);
  Eigen::MatrixXd info = Eigen::MatrixXd::Zero(p2, p2);  // -H22
  double l0 = 0.0;
  for (int k = 0; k < d.size(); ++k) {
    const Component& c = d.comps[k];
    l0 += component_loglik(c.family, c.value, eta[k], c.scale);
    double r = score_factor(c.family, c.value, eta[k], c.scale);
    double w = curvature(c.family, eta[k], c.scale);
    auto row = d.delta.row(k);
    g.noalias() += r * row.transpose();
    info.noalias() += w * row.transpose() * row;
  }
  if (!std::isfinite(l0)) throw ConvergenceError("pseudo-likelihood is not finite at the current estimate");

  // Collinearity is judged on the unweighted design. Near saturation the
  // weighted block can look singular although the terms are fine.
  Eigen::VectorXd diag = info.diagonal();
  auto min_corr_eigen = [&](const Eigen::MatrixXd& m, Eigen::VectorXd* dir) {
    Eigen::VectorXd s = m.diagonal().cwiseSqrt().cwiseInverse();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s.asDiagonal() * m * s.asDiagonal());
    if (dir) *dir = eig.eigenvectors().col(0);
    return eig.eigenvalues()[0];
  };
  bool weak = false;
  for (int a = 0; a < p2; ++a) weak = weak || !(diag[a] > 0.0);
  if (weak || min_corr_eigen(info, nullptr) < 1e-10) {
    Eigen::MatrixXd gram = d.delta.transpose() * d.delta;
    for (int a = 0; a < p2; ++a)
      if (!(gram(a, a) > 0.0))
        throw ValidationError("term '" + generic_labels[a] + "' has no variation over the free components");
    Eigen::VectorXd u;
    if (min_corr_eigen(gram, &u) < 1e-10) {
      std::string names;
      for (int a = 0; a < p2; ++a)
        if (std::abs(u[a]) > 0.1) names += (names.empty() ? "" : ", ") + generic_labels[a];
      throw ValidationError("collinear terms: " + names);
    }
  }

  Eigen::VectorXd step;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
  if (!weak && ldlt.info() == Eigen::Success && ldlt.isPositive()) step = ldlt.solve(g);
  // LDLT silently drops zero pivots; a step that does not solve the system is rejected.
  auto solved = [&](const Eigen::VectorXd& v) {
    return v.size() == p2 && v.allFinite() &&
           (info * v - g).norm() <= 1e-8 * std::max(g.norm(), info.norm() * v.norm());
  };
  if (!solved(step)) {
    res.regularized = true;
    Eigen::MatrixXd ridge = info + 1e-8 * Eigen::MatrixXd::Identity(p2, p2);
    Eigen::LDLT<Eigen::MatrixXd> retry(ridge);
    if (retry.info() != Eigen::Success || !retry.isPositive())
      throw ValidationError("generic block of the Hessian is singular");
    step = retry.solve(g);
    if (!step.allFinite()) throw ValidationError("generic block of the Hessian is singular");
  }
  res.full_step_norm = step.lpNorm<Eigen::Infinity>();

  // Step-halving along dir; true when an ascent point was found.
  auto line_search = [&](const Eigen::VectorXd& dir) {
    Eigen::VectorXd deta = d.delta * dir;
    double t = 1.0;
    for (int h = 0; h <= max_halving; ++h, t *= 0.5) {
      double l = 0.0, slope = 0.0;
      for (int k = 0; k < d.size(); ++k) {
        const Component& c = d.comps[k];
        double e = eta[k] + t * deta[k];
        l += component_loglik(c.family, c.value, e, c.scale);
        slope += score_factor(c.family, c.value, e, c.scale) * deta[k];
      }
      // By concavity a non-negative slope at the trial point means l rose along
      // the whole segment. This still certifies ascent once the gain drops below
      // the rounding noise of the sum.
      if (std::isfinite(l) && (l >= l0 || slope >= 0.0)) {
        res.theta.tail(p2) += t * dir;
        res.halvings = h;
        return true;
      }
    }
    res.halvings = max_halving;
    return false;
  };
  if (line_search(step)) return res;
  // From a saturated start the Newton direction can be useless; fall back to
  // the gradient, scaled to unit sup-norm.
  res.regularized = true;
  double gmax = g.lpNorm<Eigen::Infinity>();
  if (gmax > 0.0) line_search(g / gmax);
  return res;
}

FitResult fit(const Model& model, const PopulationData& data, const FitConfig& config) {
  if (model.has_degrees()) {
    for (int i = 0; i < data.n(); ++i)
      if (data.z.out_degree(i) + (data.directed() ? data.z.in_degree(i) : 0) == 0)
        throw ValidationError("unit " + data.unit_ids[i] +
                              " is isolated; degree weights of isolated units do not exist (remove isolates first)");
  }
  PlDesign design = PlDesign::build(model, data, data.state());
  return fit(model, data, design, config);
}

FitResult fit(const Model& model, const PopulationData& data, const PlDesign& design, const FitConfig& config) {
  auto t_start = std::chrono::steady_clock::now();
  FitResult res;
  res.labels = model.labels();
  res.p1 = model.degree_dim();
  const int p1 = res.p1;
  const std::vector<std::string> glabels = model.generic_labels();

  Eigen::VectorXd theta = config.start ? *config.start : Eigen::VectorXd::Zero(model.dim());
  if (theta.size() != model.dim()) throw ValidationError("start vector has the wrong length");

  auto record = [&](int it, double l, double gn) {
    TraceRow row;
    row.iteration = it;
    row.loglik = l;
    row.grad_norm = gn;
    row.generic = theta.tail(model.generic_dim());
    if (p1 > 0) row.degree_summary = degree_summary(theta, p1);
    res.trace.push_back(std::move(row));
  };

  double l = pseudo_loglik(design, theta);
  double gn = pl_gradient(design, theta).lpNorm<Eigen::Infinity>();
  record(0, l, gn);
  (void)data;

  // One outer sweep: MM cycles on the degree block, then a Newton step on the rest.
  auto sweep = [&](Eigen::VectorXd t, double& step_norm) {
    if (p1 > 0)
      for (int c = 0; c < config.mm_cycles; ++c) t = mm_degree_update(design, t, config.mm_accel);
    step_norm = 0.0;
    if (model.generic_dim() > 0) {
      NewtonStep ns = newton_generic_update(design, t, glabels, config.step_halving_max);
      step_norm = ns.regularized ? std::numeric_limits<double>::infinity() : ns.full_step_norm;
      return ns.theta;
    }
    return t;
  };

  for (int it = 1; it <= config.max_it; ++it) {
    double step_norm = 0.0;
    Eigen::VectorXd t1 = sweep(theta, step_norm);
    // Alternating blocks converge linearly; with degrees present the sweep map
    // is extrapolated as well, kept only when it beats two plain sweeps.
    if (p1 > 0 && config.mm_accel && model.generic_dim() > 0) {
      double s2 = 0.0;
      Eigen::VectorXd t2 = sweep(t1, s2);
      Eigen::VectorXd r = t1 - theta, v = t2 - t1 - r;
      Eigen::VectorXd next = t2;
      step_norm = s2;
      double nv = v.norm();
      if (nv > 0.0) {
        double alpha = std::min(-r.norm() / nv, -1.0);
        Eigen::VectorXd acc = theta - 2.0 * alpha * r + alpha * alpha * v;
        if (std::isfinite(pseudo_loglik(design, acc))) {
          double s3 = 0.0;
          Eigen::VectorXd t3 = sweep(acc, s3);
          if (pseudo_loglik(design, t3) >= pseudo_loglik(design, t2)) {
            next = t3;
            step_norm = s3;
          }
        }
      }
      t1 = next;
    }
    theta = t1;
    double l_new = pseudo_loglik(design, theta);
    if (!std::isfinite(l_new))
      throw ConvergenceError("pseudo-likelihood diverged at iteration " + std::to_string(it));
    Eigen::VectorXd g = pl_gradient(design, theta);
    gn = g.lpNorm<Eigen::Infinity>();
    l = l_new;
    record(it, l, gn);
    res.iterations = it;
    if (gn < config.grad_tol && step_norm < config.step_tol) {
      res.converged = true;
      break;
    }
  }
  center_degrees(theta, p1, model.directed());
  res.theta = theta;
  res.loglik = l;
  res.grad_norm = gn;
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return res;
}

void write_trace_csv(const FitResult& fit, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << std::setprecision(17);
  out << "iteration,loglik,grad_norm";
  for (std::size_t k = fit.p1; k < fit.labels.size(); ++k) out << "," << csv_escape(fit.labels[k]);
  if (fit.p1 > 0) out << ",degree_min,degree_q1,degree_median,degree_q3,degree_max";
  out << "\n";
  for (const TraceRow& r : fit.trace) {
    out << r.iteration << "," << r.loglik << "," << r.grad_norm;
    for (double v : r.generic) out << "," << v;
    if (r.degree_summary)
      for (double v : *r.degree_summary) out << "," << v;
    out << "\n";
  }
}

}  // namespace netglm
