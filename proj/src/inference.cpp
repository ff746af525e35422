#include "netglm/inference.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "netglm/error.hpp"
#include "netglm/quantile.hpp"

namespace netglm {

namespace {

// v solving (-H) v = g. The directed degree block has the null direction
// (+1 on out-weights, -1 on in-weights); g is orthogonal to it, so adding a
// multiple of u u^T makes the system definite without changing the solution
// in the complement.
std::optional<Eigen::VectorXd> solve_sample(const Eigen::MatrixXd& neg_h, const Eigen::VectorXd& g, int p1,
                                            bool directed) {
  Eigen::MatrixXd a = neg_h;
  if (directed && p1 > 0) {
    int n = p1 / 2;
    Eigen::VectorXd u = Eigen::VectorXd::Zero(a.rows());
    u.head(n).setOnes();
    u.segment(n, n).setConstant(-1.0);
    double s = neg_h.diagonal().head(p1).mean() / p1;
    a.noalias() += s * u * u.transpose();
  }
  double tol = 1e-6 * (1.0 + g.norm());
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() == Eigen::Success) {
    Eigen::VectorXd v = llt.solve(g);
    if (v.allFinite() && (neg_h * v - g).norm() <= tol) return v;
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(neg_h);
  Eigen::VectorXd v = cod.solve(g);
  if (v.allFinite() && (neg_h * v - g).norm() <= tol) return v;
  return std::nullopt;
}

DegreeSummary degree_summary(const Eigen::VectorXd& v) {
  std::vector<double> s(v.data(), v.data() + v.size());
  auto f = five_numbers(s);
  return {f[0], f[1], f[2], v.mean(), f[3], f[4]};
}

std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string format_t(const SummaryRow& r) {
  if (std::isinf(r.t)) return r.t > 0 ? "Inf" : "-Inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", r.t);
  return buf;
}

std::string pad_left(const std::string& s, std::size_t w) { return s.size() >= w ? s : std::string(w - s.size(), ' ') + s; }
std::string pad_right(const std::string& s, std::size_t w) { return s.size() >= w ? s : s + std::string(w - s.size(), ' '); }

std::string render_degree_block(const DegreeSummary& d, const std::string& indent) {
  static const char* heads[] = {"Min.", "1st Qu.", "Median", "Mean", "3rd Qu.", "Max."};
  std::string h = indent, v = indent;
  for (int k = 0; k < 6; ++k) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", d[k]);
    std::size_t w = std::max<std::size_t>(std::string(heads[k]).size(), std::string(buf).size()) + 1;
    h += pad_left(heads[k], w);
    v += pad_left(buf, w);
  }
  return h + "\n" + v + "\n";
}

std::string format_seconds(double s) {
  char buf[64];
  if (s < 60.0)
    std::snprintf(buf, sizeof buf, "%.1f secs", s);
  else
    std::snprintf(buf, sizeof buf, "%.1f mins", s / 60.0);
  return buf;
}

}  // namespace

CovarianceResult mple_covariance(const Model& model, const PopulationData& data, const Eigen::VectorXd& theta_hat,
                                 const std::vector<State>& samples, int threads) {
  const int p = model.dim();
  if (theta_hat.size() != p) throw ValidationError("theta has the wrong length for this model");
  if (samples.empty()) throw ValidationError("covariance needs at least one simulated state");
  // Per-sample solves are independent; slots keep sample order so the reduction
  // below does not depend on the thread count.
  std::vector<std::optional<Eigen::VectorXd>> slots(samples.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (std::size_t m; (m = next.fetch_add(1)) < samples.size();) {
      try {
        PlDesign d = PlDesign::build(model, data, samples[m]);
        PlEvaluation e = evaluate_all(d, theta_hat);
        slots[m] = solve_sample(-e.hessian, e.gradient, model.degree_dim(), model.directed());
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  int workers = std::clamp<int>(threads, 1, static_cast<int>(samples.size()));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  std::vector<Eigen::VectorXd> vs;
  CovarianceResult res;
  for (auto& v : slots) {
    if (v)
      vs.push_back(std::move(*v));
    else
      ++res.dropped;
  }
  if (res.dropped * 10 > static_cast<int>(samples.size()))
    throw NumericalError("covariance: " + std::to_string(res.dropped) + " of " + std::to_string(samples.size()) +
                         " simulated Hessians were singular");
  res.used = static_cast<int>(vs.size());
  res.covariance = Eigen::MatrixXd::Zero(p, p);
  if (res.used < 2) return res;
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(p);
  for (const auto& v : vs) mean += v;
  mean /= res.used;
  for (const auto& v : vs) {
    Eigen::VectorXd c = v - mean;
    res.covariance.noalias() += c * c.transpose();
  }
  res.covariance /= (res.used - 1);
  res.covariance = 0.5 * (res.covariance + res.covariance.transpose()).eval();
  return res;
}

SummaryRow summary_row(const std::string& label, double estimate, double se) {
  SummaryRow r{label, estimate, se, 0.0, 1.0, false};
  if (estimate == 0.0) return r;
  if (se == 0.0) {
    r.t = estimate > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
    r.p = 0.0;
    r.degenerate_se = true;
    return r;
  }
  r.t = estimate / se;
  r.p = std::erfc(std::abs(r.t) / std::sqrt(2.0));
  return r;
}

SummaryTable summarize(const FitResult& fit, const Eigen::MatrixXd& covariance) {
  const int p = static_cast<int>(fit.theta.size());
  if (covariance.rows() != p || covariance.cols() != p)
    throw ValidationError("covariance dimension does not match the estimate");
  SummaryTable t;
  for (int k = fit.p1; k < p; ++k)
    t.rows.push_back(summary_row(fit.labels[k], fit.theta[k], std::sqrt(std::max(0.0, covariance(k, k)))));
  if (fit.p1 > 0) {
    bool directed = fit.labels[0].rfind("outdeg_", 0) == 0;
    if (directed) {
      int n = fit.p1 / 2;
      t.out_degrees = degree_summary(fit.theta.head(n));
      t.in_degrees = degree_summary(fit.theta.segment(n, n));
    } else {
      t.out_degrees = degree_summary(fit.theta.head(fit.p1));
    }
  }
  t.seconds = fit.seconds;
  return t;
}

std::string format_p(double p) {
  if (p < 1e-4) return "<0.0001";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", p);
  return buf;
}

std::string format_row(const SummaryRow& row, std::size_t label_width) {
  std::string s = pad_right(row.label, label_width);
  s += pad_left(fixed4(row.estimate), 10);
  s += pad_left(fixed4(row.se), 8);
  s += pad_left(format_t(row), 8);
  s += pad_left(format_p(row.p), 9);
  if (row.degenerate_se) s += "  (zero S.E.)";
  return s;
}

std::string render_summary(const SummaryTable& table, bool with_time) {
  std::size_t w = 0;
  for (const auto& r : table.rows) w = std::max(w, r.label.size());
  w += 2;
  std::ostringstream out;
  out << "netglm fit\n" << std::string(w + 35, '-') << "\nResults: \n\n";
  out << pad_right("", w) << pad_left("Estimate", 10) << pad_left("S.E.", 8) << pad_left("t-value", 8)
      << pad_left("Pr(>|t|)", 9) << "\n";
  for (const auto& r : table.rows) out << format_row(r, w) << "\n";
  if (with_time) out << "\nTime for estimation: " << format_seconds(table.seconds) << "\n";
  if (table.out_degrees) {
    out << "\nDegree Parameters:\n";
    if (table.in_degrees) {
      out << "  Outdegrees:\n" << render_degree_block(*table.out_degrees, "  ");
      out << "\n  Indegrees:\n" << render_degree_block(*table.in_degrees, "  ");
    } else {
      out << render_degree_block(*table.out_degrees, "");
    }
  }
  return out.str();
}

nlohmann::json summary_json(const SummaryTable& table, bool with_time) {
  nlohmann::json j;
  j["terms"] = nlohmann::json::array();
  for (const auto& r : table.rows) {
    nlohmann::json row{{"label", r.label}, {"estimate", r.estimate}, {"se", r.se}, {"p", r.p}};
    row["t"] = std::isinf(r.t) ? nlohmann::json(r.t > 0 ? "Inf" : "-Inf") : nlohmann::json(r.t);
    if (r.degenerate_se) row["zero_se"] = true;
    j["terms"].push_back(row);
  }
  auto deg = [](const DegreeSummary& d) {
    return nlohmann::json{{"min", d[0]}, {"q1", d[1]}, {"median", d[2]}, {"mean", d[3]}, {"q3", d[4]}, {"max", d[5]}};
  };
  if (table.in_degrees) {
    j["degrees"] = {{"out", deg(*table.out_degrees)}, {"in", deg(*table.in_degrees)}};
  } else if (table.out_degrees) {
    j["degrees"] = deg(*table.out_degrees);
  }
  if (with_time) j["seconds"] = table.seconds;
  return j;
}

}  // namespace netglm
