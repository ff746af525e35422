// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "unit/chain_checks.hpp"
#include "unit/formula_fuzz.hpp"
#include "unit/helpers.hpp"
#include "netglm/error.hpp"
#include "netglm/estimator.hpp"
#include "netglm/exact_oracle.hpp"
#include "netglm/fixtures.hpp"
#include "netglm/glm.hpp"
#include "netglm/inference.hpp"
#include "netglm/sampler.hpp"

using namespace netglm;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Eigen::VectorXd random_theta(int p, SplitMix64& rng, double scale) {
  Eigen::VectorXd t(p);
  for (int k = 0; k < p; ++k) t[k] = (uniform01(rng) * 2.0 - 1.0) * scale;
  return t;
}

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  int k = 0;
  for (double x : v) out[k++] = x;
  return out;
}

PopulationData blank(int n, bool directed, bool fix_x, bool fix_z = false) {
  RawPopulation raw;
  for (int i = 0; i < n; ++i) {
    raw.unit_ids.push_back("u" + std::to_string(i));
    raw.x.push_back(i % 2);
    raw.y.push_back(0.0);
  }
  BuildFlags f;
  f.directed = directed;
  f.fix_x = fix_x;
  f.fix_z = fix_z;
  return build_population(raw, f);
}

Outcome conditional_correctness() {
  auto t0 = std::chrono::steady_clock::now();
  PopulationData d = blank(3, true, false);
  Model m = Model::bind(parse_formula("attribute_y + attribute_xy + edges(mode = 'global') + edges(mode = 'local') + "
                                     "edges(mode = 'alocal') + mutual(mode = 'local') + transitive + "
                                     "spillover_yx(mode = 'local') + spillover_yy(mode = 'local')"),
                        d);
  SplitMix64 rng(101);
  double worst = 0.0;
  std::size_t checked = 0;
  for (int rep = 0; rep < 3; ++rep) {
    Eigen::VectorXd theta = random_theta(m.dim(), rng, 1.0);
    ExactDistribution dist = enumerate(m, d, theta);
    std::vector<Target> targets;
    for (int i = 0; i < 3; ++i) {
      targets.push_back(Target::of_x(i));
      targets.push_back(Target::of_y(i));
      for (int j = 0; j < 3; ++j)
        if (i != j) targets.push_back(Target::of_z(i, j));
    }
    for (std::uint64_t s = 0; s < dist.size(); ++s) {
      State ctx = dist.state_at(s);
      for (Target t : targets) {
        double eta = m.change_statistic(d, ctx, t).dot(theta);
        worst = std::max(worst, std::abs(exact_conditional(dist, t, ctx) - logistic(eta)));
        ++checked;
      }
    }
  }
  double secs = seconds_since(t0);
  return {worst < 1e-12 && secs < 30.0, std::to_string(checked) + " conditionals, max error " + fmt("%.2e", worst) +
                                            ", " + fmt("%.1f", secs) + " s"};
}

// Largest |incremental - brute force| over every free binary target of s.
double change_error(const Model& m, const PopulationData& d, const State& s) {
  auto toggled = [&](Target t, double v) {
    State c = s;
    switch (t.kind) {
      case Target::Kind::x: c.x[t.i] = v; break;
      case Target::Kind::y: c.y[t.i] = v; break;
      case Target::Kind::z:
        if (v == 1.0)
          c.z.add_edge(t.i, t.j);
        else
          c.z.remove_edge(t.i, t.j);
        break;
    }
    return m.global_statistic(d, c);
  };
  double worst = 0.0;
  auto check = [&](Target t) {
    Eigen::VectorXd brute = toggled(t, 1.0) - toggled(t, 0.0);
    worst = std::max(worst, (m.change_statistic(d, s, t) - brute).lpNorm<Eigen::Infinity>());
  };
  for (int i = 0; i < d.n(); ++i) {
    check(Target::of_x(i));
    check(Target::of_y(i));
    for (int j = d.directed() ? 0 : i + 1; j < d.n(); ++j)
      if (i != j) check(Target::of_z(i, j));
  }
  return worst;
}

Outcome change_statistics() {
  auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  std::size_t terms = 0;
  std::string worst_term;
  for (bool directed : {true, false})
    for (const auto& term : testing::catalog_terms(directed)) {
      ++terms;
      for (std::uint64_t k = 0; k < 200; ++k) {
        testing::RandomSpec spec;
        spec.n = 3 + static_cast<int>(k % 4);
        spec.directed = directed;
        spec.edge_p = 0.15 + 0.1 * static_cast<double>(k % 6);
        PopulationData d = testing::random_population(spec, 50000 + k);
        double e = change_error(Model::bind(parse_formula(term), d), d, d.state());
        if (e > worst) {
          worst = e;
          worst_term = term;
        }
      }
    }
  double secs = seconds_since(t0);
  std::string detail = std::to_string(terms) + " term variants x 200 states, max error " + fmt("%.2e", worst);
  if (worst > 0) detail += " (" + worst_term + ")";
  return {worst < 1e-12 && secs < 60.0, detail + ", " + fmt("%.1f", secs) + " s"};
}

Outcome derivatives() {
  SplitMix64 rng(303);
  const Family families[] = {Family::binomial, Family::poisson, Family::normal};
  double worst_g = 0.0, worst_h = 0.0;
  for (int k = 0; k < 50; ++k) {
    testing::RandomSpec spec;
    spec.n = 4 + k % 4;
    spec.directed = k % 2 == 0;
    spec.y_family = families[k % 3];
    spec.x_family = families[(k / 3) % 3];
    PopulationData d = testing::random_population(spec, 9000 + static_cast<std::uint64_t>(k));
    std::string formula = "attribute_y + attribute_xy + edges(mode = 'local') + edges(mode = 'alocal') + "
                          "spillover_yy + spillover_xy + gwesp_symm(decay = 0.3) + cov_z(data = w)";
    if (k % 5 == 0) formula = "degrees + " + formula;
    Model m = Model::bind(parse_formula(formula), d);
    PlDesign pd = PlDesign::build(m, d, d.state());
    Eigen::VectorXd theta = random_theta(m.dim(), rng, 0.3);
    Eigen::VectorXd g = pl_gradient(pd, theta);
    Eigen::MatrixXd hess = pl_hessian(pd, theta);
    const double h = 1e-5;
    Eigen::VectorXd fd_g(m.dim());
    Eigen::MatrixXd fd_h(m.dim(), m.dim());
    for (int c = 0; c < m.dim(); ++c) {
      Eigen::VectorXd up = theta, dn = theta;
      up[c] += h;
      dn[c] -= h;
      fd_g[c] = (pseudo_loglik(pd, up) - pseudo_loglik(pd, dn)) / (2 * h);
      fd_h.col(c) = (pl_gradient(pd, up) - pl_gradient(pd, dn)) / (2 * h);
    }
    worst_g = std::max(worst_g, (g - fd_g).norm() / std::max(1.0, fd_g.norm()));
    worst_h = std::max(worst_h, (hess - fd_h).norm() / std::max(1.0, fd_h.norm()));
  }
  return {worst_g < 1e-6 && worst_h < 1e-5,
          "50 instances, gradient rel error " + fmt("%.2e", worst_g) + ", Hessian rel error " + fmt("%.2e", worst_h)};
}

struct FixtureRun {
  std::string name;
  PopulationData data;
  Model model;
  FitResult fit;
};

std::vector<FixtureRun>& fixture_runs() {
  static std::vector<FixtureRun> runs = [] {
    std::vector<FixtureRun> r;
    for (auto [p, n] : {std::pair{FixtureProfile::directed_binary, 495}, std::pair{FixtureProfile::undirected_normal, 409}}) {
      PopulationData d = generate_fixture(p, n, 1);
      Model m = Model::bind(parse_formula(fixture_fit_formula(p)), d);
      FitResult f = fit(m, d);
      r.push_back({fixture_profile_name(p), std::move(d), std::move(m), std::move(f)});
    }
    return r;
  }();
  return runs;
}

Outcome optimizer() {
  bool ok = true;
  std::string detail;
  for (const FixtureRun& r : fixture_runs()) {
    double worst_drop = 0.0;
    for (std::size_t k = 1; k < r.fit.trace.size(); ++k)
      worst_drop = std::max(worst_drop, r.fit.trace[k - 1].loglik - r.fit.trace[k].loglik);
    bool run_ok = r.fit.converged && worst_drop <= 1e-10 && r.fit.grad_norm < 1e-6;
    ok = ok && run_ok;
    detail += r.name + ": " + (r.fit.converged ? "converged" : "NOT converged") + " in " +
              std::to_string(r.fit.iterations) + " it, largest drop " + fmt("%.1e", std::max(worst_drop, 0.0)) +
              ", |grad| " + fmt("%.1e", r.fit.grad_norm) + "; ";
  }
  RawPopulation raw;
  for (int i = 0; i < 495; ++i) {
    raw.unit_ids.push_back("u" + std::to_string(i));
    raw.x.push_back(0.0);
    raw.y.push_back(i < 204 ? 1.0 : 0.0);
  }
  BuildFlags f;
  f.fix_x = true;
  f.fix_z = true;
  PopulationData d = build_population(raw, f);
  FitResult intercept = fit(Model::bind(parse_formula("attribute_y"), d), d);
  double gap = std::abs(intercept.theta[0] - std::log(204.0 / 291.0));
  ok = ok && gap < 1e-8;
  return {ok, detail + "intercept-only gap " + fmt("%.1e", gap)};
}

// Data drawn from the model at truth: blocks of ten units share neighborhoods.
PopulationData draw_block_population(int n, const Eigen::VectorXd& truth, std::uint64_t seed,
                                     const std::function<Model(const PopulationData&)>& bind) {
  RawPopulation raw;
  std::vector<std::pair<int, int>> members;
  for (int i = 0; i < n; ++i) {
    raw.unit_ids.push_back("u" + std::to_string(i));
    raw.x.push_back(0.0);
    raw.y.push_back(0.0);
    for (int k = (i / 10) * 10; k < std::min(n, (i / 10) * 10 + 10); ++k) members.emplace_back(i, k);
  }
  raw.neighborhood_pairs = members;
  BuildFlags f;
  f.fix_x = true;
  PopulationData start = build_population(raw, f);
  Model m = bind(start);
  SamplerConfig c;
  c.seed = seed;
  c.n_burn_in = 5;
  c.n_simulation = 1;
  c.z_kernel = ZKernel::gibbs;
  c.z_proposals_per_draw = 4 * dyad_count(n, true);
  c.y_proposals_per_draw = 4 * n;
  return start.with_state(simulate(m, truth, start, c).states.back());
}

Outcome consistency() {
  auto t0 = std::chrono::steady_clock::now();
  const std::string formula =
      "edges(mode = 'global') + mutual(mode = 'local') + spillover_yy(mode = 'local') + attribute_y";
  auto bind = [&](const PopulationData& d) { return Model::bind(parse_formula(formula), d); };
  Eigen::VectorXd truth = vec({-3.0, 1.5, 0.5, -0.5});
  std::vector<double> medians;
  std::string detail;
  int failed_fits = 0;
  for (int n : {50, 100, 200, 400}) {
    std::vector<double> errors;
    for (int rep = 0; rep < 20; ++rep) {
      PopulationData d = draw_block_population(n, truth, derive_seed(7000 + static_cast<std::uint64_t>(n), rep), bind);
      Model m = bind(d);
      try {
        FitResult f = fit(m, d);
        if (!f.converged) ++failed_fits;
        errors.push_back((f.generic() - truth).lpNorm<Eigen::Infinity>());
      } catch (const std::runtime_error&) {
        ++failed_fits;
        errors.push_back(std::numeric_limits<double>::infinity());
      }
    }
    std::nth_element(errors.begin(), errors.begin() + 10, errors.end());
    double hi = errors[10];
    double lo = *std::max_element(errors.begin(), errors.begin() + 10);
    medians.push_back((lo + hi) / 2.0);
    detail += "N=" + std::to_string(n) + " median " + fmt("%.3f", medians.back()) + "; ";
  }
  bool decreasing = true;
  for (std::size_t k = 1; k < medians.size(); ++k) decreasing = decreasing && medians[k] < medians[k - 1];
  double ratio = medians.back() / medians.front();
  double secs = seconds_since(t0);
  detail += "ratio " + fmt("%.2f", ratio) + ", " + std::to_string(failed_fits) + " unconverged, " +
            fmt("%.0f", secs) + " s";
  return {decreasing && ratio <= 0.5 && secs < 900.0, detail};
}

Outcome ergodicity() {
  PopulationData d = blank(3, true, true);
  Model m = Model::bind(parse_formula("edges + mutual + transitive"), d);
  Eigen::VectorXd theta = vec({-0.4, 0.9, 0.3});
  std::vector<double> exact = testing::exact_marginal(enumerate(m, d, theta), true);
  Sampler tnt(m, d, theta, 61), gibbs(m, d, theta, 62);
  double tv_tnt = testing::total_variation(testing::network_frequencies(tnt, ZKernel::tnt, 1000000), exact);
  double tv_gibbs = testing::total_variation(testing::network_frequencies(gibbs, ZKernel::gibbs, 1000000), exact);

  RawPopulation raw;
  raw.unit_ids = {"a", "b", "c"};
  raw.x = {1, 0, 1};
  raw.y = {0, 0, 0};
  raw.edges = {{0, 1}, {1, 2}, {2, 0}, {1, 0}};
  BuildFlags f;
  f.fix_x = true;
  f.fix_z = true;
  PopulationData da = build_population(raw, f);
  Model ma = Model::bind(parse_formula("attribute_y + spillover_yy"), da);
  Eigen::VectorXd ta = vec({-0.5, 0.8});
  Sampler sa(ma, da, ta, 63);
  double tv_attr = testing::total_variation(testing::attribute_frequencies(sa, 1000000),
                                            testing::exact_marginal(enumerate(ma, da, ta), false));
  return {tv_tnt < 0.02 && tv_gibbs < 0.02 && tv_attr < 0.02,
          "TV tnt " + fmt("%.4f", tv_tnt) + ", gibbs " + fmt("%.4f", tv_gibbs) + ", attribute gibbs " +
              fmt("%.4f", tv_attr)};
}

std::vector<State> draws(const Model& m, const Eigen::VectorXd& theta, const PopulationData& d, int count,
                         std::uint64_t seed) {
  SamplerConfig c;
  c.n_burn_in = 10;
  c.n_simulation = count;
  c.seed = seed;
  return simulate(m, theta, d, c).states;
}

Outcome covariance() {
  const int n = 400, ones = 150;
  RawPopulation raw;
  for (int i = 0; i < n; ++i) {
    raw.unit_ids.push_back("u" + std::to_string(i));
    raw.x.push_back(0.0);
    raw.y.push_back(i < ones ? 1.0 : 0.0);
  }
  BuildFlags f;
  f.fix_x = true;
  f.fix_z = true;
  PopulationData d = build_population(raw, f);
  Model m = Model::bind(parse_formula("attribute_y"), d);
  FitResult fr = fit(m, d);
  double p = static_cast<double>(ones) / n;
  double analytic = 1.0 / std::sqrt(n * p * (1 - p));
  double simulated = std::sqrt(mple_covariance(m, d, fr.theta, draws(m, fr.theta, d, 500, 3)).covariance(0, 0));
  double rel = std::abs(simulated / analytic - 1.0);
  bool ok = rel < 0.10;
  std::string detail = "SE " + fmt("%.4f", simulated) + " vs analytic " + fmt("%.4f", analytic) + " (" +
                       fmt("%.1f", 100 * rel) + "%)";
  for (const FixtureRun& r : fixture_runs()) {
    Eigen::MatrixXd c = mple_covariance(r.model, r.data, r.fit.theta, draws(r.model, r.fit.theta, r.data, 60, 11), 4)
                            .covariance;
    double asym = (c - c.transpose()).cwiseAbs().maxCoeff();
    double min_eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(c).eigenvalues().minCoeff();
    ok = ok && asym == 0.0 && min_eig >= -1e-10;
    detail += "; " + r.name + " asymmetry " + fmt("%.1e", asym) + ", min eigenvalue " + fmt("%.2e", min_eig);
  }
  return {ok, detail};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome reproducibility() {
  fs::path dir = fs::temp_directory_path() / ("netglm_accept_" + std::to_string(std::random_device{}()));
  fs::create_directories(dir);
  auto run = [&](const std::string& args) {
    std::string cmd = std::string(NETGLM_CLI) + " " + args + " > " + (dir / "log.txt").string() + " 2>&1";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) && WEXITSTATUS(status) == 0;
  };
  bool ran = run("fixture --profile directed_binary --n 80 --seed 4 --out " + (dir / "data").string());
  std::string data = " --data-attrs " + (dir / "data/attributes.csv").string() + " --data-edges " +
                     (dir / "data/edges.csv").string() + " --data-neighborhoods " +
                     (dir / "data/neighborhoods.csv").string();
  std::vector<std::string> files = {"fit.json", "simulation.csv", "assess_degree_out.csv", "assess_geodesic.csv",
                                    "assess_y_distribution.csv"};
  std::string out[2];
  for (int k = 0; k < 2; ++k) {
    fs::path o = dir / ("run" + std::to_string(k));
    std::string common = data + " --seed 99 --deterministic --threads 4 --n-sim 20 --burn-in 3 --out " + o.string();
    std::string fit_json = " --fit " + (o / "fit.json").string();
    ran = ran && run("fit --formula \"attribute_y + attribute_xy + edges(mode = 'local') + mutual(mode = 'local') + "
                     "spillover_yy\"" + common);
    ran = ran && run("simulate" + fit_json + common);
    ran = ran && run("assess" + fit_json + common);
    for (const auto& f : files) out[k] += slurp(o / f) + '\x1e';
  }
  fs::remove_all(dir);
  bool ok = ran && out[0] == out[1] && out[0].size() > 5 * files.size();
  return {ok, std::string(ran ? "" : "a command failed; ") + std::to_string(files.size()) + " files, " +
                  (out[0] == out[1] ? "byte-identical" : "differ")};
}

Outcome summary_format() {
  SummaryRow r = summary_row("spillover_yy", -1.8587, 0.3314);
  std::string line = format_row(r, 12);
  bool ok = fmt("%.2f", r.t) == "-5.61" && format_p(r.p) == "<0.0001" && line.find("-5.61") != std::string::npos &&
            line.find("<0.0001") != std::string::npos;
  return {ok, "row: " + line};
}

Outcome parser() {
  SplitMix64 rng(404);
  int round_trip_failures = 0;
  for (int k = 0; k < 10000; ++k) {
    ModelSpec s = parse_formula(testing::random_valid_formula(rng));
    if (!(parse_formula(render_formula(s)) == s)) ++round_trip_failures;
  }
  int unlocated = 0, accepted = 0;
  for (int k = 0; k < 100000; ++k) {
    std::string text = testing::random_invalid_formula(rng);
    try {
      parse_formula(text);
      ++accepted;
    } catch (const FormulaError& e) {
      if (e.offset() > text.size()) ++unlocated;
    } catch (...) {
      ++unlocated;
    }
  }
  return {round_trip_failures == 0 && unlocated == 0,
          "10000 round-trips, " + std::to_string(round_trip_failures) + " failures; 100000 invalid inputs, " +
              std::to_string(unlocated) + " without a location (" + std::to_string(accepted) +
              " mutations happened to stay valid)"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"conditional correctness on three units", conditional_correctness},
      {"change statistics against brute force", change_statistics},
      {"gradient and Hessian against finite differences", derivatives},
      {"optimizer ascent, optimality and closed form", optimizer},
      {"estimation error shrinks with N", consistency},
      {"samplers reach the enumerated law", ergodicity},
      {"covariance sanity", covariance},
      {"deterministic CLI reproducibility", reproducibility},
      {"summary row format", summary_format},
      {"formula parser fuzzing", parser},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
