#include "netglm/assessment.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "netglm/csv_io.hpp"
#include "netglm/error.hpp"
#include "netglm/glm.hpp"
#include "netglm/pseudo_likelihood.hpp"
#include "netglm/quantile.hpp"
#include "netglm/state_io.hpp"

namespace netglm {

const std::vector<std::string>& assessment_statistics() {
  static const std::vector<std::string> names{"degree",
                                              "spillover_degree",
                                              "geodesic",
                                              "dyadwise_shared_partner",
                                              "edgewise_shared_partner",
                                              "x_distribution",
                                              "y_distribution"};
  return names;
}

namespace {

void add_degrees(NamedHistograms& out, const std::string& base, DegreeHistograms h) {
  if (h.in) {
    out.emplace_back(base + "_out", std::move(h.out));
    out.emplace_back(base + "_in", std::move(*h.in));
  } else {
    out.emplace_back(base, std::move(h.out));
  }
}

// Normal attributes are binned at the observed deciles.
std::vector<double> normal_cuts(const AttributeVector& a) {
  return a.family == Family::normal ? decile_cuts(a.values) : std::vector<double>{};
}

double lookup(const Histogram& h, std::int64_t bin) {
  auto it = h.find(bin);
  return it == h.end() ? 0.0 : static_cast<double>(it->second);
}

}  // namespace

NamedHistograms named_distributions(const std::string& name, const PopulationData& data, const State& s) {
  NamedHistograms out;
  if (name == "degree")
    add_degrees(out, name, degree_distribution(data, s));
  else if (name == "spillover_degree")
    add_degrees(out, name, spillover_degree_distribution(data, s));
  else if (name == "geodesic")
    out.emplace_back(name, geodesic_distribution(data, s));
  else if (name == "dyadwise_shared_partner")
    out.emplace_back(name, shared_partner_distribution(data, s, SharedPartnerKind::dyadwise));
  else if (name == "edgewise_shared_partner")
    out.emplace_back(name, shared_partner_distribution(data, s, SharedPartnerKind::edgewise));
  else if (name == "x_distribution")
    out.emplace_back(name, attribute_distribution(s.x, data.x.family, normal_cuts(data.x)));
  else if (name == "y_distribution")
    out.emplace_back(name, attribute_distribution(s.y, data.y.family, normal_cuts(data.y)));
  else
    throw ValidationError("unknown statistic '" + name + "'");
  return out;
}

AssessmentReport assess(const Model& model, const Eigen::VectorXd& theta, const PopulationData& data,
                        const std::vector<std::string>& stats, const SimulationResult* samples,
                        const SamplerConfig& config) {
  for (const auto& s : stats)
    if (std::find(assessment_statistics().begin(), assessment_statistics().end(), s) == assessment_statistics().end())
      throw ValidationError("unknown assessment statistic '" + s + "'");
  AssessmentReport report;
  SimulationResult own;
  if (!samples || samples->states.empty()) {
    SamplerConfig c = config;
    c.keep_states = true;
    own = simulate(model, theta, data, c);
    report.transitions = own.transitions;
    samples = &own;
  }
  const State observed = data.state();

  for (const auto& name : stats) {
    NamedHistograms obs = named_distributions(name, data, observed);
    std::vector<NamedHistograms> sims;
    for (const State& s : samples->states) sims.push_back(named_distributions(name, data, s));
    for (std::size_t c = 0; c < obs.size(); ++c) {
      Curve curve;
      curve.name = obs[c].first;
      std::set<std::int64_t> bins;
      for (auto [k, v] : obs[c].second) bins.insert(k);
      for (const auto& sim : sims)
        for (auto [k, v] : sim[c].second) bins.insert(k);
      for (std::int64_t b : bins) {
        curve.bins.push_back(b);
        curve.observed.push_back(lookup(obs[c].second, b));
        std::vector<double> vals;
        for (const auto& sim : sims) vals.push_back(lookup(sim[c].second, b));
        std::sort(vals.begin(), vals.end());
        curve.sim_min.push_back(vals.front());
        curve.sim_median.push_back(quantile_sorted(vals, 0.5));
        curve.sim_max.push_back(vals.back());
      }
      report.curves.push_back(std::move(curve));
    }
  }
  return report;
}

std::string curve_csv(const Curve& c) {
  std::ostringstream out;
  out << "bin,observed,sim_min,sim_median,sim_max\n";
  for (std::size_t k = 0; k < c.bins.size(); ++k)
    out << (c.bins[k] == kInfinite ? std::string("Inf") : std::to_string(c.bins[k])) << ","
        << format_number(c.observed[k]) << "," << format_number(c.sim_min[k]) << ","
        << format_number(c.sim_median[k]) << "," << format_number(c.sim_max[k]) << "\n";
  return out.str();
}

Predictions predict(const Model& model, const Eigen::VectorXd& theta, const PopulationData& data,
                    PredictionVariant variant, const SimulationResult* samples) {
  Predictions p;
  const int n = data.n();
  if (variant == PredictionVariant::conditional) {
    PlDesign d = PlDesign::build(model, data, data.state());
    Eigen::VectorXd eta = linear_predictors(d, theta);
    for (int k = 0; k < d.size(); ++k) {
      const Component& c = d.comps[k];
      double mu = conditional_mean(c.family, eta[k]);
      switch (c.kind) {
        case Target::x: p.x.push_back({c.i, c.value, mu}); break;
        case Target::y: p.y.push_back({c.i, c.value, mu}); break;
        case Target::z: p.z.push_back({c.i, c.j, c.value, mu}); break;
      }
    }
    return p;
  }
  if (!samples || samples->states.empty())
    throw ValidationError("marginal prediction needs simulated states (run a simulation or pass stored samples)");
  const double m = static_cast<double>(samples->states.size());
  std::vector<double> xs(n, 0.0), ys(n, 0.0);
  for (const State& s : samples->states)
    for (int i = 0; i < n; ++i) {
      xs[i] += s.x[i];
      ys[i] += s.y[i];
    }
  for (int i = 0; i < n; ++i) {
    p.x.push_back({i, data.x.values[i], xs[i] / m});
    p.y.push_back({i, data.y.values[i], ys[i] / m});
  }
  if (!data.z.fixed) {
    std::vector<double> freq(static_cast<std::size_t>(n) * n, 0.0);
    for (const State& s : samples->states)
      for (auto [i, j] : s.z.edge_list()) freq[static_cast<std::size_t>(i) * n + j] += 1.0;
    for (int i = 0; i < n; ++i)
      for (int j = data.directed() ? 0 : i + 1; j < n; ++j) {
        if (i == j) continue;
        if (data.z.fixed_alocal_only && !data.nb->overlap(i, j)) continue;
        p.z.push_back({i, j, data.z.has_edge(i, j) ? 1.0 : 0.0, freq[static_cast<std::size_t>(i) * n + j] / m});
      }
  }
  return p;
}

std::string unit_predictions_csv(const std::vector<UnitPrediction>& rows, const PopulationData& data) {
  std::ostringstream out;
  out << "id,target,prediction\n";
  for (const auto& r : rows)
    out << csv_escape(data.unit_ids[r.unit]) << "," << format_number(r.target) << "," << format_number(r.prediction)
        << "\n";
  return out.str();
}

std::string dyad_predictions_csv(const std::vector<DyadPrediction>& rows, const PopulationData& data) {
  std::ostringstream out;
  out << "src,dst,target,prediction\n";
  for (const auto& r : rows)
    out << csv_escape(data.unit_ids[r.src]) << "," << csv_escape(data.unit_ids[r.dst]) << ","
        << format_number(r.target) << "," << format_number(r.prediction) << "\n";
  return out.str();
}

}  // namespace netglm
