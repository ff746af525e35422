#include "netglm/describe.hpp"

#include <cmath>
#include <cstdio>
#include <deque>
#include <numeric>
#include <sstream>

#include "netglm/quantile.hpp"
#include "netglm/term_context.hpp"

namespace netglm {

namespace {

DegreeHistograms degrees_of(const Network& z) {
  DegreeHistograms h;
  for (int i = 0; i < z.n(); ++i) ++h.out[z.out_degree(i)];
  if (z.directed()) {
    h.in.emplace();
    for (int i = 0; i < z.n(); ++i) ++(*h.in)[z.in_degree(i)];
  }
  return h;
}

double mean_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

std::string pad(const std::string& s, std::size_t w) { return s.size() >= w ? s : s + std::string(w - s.size(), ' '); }

std::string fixed_flag(bool fixed) { return fixed ? "TRUE" : "FALSE"; }

std::string attribute_line(const AttributeVector& a) {
  char buf[160];
  const auto& v = a.values;
  const double n = static_cast<double>(v.size());
  switch (a.family) {
    case Family::binomial: {
      long ones = static_cast<long>(std::count(v.begin(), v.end(), 1.0));
      std::snprintf(buf, sizeof buf, "binomial 1s=%ld, 0s=%ld, P(1)=%.3f", ones, static_cast<long>(v.size()) - ones,
                    n > 0 ? ones / n : 0.0);
      break;
    }
    case Family::poisson: {
      double m = mean_of(v);
      std::snprintf(buf, sizeof buf, "poisson mean=%.3f, var=%.3f", m, empirical_variance(v));
      break;
    }
    case Family::normal: {
      double m = mean_of(v);
      double ss = 0.0;
      for (double x : v) ss += (x - m) * (x - m);
      double sd = v.size() > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
      std::snprintf(buf, sizeof buf, "normal mean=%.3f, sd=%.3f, scale= %.3f", m, sd, a.scale);
      break;
    }
  }
  return buf;
}

}  // namespace

DegreeHistograms degree_distribution(const PopulationData&, const State& s) { return degrees_of(s.z); }

std::vector<double> binarize(const std::vector<double>& v, Family f) {
  if (f == Family::binomial) return v;
  double m = mean_of(v);
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] > m ? 1.0 : 0.0;
  return out;
}

DegreeHistograms spillover_degree_distribution(const PopulationData& design, const State& s) {
  std::vector<double> x = binarize(s.x, design.x.family);
  std::vector<double> y = binarize(s.y, design.y.family);
  Network sub(design.n(), design.directed());
  for (auto [i, j] : s.z.edge_list())
    if (design.nb->overlap(i, j) && (x[i] * y[j] == 1.0 || x[j] * y[i] == 1.0)) sub.add_edge(i, j);
  return degrees_of(sub);
}

Histogram geodesic_distribution(const PopulationData& design, const State& s) {
  const int n = design.n();
  const bool directed = design.directed();
  Histogram h;
  std::vector<int> dist(n);
  std::deque<int> queue;
  for (int src = 0; src < n; ++src) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[src] = 0;
    queue.assign(1, src);
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (int v : s.z.out(u))
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          queue.push_back(v);
        }
    }
    for (int dst = directed ? 0 : src + 1; dst < n; ++dst) {
      if (dst == src) continue;
      ++h[dist[dst] < 0 ? kInfinite : dist[dst]];
    }
  }
  return h;
}

Histogram shared_partner_distribution(const PopulationData& design, const State& s, SharedPartnerKind kind,
                                      PathType type) {
  TermContext ctx(design, s);
  const int n = design.n();
  const bool directed = design.directed();
  const PathType t = directed ? type : PathType::symmetric;
  Histogram h;
  if (kind == SharedPartnerKind::edgewise) {
    for (auto [i, j] : s.z.edge_list()) ++h[ctx.count_common_partners(i, j, t)];
    return h;
  }
  for (int i = 0; i < n; ++i)
    for (int j = directed ? 0 : i + 1; j < n; ++j)
      if (i != j) ++h[ctx.count_common_partners(i, j, t)];
  return h;
}

std::vector<double> decile_cuts(const std::vector<double>& v) {
  std::vector<double> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> cuts;
  for (int k = 1; k < 10; ++k) {
    double c = quantile_sorted(sorted, k / 10.0);
    if (cuts.empty() || c > cuts.back()) cuts.push_back(c);
  }
  return cuts;
}

Histogram attribute_distribution(const std::vector<double>& v, Family f, const std::vector<double>& cuts) {
  Histogram h;
  if (f != Family::normal) {
    for (double x : v) ++h[static_cast<std::int64_t>(x)];
    return h;
  }
  for (double x : v) ++h[std::lower_bound(cuts.begin(), cuts.end(), x) - cuts.begin()];
  return h;
}

std::string describe_text(const PopulationData& data) {
  std::ostringstream out;
  const std::size_t w = 28;
  std::string zflag = data.z.fixed_alocal_only ? "ALOCAL" : fixed_flag(data.z.fixed);
  out << "netglm.data object\n";
  out << "  " << pad("units", w) << ": " << data.n() << "\n";
  out << "  " << pad("directed", w) << ": " << (data.directed() ? "TRUE" : "FALSE") << "\n";
  out << "  " << pad("edges (fixed = " + zflag + ")", w) << ": " << data.z.edge_count() << "\n";
  out << "  " << pad("neighborhood edges", w) << ": " << data.nb->membership_count() << "\n";
  out << "\nAttribute summaries\n";
  out << "  " << pad("x_attribute (fixed = " + fixed_flag(data.x.fixed) + ")", w) << ": " << attribute_line(data.x)
      << "\n";
  out << "  " << pad("y_attribute", w) << ": " << attribute_line(data.y) << "\n";
  return out.str();
}

std::string histogram_csv(const Histogram& h, const std::string& value_name) {
  std::ostringstream out;
  out << value_name << ",count\n";
  for (auto [k, c] : h) out << (k == kInfinite ? std::string("Inf") : std::to_string(k)) << "," << c << "\n";
  return out.str();
}

}  // namespace netglm
