#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "netglm/population.hpp"

namespace netglm {

// value -> count. Geodesic histograms use kInfinite for unreachable pairs.
using Histogram = std::map<std::int64_t, std::int64_t>;
inline constexpr std::int64_t kInfinite = std::numeric_limits<std::int64_t>::max();

struct DegreeHistograms {
  Histogram out;                // degrees when undirected
  std::optional<Histogram> in;  // directed only
};

DegreeHistograms degree_distribution(const PopulationData& design, const State& s);
// Degrees in the subnetwork of ties (i, j) with c_ij (x_i y_j + x_j y_i) > 0,
// attributes binarized by binarize().
DegreeHistograms spillover_degree_distribution(const PopulationData& design, const State& s);
// Pairs by shortest-path length: ordered pairs when directed, unordered otherwise.
Histogram geodesic_distribution(const PopulationData& design, const State& s);

enum class SharedPartnerKind { dyadwise, edgewise };
Histogram shared_partner_distribution(const PopulationData& design, const State& s, SharedPartnerKind kind,
                                      PathType type = PathType::otp);

// Binary values pass through; otherwise 1{v > mean(v)}.
std::vector<double> binarize(const std::vector<double>& v, Family f);

// Count per value for binomial and poisson. Normal values are binned by the
// cut points (bin k holds cuts[k-1] < v <= cuts[k]; the last bin is open).
Histogram attribute_distribution(const std::vector<double>& v, Family f, const std::vector<double>& cuts = {});
// Interior decile cut points of the observed values.
std::vector<double> decile_cuts(const std::vector<double>& v);

// Text block in the layout of the data summary printout.
std::string describe_text(const PopulationData& data);

std::string histogram_csv(const Histogram& h, const std::string& value_name = "value");

}  // namespace netglm
