#include "netglm/population.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "netglm/error.hpp"

namespace netglm {

Family parse_family(std::string_view name) {
  if (name == "binomial") return Family::binomial;
  if (name == "poisson") return Family::poisson;
  if (name == "normal") return Family::normal;
  throw ValidationError("unknown attribute family '" + std::string(name) +
                        "' (expected binomial, poisson or normal)");
}

const char* family_name(Family f) {
  switch (f) {
    case Family::binomial: return "binomial";
    case Family::poisson: return "poisson";
    case Family::normal: return "normal";
  }
  return "?";
}

Mode parse_mode(std::string_view name) {
  if (name == "global") return Mode::global;
  if (name == "local") return Mode::local;
  if (name == "alocal") return Mode::alocal;
  throw ValidationError("unknown mode '" + std::string(name) + "'");
}

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::global: return "global";
    case Mode::local: return "local";
    case Mode::alocal: return "alocal";
  }
  return "?";
}

PathType parse_path_type(std::string_view name) {
  if (name == "OTP") return PathType::otp;
  if (name == "ISP") return PathType::isp;
  if (name == "OSP") return PathType::osp;
  if (name == "ITP") return PathType::itp;
  throw ValidationError("unknown shared-partner type '" + std::string(name) +
                        "' (expected OTP, ISP, OSP or ITP)");
}

const char* path_type_name(PathType t) {
  switch (t) {
    case PathType::otp: return "OTP";
    case PathType::isp: return "ISP";
    case PathType::osp: return "OSP";
    case PathType::itp: return "ITP";
    case PathType::symmetric: return "symmetric";
  }
  return "?";
}

void AttributeVector::validate(const std::string& name) const {
  if (family == Family::normal && !(scale > 0.0 && std::isfinite(scale)))
    throw ValidationError(name + ": normal family needs a positive finite scale");
  for (std::size_t i = 0; i < values.size(); ++i) {
    double v = values[i];
    bool ok = std::isfinite(v);
    if (ok && family == Family::binomial) ok = (v == 0.0 || v == 1.0);
    if (ok && family == Family::poisson) ok = (v >= 0.0 && v == std::floor(v));
    if (!ok)
      throw ValidationError(name + "[" + std::to_string(i) + "] = " + std::to_string(v) +
                            " is outside the support of the " + family_name(family) + " family");
  }
}

// ---------------------------------------------------------------------------

Network::Network(int n, bool directed) : n_(n), directed_(directed), out_(n) {
  if (directed) in_.resize(n);
}

bool Network::has_edge(int i, int j) const {
  const auto& v = out_[i];
  return std::binary_search(v.begin(), v.end(), j);
}

static bool sorted_insert(std::vector<int>& v, int x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it != v.end() && *it == x) return false;
  v.insert(it, x);
  return true;
}

static bool sorted_erase(std::vector<int>& v, int x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it == v.end() || *it != x) return false;
  v.erase(it);
  return true;
}

bool Network::add_edge(int i, int j) {
  if (!sorted_insert(out_[i], j)) return false;
  if (directed_)
    sorted_insert(in_[j], i);
  else
    sorted_insert(out_[j], i);
  ++edges_;
  return true;
}

bool Network::remove_edge(int i, int j) {
  if (!sorted_erase(out_[i], j)) return false;
  if (directed_)
    sorted_erase(in_[j], i);
  else
    sorted_erase(out_[j], i);
  --edges_;
  return true;
}

std::vector<std::pair<int, int>> Network::edge_list() const {
  std::vector<std::pair<int, int>> e;
  e.reserve(static_cast<std::size_t>(edges_));
  for (int i = 0; i < n_; ++i)
    for (int j : out_[i])
      if (directed_ || i < j) e.emplace_back(i, j);
  return e;
}

// ---------------------------------------------------------------------------

Neighborhoods Neighborhoods::full(int n) {
  Neighborhoods nb;
  nb.n_ = n;
  nb.full_ = true;
  return nb;
}

Neighborhoods::Neighborhoods(int n, std::vector<std::vector<int>> members)
    : n_(n), full_(false), members_(std::move(members)), holders_(n), partners_(n),
      overlap_(n), member_(n) {
  members_.resize(n);
  for (int i = 0; i < n; ++i) {
    auto& m = members_[i];
    std::sort(m.begin(), m.end());
    m.erase(std::unique(m.begin(), m.end()), m.end());
    for (int k : m) {
      member_.set(i, k);
      holders_[k].push_back(i);
    }
  }
  // i and j overlap iff some k lies in both neighborhoods.
  for (int k = 0; k < n; ++k) {
    const auto& h = holders_[k];
    for (int a : h)
      for (int b : h) overlap_.set(a, b);
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (j != i && overlap_.get(i, j)) partners_[i].push_back(j);
}

const std::vector<int>& Neighborhoods::members(int i) const {
  static const std::vector<int> empty;
  return full_ ? empty : members_[i];
}

const std::vector<int>& Neighborhoods::holders(int k) const {
  static const std::vector<int> empty;
  return full_ ? empty : holders_[k];
}

const std::vector<int>& Neighborhoods::overlap_partners(int i) const {
  static const std::vector<int> empty;
  return full_ ? empty : partners_[i];
}

std::int64_t Neighborhoods::membership_count() const {
  if (full_) return static_cast<std::int64_t>(n_) * (n_ - 1);
  std::int64_t s = 0;
  for (const auto& m : members_) s += static_cast<std::int64_t>(m.size());
  return s;
}

// ---------------------------------------------------------------------------

DyadCovariate DyadCovariate::dense(int n, std::vector<double> row_major) {
  if (row_major.size() != static_cast<std::size_t>(n) * n)
    throw ValidationError("dyad covariate must have n*n entries");
  DyadCovariate d;
  d.n_ = n;
  d.dense_ = std::make_shared<const std::vector<double>>(std::move(row_major));
  return d;
}

DyadCovariate DyadCovariate::match(std::shared_ptr<const std::vector<double>> unit) {
  DyadCovariate d;
  d.n_ = static_cast<int>(unit->size());
  d.match_ = true;
  d.unit_ = std::move(unit);
  return d;
}

DyadCovariate DyadCovariate::subset(const std::vector<int>& keep) const {
  int m = static_cast<int>(keep.size());
  if (match_) {
    std::vector<double> u(m);
    for (int a = 0; a < m; ++a) u[a] = (*unit_)[keep[a]];
    return match(std::make_shared<const std::vector<double>>(std::move(u)));
  }
  std::vector<double> v(static_cast<std::size_t>(m) * m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) v[static_cast<std::size_t>(a) * m + b] = (*this)(keep[a], keep[b]);
  return dense(m, std::move(v));
}

const std::vector<double>* Covariates::find_unit(const std::string& name) const {
  auto it = unit.find(name);
  return it == unit.end() ? nullptr : it->second.get();
}

std::optional<DyadCovariate> Covariates::find_dyad(const std::string& name) const {
  if (auto it = dyad.find(name); it != dyad.end()) return it->second;
  const std::string prefix = "match_";
  if (name.rfind(prefix, 0) == 0) {
    if (auto it = unit.find(name.substr(prefix.size())); it != unit.end())
      return DyadCovariate::match(it->second);
  }
  return std::nullopt;
}

PopulationData PopulationData::with_state(const State& s) const {
  PopulationData d = *this;
  d.x.values = s.x;
  d.y.values = s.y;
  bool fixed = d.z.fixed, alocal = d.z.fixed_alocal_only;
  d.z = s.z;
  d.z.fixed = fixed;
  d.z.fixed_alocal_only = alocal;
  return d;
}

double empirical_variance(const std::vector<double>& v) {
  if (v.size() < 2) return 1.0;
  double mean = 0.0;
  for (double a : v) mean += a;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double a : v) ss += (a - mean) * (a - mean);
  return ss / static_cast<double>(v.size() - 1);
}

// ---------------------------------------------------------------------------

PopulationData build_population(const RawPopulation& raw, const BuildFlags& flags) {
  const int n = static_cast<int>(raw.unit_ids.size());
  if (n < 1) throw ValidationError("population has no units");
  if (raw.x.size() != static_cast<std::size_t>(n) || raw.y.size() != static_cast<std::size_t>(n))
    throw ValidationError("attribute vectors must have one value per unit (" + std::to_string(n) + ")");
  if (flags.fix_z && flags.fix_z_alocal)
    throw ValidationError("fix_z and fix_z_alocal are mutually exclusive");

  PopulationData d;
  d.unit_ids = raw.unit_ids;
  {
    std::set<std::string> seen;
    for (const auto& id : raw.unit_ids)
      if (!seen.insert(id).second) throw ValidationError("duplicate unit id '" + id + "'");
  }

  d.x.values = raw.x;
  d.x.family = flags.x_family;
  d.x.fixed = flags.fix_x;
  d.y.values = raw.y;
  d.y.family = flags.y_family;
  if (flags.x_family == Family::normal) d.x.scale = flags.x_scale.value_or(empirical_variance(raw.x));
  if (flags.y_family == Family::normal) d.y.scale = flags.y_scale.value_or(empirical_variance(raw.y));
  d.x.validate("x");
  d.y.validate("y");

  d.z = Network(n, flags.directed);
  d.z.fixed = flags.fix_z;
  d.z.fixed_alocal_only = flags.fix_z_alocal;
  for (std::size_t r = 0; r < raw.edges.size(); ++r) {
    auto [i, j] = raw.edges[r];
    std::string rec = "edge #" + std::to_string(r + 1) + " (" + std::to_string(i) + "," + std::to_string(j) + ")";
    if (i < 0 || j < 0 || i >= n || j >= n) throw ValidationError(rec + ": unit id out of range");
    if (i == j) throw ValidationError(rec + ": self-loop");
    if (!d.z.add_edge(i, j)) throw ValidationError(rec + ": duplicate edge");
  }

  if (raw.neighborhood_pairs) {
    std::vector<std::vector<int>> members(n);
    for (std::size_t r = 0; r < raw.neighborhood_pairs->size(); ++r) {
      auto [i, k] = (*raw.neighborhood_pairs)[r];
      if (i < 0 || k < 0 || i >= n || k >= n)
        throw ValidationError("neighborhood record #" + std::to_string(r + 1) + ": unit id out of range");
      members[i].push_back(k);
    }
    d.nb = std::make_shared<const Neighborhoods>(n, std::move(members));
  } else {
    d.nb = std::make_shared<const Neighborhoods>(Neighborhoods::full(n));
  }

  for (const auto& [name, v] : raw.unit_covariates) {
    if (v.size() != static_cast<std::size_t>(n))
      throw ValidationError("covariate '" + name + "' must have one value per unit");
    d.covariates.unit[name] = std::make_shared<const std::vector<double>>(v);
  }
  for (const auto& [name, m] : raw.dyad_covariates) {
    if (m.n() != n) throw ValidationError("dyad covariate '" + name + "' has wrong dimension");
    d.covariates.dyad.emplace(name, m);
  }
  return d;
}

PopulationData delete_isolates(const PopulationData& data) {
  const int n = data.n();
  std::vector<int> keep;
  std::vector<int> remap(n, -1);
  for (int i = 0; i < n; ++i)
    if (data.z.out_degree(i) + (data.directed() ? data.z.in_degree(i) : 0) > 0) {
      remap[i] = static_cast<int>(keep.size());
      keep.push_back(i);
    }
  const int m = static_cast<int>(keep.size());

  PopulationData d;
  d.x = data.x;
  d.y = data.y;
  d.x.values.resize(m);
  d.y.values.resize(m);
  for (int a = 0; a < m; ++a) {
    d.unit_ids.push_back(data.unit_ids[keep[a]]);
    d.x.values[a] = data.x.values[keep[a]];
    d.y.values[a] = data.y.values[keep[a]];
  }
  d.z = Network(m, data.directed());
  d.z.fixed = data.z.fixed;
  d.z.fixed_alocal_only = data.z.fixed_alocal_only;
  for (auto [i, j] : data.z.edge_list()) d.z.add_edge(remap[i], remap[j]);

  if (data.nb->is_full()) {
    d.nb = std::make_shared<const Neighborhoods>(Neighborhoods::full(m));
  } else {
    std::vector<std::vector<int>> members(m);
    for (int a = 0; a < m; ++a)
      for (int k : data.nb->members(keep[a]))
        if (remap[k] >= 0) members[a].push_back(remap[k]);
    d.nb = std::make_shared<const Neighborhoods>(m, std::move(members));
  }

  for (const auto& [name, v] : data.covariates.unit) {
    std::vector<double> u(m);
    for (int a = 0; a < m; ++a) u[a] = (*v)[keep[a]];
    d.covariates.unit[name] = std::make_shared<const std::vector<double>>(std::move(u));
  }
  for (const auto& [name, c] : data.covariates.dyad) d.covariates.dyad.emplace(name, c.subset(keep));
  return d;
}

}  // namespace netglm
