#include "netglm/registry.hpp"

#include "netglm/error.hpp"

namespace netglm {

namespace {

const std::vector<Mode> kAllModes{Mode::global, Mode::local, Mode::alocal};
const std::vector<Mode> kGlobalLocal{Mode::global, Mode::local};
const std::vector<Mode> kLocal{Mode::local};

// Wraps a user descriptor. The global statistic is accumulated from the
// all-zero configuration: attributes are switched on one unit at a time and
// ties added one at a time, each step adding its change statistic.
class UserTerm : public Term {
 public:
  explicit UserTerm(const UserTermDescriptor& d) : d_(d) {}

  double global(const TermContext& ctx) const override {
    const PopulationData& design = ctx.design();
    const State& target = ctx.state();
    const int n = ctx.n();
    State s{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), Network(n, ctx.directed())};
    TermContext cur(design, s);
    double total = d_.empty_value;
    for (int i = 0; i < n; ++i) {
      s.x[i] = target.x[i];
      if (d_.change_x) total += d_.change_x(cur, i) * cur.x(i);
    }
    for (int i = 0; i < n; ++i) {
      s.y[i] = target.y[i];
      if (d_.change_y) total += d_.change_y(cur, i) * cur.y(i);
    }
    for (auto [i, j] : target.z.edge_list()) {
      if (d_.change_z) total += d_.change_z(cur, i, j);
      s.z.add_edge(i, j);
    }
    return total;
  }
  double change_x(const TermContext& ctx, int i) const override { return d_.change_x ? d_.change_x(ctx, i) : 0.0; }
  double change_y(const TermContext& ctx, int i) const override { return d_.change_y ? d_.change_y(ctx, i) : 0.0; }
  double change_z(const TermContext& ctx, int i, int j) const override {
    return d_.change_z ? d_.change_z(ctx, i, j) : 0.0;
  }

 private:
  UserTermDescriptor d_;
};

}  // namespace

void TermRegistry::add(TermTraits t) {
  if (!t.empty_value) t.empty_value = [](int) { return 0.0; };
  std::string name = t.name;
  terms_.emplace(name, std::move(t));
}

const TermTraits* TermRegistry::find(const std::string& name) const {
  auto it = terms_.find(name);
  return it == terms_.end() ? nullptr : &it->second;
}

std::vector<std::string> TermRegistry::names() const {
  std::vector<std::string> v;
  for (const auto& [k, t] : terms_) v.push_back(k);
  return v;
}

void TermRegistry::register_user_term(UserTermDescriptor d) {
  if (d.name.empty()) throw ValidationError("user term needs a name");
  if (const TermTraits* t = find(d.name))
    throw ValidationError("term name '" + d.name + "' collides with an existing " +
                          (t->user ? "user" : "built-in") + " term");
  if (!d.supports_directed && !d.supports_undirected)
    throw ValidationError("user term '" + d.name + "' supports neither directed nor undirected networks");
  TermTraits t;
  t.name = d.name;
  t.user = true;
  t.directed_only = !d.supports_undirected;
  t.undirected_only = !d.supports_directed;
  t.binary_x_only = !d.affine_x;
  t.binary_y_only = !d.affine_y;
  double empty = d.empty_value;
  t.empty_value = [empty](int) { return empty; };
  t.factory = [d](const BoundArgs&) { return std::make_unique<UserTerm>(d); };
  add(std::move(t));
}

TermRegistry TermRegistry::with_builtins() {
  TermRegistry r;
  auto attr = [](const char* name) {
    return [name = std::string(name)](const BoundArgs& a) { return make_attribute_term(name, a); };
  };
  auto dyad = [](const char* name) {
    return [name = std::string(name)](const BoundArgs& a) { return make_dyadic_term(name, a); };
  };
  auto structural = [](const char* name) {
    return [name = std::string(name)](const BoundArgs& a) { return make_structural_term(name, a); };
  };
  auto entry = [](const char* name, std::vector<Mode> modes, Mode def, TermFactory f) {
    TermTraits t;
    t.name = name;
    t.modes = std::move(modes);
    t.default_mode = def;
    t.factory = std::move(f);
    return t;
  };

  // Unit-level attribute terms.
  r.add(entry("attribute_x", {}, Mode::global, attr("attribute_x")));
  r.add(entry("attribute_y", {}, Mode::global, attr("attribute_y")));
  {
    auto t = entry("cov_x", {}, Mode::global, attr("cov_x"));
    t.covariate = CovariateKind::unit;
    r.add(t);
    t = entry("cov_y", {}, Mode::global, attr("cov_y"));
    t.covariate = CovariateKind::unit;
    r.add(t);
  }
  r.add(entry("attribute_xy", kAllModes, Mode::global, attr("attribute_xy")));

  // Network terms.
  {
    TermTraits t;
    t.name = "degrees";
    t.degrees = true;
    r.add(t);
  }
  r.add(entry("edges", kAllModes, Mode::global, dyad("edges")));
  {
    auto t = entry("mutual", kAllModes, Mode::global, dyad("mutual"));
    t.directed_only = true;
    r.add(t);
    t = entry("cov_z", kAllModes, Mode::global, dyad("cov_z"));
    t.covariate = CovariateKind::dyad;
    r.add(t);
    t = entry("cov_z_out", kAllModes, Mode::global, dyad("cov_z_out"));
    t.covariate = CovariateKind::unit;
    t.directed_only = true;
    r.add(t);
    t = entry("cov_z_in", kAllModes, Mode::global, dyad("cov_z_in"));
    t.covariate = CovariateKind::unit;
    t.directed_only = true;
    r.add(t);
  }
  {
    auto t = entry("isolates", {}, Mode::global, structural("isolates"));
    t.empty_value = [](int n) { return static_cast<double>(n); };
    r.add(t);
    r.add(entry("nonisolates", {}, Mode::global, structural("nonisolates")));
  }
  {
    auto gw = [&](const char* name, std::vector<Mode> modes, Mode def, bool directed_only, bool typed) {
      auto t = entry(name, std::move(modes), def, structural(name));
      t.geometric = true;
      t.typed = typed;
      t.directed_only = directed_only;
      r.add(t);
    };
    gw("gwdegree", {Mode::global}, Mode::global, false, false);
    gw("gwodegree", kGlobalLocal, Mode::global, true, false);
    gw("gwidegree", kGlobalLocal, Mode::global, true, false);
    gw("gwesp_symm", kAllModes, Mode::global, false, false);
    gw("gwesp", kGlobalLocal, Mode::global, true, true);
    gw("gwdsp_symm", kLocal, Mode::local, false, false);
    gw("gwdsp", kGlobalLocal, Mode::global, true, true);
  }
  r.add(entry("transitive", {}, Mode::local, structural("transitive")));

  // Joint attribute and network terms.
  r.add(entry("attribute_xz", kLocal, Mode::local, dyad("attribute_xz")));
  r.add(entry("attribute_yz", kLocal, Mode::local, dyad("attribute_yz")));
  {
    auto t = entry("edges_x_match", kGlobalLocal, Mode::global, dyad("edges_x_match"));
    t.binary_x_only = true;
    r.add(t);
    t = entry("edges_y_match", kGlobalLocal, Mode::global, dyad("edges_y_match"));
    t.binary_y_only = true;
    r.add(t);
  }
  for (const char* name : {"outedges_x", "inedges_x", "outedges_y", "inedges_y"}) {
    auto t = entry(name, kAllModes, Mode::global, dyad(name));
    t.directed_only = true;
    r.add(t);
  }
  for (const char* name : {"spillover_xx", "spillover_yy", "spillover_xy", "spillover_yx"}) {
    auto t = entry(name, kLocal, Mode::local, dyad(name));
    t.directed_only = std::string(name) == "spillover_yx";
    r.add(t);
  }
  for (const char* name : {"spillover_xx_scaled", "spillover_yy_scaled", "spillover_xy_scaled", "spillover_yx_scaled"})
    r.add(entry(name, kAllModes, Mode::local, dyad(name)));
  {
    auto t = entry("spillover_yc", kLocal, Mode::local, dyad("spillover_yc"));
    t.covariate = CovariateKind::unit;
    r.add(t);
  }
  return r;
}

const TermRegistry& TermRegistry::builtin() {
  static const TermRegistry r = with_builtins();
  return r;
}

}  // namespace netglm
