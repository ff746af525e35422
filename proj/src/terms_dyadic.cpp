// Terms of the form sum over dyads of weight_ij(x, y) * e_ij, plus mutual
// and the degree-normalised spillover family.

#include <algorithm>
#include <stdexcept>

#include "netglm/term.hpp"

namespace netglm {

namespace {

struct Values {
  double xi, xj, yi, yj;
};

using Weight = std::function<double(int i, int j, const Values& v)>;

// For undirected networks the weight is evaluated with i < j.
class DyadWeightTerm : public Term {
 public:
  DyadWeightTerm(Mode mode, Weight w, bool uses_x, bool uses_y)
      : mode_(mode), w_(std::move(w)), uses_x_(uses_x), uses_y_(uses_y) {}

  double global(const TermContext& ctx) const override {
    double s = 0.0;
    for (int i = 0; i < ctx.n(); ++i)
      for (int j : ctx.out_neighbors(i)) {
        if (!ctx.directed() && j < i) continue;
        s += mode_weight(mode_, ctx.overlap(i, j)) * w_(i, j, values(ctx, i, j));
      }
    return s;
  }

  double change_z(const TermContext& ctx, int i, int j) const override {
    if (!ctx.directed() && j < i) std::swap(i, j);
    double m = mode_weight(mode_, ctx.overlap(i, j));
    return m == 0.0 ? 0.0 : m * w_(i, j, values(ctx, i, j));
  }

  double change_x(const TermContext& ctx, int k) const override {
    return uses_x_ ? attribute_slope(ctx, k, true) : 0.0;
  }
  double change_y(const TermContext& ctx, int k) const override {
    return uses_y_ ? attribute_slope(ctx, k, false) : 0.0;
  }

 private:
  static Values values(const TermContext& ctx, int i, int j) {
    return {ctx.x(i), ctx.x(j), ctx.y(i), ctx.y(j)};
  }

  // Difference of the weight between attribute value 1 and 0 at unit k,
  // summed over the present dyads containing k.
  double attribute_slope(const TermContext& ctx, int k, bool x) const {
    auto diff = [&](int a, int b) {
      Values v = values(ctx, a, b);
      double& slot = x ? (a == k ? v.xi : v.xj) : (a == k ? v.yi : v.yj);
      slot = 1.0;
      double hi = w_(a, b, v);
      slot = 0.0;
      return hi - w_(a, b, v);
    };
    double s = 0.0;
    if (ctx.directed()) {
      for (int j : ctx.out_neighbors(k))
        if (double m = mode_weight(mode_, ctx.overlap(k, j)); m != 0.0) s += m * diff(k, j);
      for (int j : ctx.in_neighbors(k))
        if (double m = mode_weight(mode_, ctx.overlap(j, k)); m != 0.0) s += m * diff(j, k);
    } else {
      for (int j : ctx.out_neighbors(k))
        if (double m = mode_weight(mode_, ctx.overlap(k, j)); m != 0.0)
          s += m * (k < j ? diff(k, j) : diff(j, k));
    }
    return s;
  }

  Mode mode_;
  Weight w_;
  bool uses_x_;
  bool uses_y_;
};

class MutualTerm : public Term {
 public:
  explicit MutualTerm(Mode m) : mode_(m) {}
  double global(const TermContext& ctx) const override {
    double s = 0.0;
    for (int i = 0; i < ctx.n(); ++i)
      for (int j : ctx.out_neighbors(i))
        if (ctx.edge(j, i)) s += 0.5 * mode_weight(mode_, ctx.overlap(i, j));
    return s;
  }
  double change_z(const TermContext& ctx, int i, int j) const override {
    return ctx.edge(j, i) ? mode_weight(mode_, ctx.overlap(i, j)) : 0.0;
  }

 private:
  Mode mode_;
};

// sum over ordered present pairs (i, j) of a_i b_j / max(1, deg(i, s)),
// where both orientations of an undirected edge count.
class ScaledSpilloverTerm : public Term {
 public:
  ScaledSpilloverTerm(Mode m, bool a_is_x, bool b_is_x) : mode_(m), a_x_(a_is_x), b_x_(b_is_x) {}

  double global(const TermContext& ctx) const override {
    double s = 0.0;
    for (int i = 0; i < ctx.n(); ++i) {
      int d = 0;
      double row = 0.0;
      for (int j : ctx.out_neighbors(i))
        if (mode_weight(mode_, ctx.overlap(i, j)) != 0.0) {
          ++d;
          row += b(ctx, j);
        }
      s += a(ctx, i) * row / std::max(1, d);
    }
    return s;
  }

  double change_z(const TermContext& ctx, int i, int j) const override {
    if (mode_weight(mode_, ctx.overlap(i, j)) == 0.0) return 0.0;
    double delta = row_change(ctx, i, j);
    if (!ctx.directed()) delta += row_change(ctx, j, i);
    return delta;
  }

  double change_x(const TermContext& ctx, int k) const override { return slope(ctx, k, true); }
  double change_y(const TermContext& ctx, int k) const override { return slope(ctx, k, false); }

 private:
  double a(const TermContext& ctx, int i) const { return a_x_ ? ctx.x(i) : ctx.y(i); }
  double b(const TermContext& ctx, int i) const { return b_x_ ? ctx.x(i) : ctx.y(i); }

  void row(const TermContext& ctx, int i, int& d, double& sum) const {
    d = 0;
    sum = 0.0;
    for (int j : ctx.out_neighbors(i))
      if (mode_weight(mode_, ctx.overlap(i, j)) != 0.0) {
        ++d;
        sum += b(ctx, j);
      }
  }

  // Row i before and after adding j to its selected out-neighbors.
  double row_change(const TermContext& ctx, int i, int j) const {
    int d;
    double sum;
    row(ctx, i, d, sum);
    return a(ctx, i) * ((sum + b(ctx, j)) / (d + 1) - sum / std::max(1, d));
  }

  double slope(const TermContext& ctx, int k, bool x) const {
    double s = 0.0;
    if (a_x_ == x) {
      int d;
      double sum;
      row(ctx, k, d, sum);
      s += sum / std::max(1, d);
    }
    if (b_x_ == x) {
      for (int i : ctx.in_neighbors(k)) {
        if (mode_weight(mode_, ctx.overlap(i, k)) == 0.0) continue;
        int d;
        double sum;
        row(ctx, i, d, sum);
        s += a(ctx, i) / std::max(1, d);
      }
    }
    return s;
  }

  Mode mode_;
  bool a_x_;
  bool b_x_;
};

}  // namespace

std::unique_ptr<Term> make_dyadic_term(const std::string& name, const BoundArgs& a) {
  const bool undirected = !a.data->directed();
  const Mode m = a.mode;
  auto make = [&](Weight w, bool ux, bool uy) { return std::make_unique<DyadWeightTerm>(m, std::move(w), ux, uy); };
  auto ucov = a.unit_covariate;

  if (name == "edges") return make([](int, int, const Values&) { return 1.0; }, false, false);
  if (name == "mutual") return std::make_unique<MutualTerm>(m);
  if (name == "cov_z") {
    DyadCovariate w = *a.dyad_covariate;
    return make([w](int i, int j, const Values&) { return w(i, j); }, false, false);
  }
  if (name == "cov_z_out") return make([ucov](int i, int, const Values&) { return (*ucov)[i]; }, false, false);
  if (name == "cov_z_in") return make([ucov](int, int j, const Values&) { return (*ucov)[j]; }, false, false);
  if (name == "outedges_x") return make([](int, int, const Values& v) { return v.xi; }, true, false);
  if (name == "inedges_x") return make([](int, int, const Values& v) { return v.xj; }, true, false);
  if (name == "outedges_y") return make([](int, int, const Values& v) { return v.yi; }, false, true);
  if (name == "inedges_y") return make([](int, int, const Values& v) { return v.yj; }, false, true);
  if (name == "edges_x_match")
    return make([](int, int, const Values& v) { return v.xi == v.xj ? 1.0 : 0.0; }, true, false);
  if (name == "edges_y_match")
    return make([](int, int, const Values& v) { return v.yi == v.yj ? 1.0 : 0.0; }, false, true);
  if (name == "attribute_xz") return make([](int, int, const Values& v) { return v.xi + v.xj; }, true, false);
  if (name == "attribute_yz") return make([](int, int, const Values& v) { return v.yi + v.yj; }, false, true);
  if (name == "spillover_xx") return make([](int, int, const Values& v) { return v.xi * v.xj; }, true, false);
  if (name == "spillover_yy") return make([](int, int, const Values& v) { return v.yi * v.yj; }, false, true);
  if (name == "spillover_xy") {
    if (undirected) return make([](int, int, const Values& v) { return v.xi * v.yj + v.xj * v.yi; }, true, true);
    return make([](int, int, const Values& v) { return v.xi * v.yj; }, true, true);
  }
  if (name == "spillover_yx") return make([](int, int, const Values& v) { return v.yi * v.xj; }, true, true);
  if (name == "spillover_yc") {
    if (undirected)
      return make([ucov](int i, int j, const Values& v) { return (*ucov)[j] * v.yi + (*ucov)[i] * v.yj; }, false,
                  true);
    return make([ucov](int, int j, const Values& v) { return (*ucov)[j] * v.yi; }, false, true);
  }
  if (name == "spillover_xx_scaled") return std::make_unique<ScaledSpilloverTerm>(m, true, true);
  if (name == "spillover_yy_scaled") return std::make_unique<ScaledSpilloverTerm>(m, false, false);
  if (name == "spillover_xy_scaled") return std::make_unique<ScaledSpilloverTerm>(m, true, false);
  if (name == "spillover_yx_scaled") return std::make_unique<ScaledSpilloverTerm>(m, false, true);
  throw std::logic_error("no dyadic term named " + name);
}

}  // namespace netglm
