// Unit-level terms: attribute intercepts, covariate interactions and the
// within-unit / within-neighborhood attribute products.

#include <stdexcept>

#include "netglm/term.hpp"

namespace netglm {

namespace {

enum class Which { x, y };

class AttributeTerm : public Term {
 public:
  AttributeTerm(Which w, std::shared_ptr<const std::vector<double>> cov) : which_(w), cov_(std::move(cov)) {}

  double global(const TermContext& ctx) const override {
    double s = 0.0;
    for (int i = 0; i < ctx.n(); ++i) s += weight(i) * value(ctx, i);
    return s;
  }
  double change_x(const TermContext&, int i) const override { return which_ == Which::x ? weight(i) : 0.0; }
  double change_y(const TermContext&, int i) const override { return which_ == Which::y ? weight(i) : 0.0; }

 private:
  double weight(int i) const { return cov_ ? (*cov_)[i] : 1.0; }
  double value(const TermContext& ctx, int i) const { return which_ == Which::x ? ctx.x(i) : ctx.y(i); }

  Which which_;
  std::shared_ptr<const std::vector<double>> cov_;
};

// global: sum_i x_i y_i
// local:  sum_i x_i sum_{j in N_i} y_j + y_i sum_{j in N_i} x_j   (j != i)
// alocal: the same over j outside N_i
class AttributeProductTerm : public Term {
 public:
  explicit AttributeProductTerm(Mode m) : mode_(m) {}

  double global(const TermContext& ctx) const override {
    const int n = ctx.n();
    double s = 0.0;
    if (mode_ == Mode::global) {
      for (int i = 0; i < n; ++i) s += ctx.x(i) * ctx.y(i);
      return s;
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (j == i || !selected(ctx, i, j)) continue;
        s += ctx.x(i) * ctx.y(j) + ctx.y(i) * ctx.x(j);
      }
    return s;
  }

  double change_x(const TermContext& ctx, int k) const override {
    return coefficient(ctx, k, [&](int j) { return ctx.y(j); });
  }
  double change_y(const TermContext& ctx, int k) const override {
    return coefficient(ctx, k, [&](int j) { return ctx.x(j); });
  }

 private:
  bool selected(const TermContext& ctx, int i, int j) const {
    bool in = ctx.in_neighborhood(i, j);
    return mode_ == Mode::local ? in : !in;
  }

  // The target unit k appears once as "i" (partners j in N_k) and once as
  // the partner of every i whose neighborhood holds k.
  template <class Other>
  double coefficient(const TermContext& ctx, int k, Other other) const {
    if (mode_ == Mode::global) return other(k);
    const Neighborhoods& nb = ctx.neighborhoods();
    const int n = ctx.n();
    double total = 0.0;
    for (int j = 0; j < n; ++j)
      if (j != k) total += other(j);
    double inside = 0.0;
    if (nb.is_full()) {
      inside = 2.0 * total;
    } else {
      for (int j : nb.members(k))
        if (j != k) inside += other(j);
      for (int i : nb.holders(k))
        if (i != k) inside += other(i);
    }
    return mode_ == Mode::local ? inside : 2.0 * total - inside;
  }

  Mode mode_;
};

}  // namespace

std::unique_ptr<Term> make_attribute_term(const std::string& name, const BoundArgs& a) {
  if (name == "attribute_x") return std::make_unique<AttributeTerm>(Which::x, nullptr);
  if (name == "attribute_y") return std::make_unique<AttributeTerm>(Which::y, nullptr);
  if (name == "cov_x") return std::make_unique<AttributeTerm>(Which::x, a.unit_covariate);
  if (name == "cov_y") return std::make_unique<AttributeTerm>(Which::y, a.unit_covariate);
  if (name == "attribute_xy") return std::make_unique<AttributeProductTerm>(a.mode);
  throw std::logic_error("no attribute term named " + name);
}

}  // namespace netglm
