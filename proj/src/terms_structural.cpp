// Purely structural terms: isolates, geometrically weighted degrees and the
// shared-partner family (transitive, gwesp, gwdsp).

#include <stdexcept>

#include "netglm/term.hpp"

namespace netglm {

namespace {

int total_degree(const TermContext& ctx, int i) {
  return ctx.directed() ? ctx.out_degree(i) + ctx.in_degree(i) : ctx.out_degree(i);
}

class IsolatesTerm : public Term {
 public:
  explicit IsolatesTerm(bool isolated) : sign_(isolated ? 1.0 : -1.0), isolated_(isolated) {}
  double global(const TermContext& ctx) const override {
    double s = 0.0;
    for (int i = 0; i < ctx.n(); ++i) s += (total_degree(ctx, i) == 0) == isolated_ ? 1.0 : 0.0;
    return s;
  }
  double change_z(const TermContext& ctx, int i, int j) const override {
    double lost = (total_degree(ctx, i) == 0 ? 1.0 : 0.0) + (total_degree(ctx, j) == 0 ? 1.0 : 0.0);
    return -sign_ * lost;
  }

 private:
  double sign_;
  bool isolated_;
};

// sum_i w_{deg(i)} where deg counts out-links (sender side) or in-links.
// Undirected networks use the single degree and a toggle moves both ends.
class GwDegreeTerm : public Term {
 public:
  GwDegreeTerm(Mode m, bool in, double alpha) : mode_(m), in_(in), alpha_(alpha) {}

  double global(const TermContext& ctx) const override {
    double s = 0.0;
    for (int i = 0; i < ctx.n(); ++i) s += gw_weight(degree(ctx, i), alpha_);
    return s;
  }
  double change_z(const TermContext& ctx, int i, int j) const override {
    if (mode_weight(mode_, ctx.overlap(i, j)) == 0.0) return 0.0;
    if (!ctx.directed()) return step(degree(ctx, i)) + step(degree(ctx, j));
    return step(degree(ctx, in_ ? j : i));
  }

 private:
  double step(int d) const { return gw_weight(d + 1, alpha_) - gw_weight(d, alpha_); }
  int degree(const TermContext& ctx, int i) const {
    const auto& nbrs = in_ ? ctx.in_neighbors(i) : ctx.out_neighbors(i);
    if (mode_ == Mode::global) return static_cast<int>(nbrs.size());
    int d = 0;
    for (int j : nbrs) d += mode_weight(mode_, ctx.overlap(i, j)) != 0.0;
    return d;
  }

  Mode mode_;
  bool in_;
  double alpha_;
};

enum class SpKind { esp, dsp, transitive };

// sum over dyads (a, b) of pair(a, b) * phi(cp(a, b)) with cp the number of
// shared partners of the given orientation. For transitive, phi is the
// indicator cp >= 1, links are raw ties, and the partner must lie in both
// neighborhoods; otherwise links are mode-selected ties and phi = w_k.
class SharedPartnerTerm : public Term {
 public:
  SharedPartnerTerm(SpKind kind, Mode mode, PathType type, double alpha)
      : kind_(kind), mode_(mode), type_(type), alpha_(alpha) {}

  double global(const TermContext& ctx) const override {
    const int n = ctx.n();
    double s = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = ctx.directed() ? 0 : a + 1; b < n; ++b) {
        if (a == b) continue;
        double p = pair_weight(ctx, a, b);
        if (p == 0.0) continue;
        int cp = 0;
        for (int h = 0; h < n; ++h)
          if (h != a && h != b && brute_path(ctx, a, h, b)) ++cp;
        s += p * phi(cp);
      }
    return s;
  }

  double change_z(const TermContext& ctx, int i, int j) const override {
    if (kind_ != SpKind::transitive && mode_weight(mode_, ctx.overlap(i, j)) == 0.0) return 0.0;
    double delta = 0.0;
    // The toggled dyad's own pair weight switches on.
    if (kind_ == SpKind::esp) delta += phi(count(ctx, i, j));
    if (kind_ == SpKind::transitive && ctx.overlap(i, j)) delta += phi(count(ctx, i, j));

    auto bump = [&](int a, int b, int via) {
      if (kind_ == SpKind::transitive && !(ctx.in_neighborhood(a, via) && ctx.in_neighborhood(b, via))) return;
      double p = pair_weight(ctx, a, b);
      if (p == 0.0) return;
      int cp = count(ctx, a, b);
      delta += p * (phi(cp + 1) - phi(cp));
    };
    // Pairs whose partner count grows by one: the new tie i->j becomes one
    // link of a path through partner `via`.
    switch (effective_type(ctx)) {
      case PathType::symmetric:
        for (int b : ctx.out_neighbors(j))
          if (b != i && link(ctx, j, b)) bump(i, b, j);
        for (int a : ctx.out_neighbors(i))
          if (a != j && link(ctx, i, a)) bump(j, a, i);
        break;
      case PathType::otp:  // a->h->b
        for (int b : ctx.out_neighbors(j))
          if (b != i && link(ctx, j, b)) bump(i, b, j);
        for (int a : ctx.in_neighbors(i))
          if (a != j && link(ctx, a, i)) bump(a, j, i);
        break;
      case PathType::isp:  // h->a, h->b
        for (int u : ctx.out_neighbors(i))
          if (u != j && link(ctx, i, u)) {
            bump(j, u, i);
            bump(u, j, i);
          }
        break;
      case PathType::osp:  // a->h, b->h
        for (int u : ctx.in_neighbors(j))
          if (u != i && link(ctx, u, j)) {
            bump(i, u, j);
            bump(u, i, j);
          }
        break;
      case PathType::itp:  // h->a, b->h
        for (int b : ctx.in_neighbors(i))
          if (b != j && link(ctx, b, i)) bump(j, b, i);
        for (int a : ctx.out_neighbors(j))
          if (a != i && link(ctx, j, a)) bump(a, i, j);
        break;
    }
    return delta;
  }

 private:
  PathType effective_type(const TermContext& ctx) const {
    if (!ctx.directed()) return PathType::symmetric;
    return type_ == PathType::symmetric ? PathType::otp : type_;
  }

  double phi(int cp) const {
    if (kind_ == SpKind::transitive) return cp >= 1 ? 1.0 : 0.0;
    return gw_weight(cp, alpha_);
  }

  // Present tie usable as a path link.
  bool link(const TermContext& ctx, int a, int b) const {
    if (!ctx.edge(a, b)) return false;
    return kind_ == SpKind::transitive || mode_weight(mode_, ctx.overlap(a, b)) != 0.0;
  }

  double pair_weight(const TermContext& ctx, int a, int b) const {
    switch (kind_) {
      case SpKind::esp: return link(ctx, a, b) ? 1.0 : 0.0;
      case SpKind::dsp: return 1.0;
      case SpKind::transitive: return ctx.edge(a, b) && ctx.overlap(a, b) ? 1.0 : 0.0;
    }
    return 0.0;
  }

  bool path_allowed(const TermContext& ctx, int a, int h, int b) const {
    if (kind_ == SpKind::transitive) return ctx.in_neighborhood(a, h) && ctx.in_neighborhood(b, h);
    return mode_weight(mode_, ctx.overlap(a, h)) != 0.0 && mode_weight(mode_, ctx.overlap(h, b)) != 0.0;
  }

  // Direct definition used by global(): partner h of (a, b) by orientation.
  bool brute_path(const TermContext& ctx, int a, int h, int b) const {
    bool tie = false;
    switch (effective_type(ctx)) {
      case PathType::symmetric:
      case PathType::otp: tie = ctx.edge(a, h) && ctx.edge(h, b); break;
      case PathType::isp: tie = ctx.edge(h, a) && ctx.edge(h, b); break;
      case PathType::osp: tie = ctx.edge(a, h) && ctx.edge(b, h); break;
      case PathType::itp: tie = ctx.edge(h, a) && ctx.edge(b, h); break;
    }
    return tie && path_allowed(ctx, a, h, b);
  }

  int count(const TermContext& ctx, int a, int b) const {
    int cp = 0;
    for (int h : ctx.common_partners(a, b, effective_type(ctx)))
      if (path_allowed(ctx, a, h, b)) ++cp;
    return cp;
  }

  SpKind kind_;
  Mode mode_;
  PathType type_;
  double alpha_;
};

}  // namespace

std::unique_ptr<Term> make_structural_term(const std::string& name, const BoundArgs& a) {
  if (name == "isolates") return std::make_unique<IsolatesTerm>(true);
  if (name == "nonisolates") return std::make_unique<IsolatesTerm>(false);
  if (name == "gwdegree") return std::make_unique<GwDegreeTerm>(Mode::global, false, a.decay);
  if (name == "gwodegree") return std::make_unique<GwDegreeTerm>(a.mode, false, a.decay);
  if (name == "gwidegree") return std::make_unique<GwDegreeTerm>(a.mode, true, a.decay);
  if (name == "transitive") return std::make_unique<SharedPartnerTerm>(SpKind::transitive, Mode::local, PathType::otp, 0.0);
  if (name == "gwesp_symm") return std::make_unique<SharedPartnerTerm>(SpKind::esp, a.mode, PathType::symmetric, a.decay);
  if (name == "gwesp") return std::make_unique<SharedPartnerTerm>(SpKind::esp, a.mode, a.type, a.decay);
  if (name == "gwdsp_symm") return std::make_unique<SharedPartnerTerm>(SpKind::dsp, a.mode, PathType::symmetric, a.decay);
  if (name == "gwdsp") return std::make_unique<SharedPartnerTerm>(SpKind::dsp, a.mode, a.type, a.decay);
  throw std::logic_error("no structural term named " + name);
}

}  // namespace netglm
