#include "netglm/model.hpp"

#include "netglm/error.hpp"

namespace netglm {

Model Model::bind(const ModelSpec& spec, const PopulationData& design, const TermRegistry& registry) {
  Model m;
  m.spec_ = spec;
  m.n_ = design.n();
  m.directed_ = design.directed();
  if (spec.terms.empty()) throw ValidationError("model has no terms");

  std::vector<std::string> generic;
  for (const TermInstance& t : spec.terms) {
    const TermTraits* tr = registry.find(t.name);
    if (!tr) throw ValidationError("unknown term '" + t.name + "'");
    if (tr->directed_only && !m.directed_)
      throw ValidationError("term '" + t.label() + "' requires a directed network");
    if (tr->undirected_only && m.directed_)
      throw ValidationError("term '" + t.label() + "' requires an undirected network");
    if (tr->degrees) {
      m.p1_ = m.directed_ ? 2 * m.n_ : m.n_;
      continue;
    }
    if (tr->binary_x_only && !design.x.fixed && design.x.family != Family::binomial)
      throw ValidationError("term '" + t.label() + "' is not affine in x and needs a binary x");
    if (tr->binary_y_only && design.y.family != Family::binomial)
      throw ValidationError("term '" + t.label() + "' is not affine in y and needs a binary y");

    BoundArgs args;
    args.data = &design;
    args.mode = t.mode;
    args.decay = t.decay.value_or(kDefaultDecay);
    args.type = t.type.value_or(PathType::otp);
    if (tr->covariate == CovariateKind::unit) {
      auto it = design.covariates.unit.find(t.covariate);
      if (it == design.covariates.unit.end())
        throw ValidationError("term '" + t.label() + "': no unit covariate named '" + t.covariate + "'");
      args.unit_covariate = it->second;
    } else if (tr->covariate == CovariateKind::dyad) {
      args.dyad_covariate = design.covariates.find_dyad(t.covariate);
      if (!args.dyad_covariate)
        throw ValidationError("term '" + t.label() + "': no dyad covariate named '" + t.covariate + "'");
    }
    m.terms_.push_back(std::shared_ptr<const Term>(tr->factory(args)));
    generic.push_back(t.label());
  }
  m.p2_ = static_cast<int>(m.terms_.size());
  if (m.p1_ > 0) {
    if (m.directed_) {
      for (int i = 0; i < m.n_; ++i) m.labels_.push_back("outdeg_" + std::to_string(i));
      for (int i = 0; i < m.n_; ++i) m.labels_.push_back("indeg_" + std::to_string(i));
    } else {
      for (int i = 0; i < m.n_; ++i) m.labels_.push_back("deg_" + std::to_string(i));
    }
  }
  m.labels_.insert(m.labels_.end(), generic.begin(), generic.end());
  return m;
}

std::vector<std::string> Model::generic_labels() const {
  return std::vector<std::string>(labels_.begin() + p1_, labels_.end());
}

Eigen::VectorXd Model::global_statistic(const PopulationData& design, const State& s) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dim());
  if (p1_ > 0) {
    for (int i = 0; i < n_; ++i) {
      out[degree_out_index(i)] = s.z.out_degree(i);
      if (directed_) out[degree_in_index(i)] = s.z.in_degree(i);
    }
  }
  TermContext ctx(design, s);
  for (int k = 0; k < p2_; ++k) out[p1_ + k] = terms_[k]->global(ctx);
  return out;
}

Eigen::VectorXd Model::change_statistic(const PopulationData& design, const State& s, Target t) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dim());
  switch (t.kind) {
    case Target::x: {
      TermContext ctx(design, s);
      change_x(ctx, t.i, out.data() + p1_);
      break;
    }
    case Target::y: {
      TermContext ctx(design, s);
      change_y(ctx, t.i, out.data() + p1_);
      break;
    }
    case Target::z: {
      if (t.i == t.j || t.i < 0 || t.j < 0 || t.i >= n_ || t.j >= n_)
        throw ValidationError("invalid dyad (" + std::to_string(t.i) + "," + std::to_string(t.j) + ")");
      const State* use = &s;
      State off;
      if (s.z.has_edge(t.i, t.j)) {
        off = s;
        off.z.remove_edge(t.i, t.j);
        use = &off;
      }
      TermContext ctx(design, *use);
      change_z(ctx, t.i, t.j, out.data() + p1_);
      if (p1_ > 0) {
        out[degree_out_index(t.i)] += 1.0;
        out[degree_in_index(t.j)] += 1.0;
      }
      break;
    }
  }
  return out;
}

void Model::change_x(const TermContext& ctx, int i, double* out) const {
  for (int k = 0; k < p2_; ++k) out[k] = terms_[k]->change_x(ctx, i);
}

void Model::change_y(const TermContext& ctx, int i, double* out) const {
  for (int k = 0; k < p2_; ++k) out[k] = terms_[k]->change_y(ctx, i);
}

void Model::change_z(const TermContext& ctx, int i, int j, double* out) const {
  for (int k = 0; k < p2_; ++k) out[k] = terms_[k]->change_z(ctx, i, j);
}

}  // namespace netglm
