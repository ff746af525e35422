#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "netglm/term_context.hpp"

namespace netglm {

// One scalar sufficient statistic s(x, y, z) = sum_i g_i + sum_dyads h_ij.
// Change statistics must agree with differences of global():
//   change_z(i, j): s(z_ij = 1) - s(z_ij = 0), called with the dyad absent
//                   (both orientations when undirected);
//   change_x(i):    coefficient of the scaled x_i, which for binary x equals
//                   s(x_i = 1) - s(x_i = 0). Same for change_y.
class Term {
 public:
  virtual ~Term() = default;
  virtual double global(const TermContext& ctx) const = 0;
  virtual double change_x(const TermContext&, int) const { return 0.0; }
  virtual double change_y(const TermContext&, int) const { return 0.0; }
  virtual double change_z(const TermContext&, int, int) const { return 0.0; }
};

// Geometric weight w_k(a) = e^a (1 - (1 - e^-a)^k); w_0 = 0, w_1 = 1.
inline double gw_weight(int k, double alpha) {
  if (k <= 0) return 0.0;
  return std::exp(alpha) * (1.0 - std::pow(1.0 - std::exp(-alpha), k));
}

enum class CovariateKind { none, unit, dyad };

// Everything a term factory needs after formula arguments are resolved.
struct BoundArgs {
  const PopulationData* data = nullptr;
  Mode mode = Mode::global;
  double decay = 0.0;
  PathType type = PathType::otp;
  std::shared_ptr<const std::vector<double>> unit_covariate;
  std::optional<DyadCovariate> dyad_covariate;
};

using TermFactory = std::function<std::unique_ptr<Term>(const BoundArgs&)>;

// Factories for the built-in catalog, grouped by source file.
std::unique_ptr<Term> make_attribute_term(const std::string& name, const BoundArgs& a);
std::unique_ptr<Term> make_dyadic_term(const std::string& name, const BoundArgs& a);
std::unique_ptr<Term> make_structural_term(const std::string& name, const BoundArgs& a);

}  // namespace netglm
