#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "netglm/term.hpp"

namespace netglm {

struct TermTraits {
  std::string name;
  // Accepted modes; empty when the term takes no mode argument.
  std::vector<Mode> modes;
  Mode default_mode = Mode::global;
  bool geometric = false;  // takes decay
  bool typed = false;      // takes a shared-partner type
  CovariateKind covariate = CovariateKind::none;
  bool directed_only = false;
  bool undirected_only = false;
  // The statistic is only affine in x (resp. y) for binary values.
  bool binary_x_only = false;
  bool binary_y_only = false;
  bool degrees = false;
  bool user = false;
  // Statistic on the all-zero configuration (no ties, zero attributes).
  std::function<double(int n)> empty_value;
  TermFactory factory;
};

// User-defined term. Callbacks receive the read-only context; change_z is
// called with z_ij = 0. Missing callbacks mean a zero change statistic.
struct UserTermDescriptor {
  std::string name;
  double empty_value = 0.0;
  bool supports_directed = true;
  bool supports_undirected = true;
  bool affine_x = true;
  bool affine_y = true;
  std::function<double(const TermContext&, int i)> change_x;
  std::function<double(const TermContext&, int i)> change_y;
  std::function<double(const TermContext&, int i, int j)> change_z;
};

class TermRegistry {
 public:
  // Registry holding the full built-in catalog.
  static TermRegistry with_builtins();
  static const TermRegistry& builtin();

  const TermTraits* find(const std::string& name) const;
  void register_user_term(UserTermDescriptor d);
  std::vector<std::string> names() const;

 private:
  void add(TermTraits t);
  std::map<std::string, TermTraits> terms_;
};

// Entry point a compiled plugin exports: extern "C" void netglm_register_terms(TermRegistry&).
using PluginRegisterFn = void (*)(TermRegistry&);

}  // namespace netglm
