#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "netglm/registry.hpp"

namespace netglm {

struct TermInstance {
  std::string name;
  Mode mode = Mode::global;
  bool mode_given = false;
  std::optional<double> decay;  // geometrically weighted terms only
  bool decay_given = false;
  std::optional<PathType> type;  // typed shared-partner terms only
  bool type_given = false;
  std::string covariate;  // "data" argument of covariate terms

  // Display label, e.g. "cov_z(data = match_gender, mode = 'local')".
  std::string label() const;
  bool operator==(const TermInstance&) const = default;
};

struct ModelSpec {
  std::vector<TermInstance> terms;
  bool has_degrees() const;
  bool operator==(const ModelSpec&) const = default;
};

// Default decay for geometrically weighted terms when none is given.
inline constexpr double kDefaultDecay = 0.5;

// formula := ["~"] term ("+" term)* ; term := ident ["(" [arg ("," arg)*] ")"]
// arg := ident "=" (string | number | ident). Throws FormulaError.
ModelSpec parse_formula(std::string_view text, const TermRegistry& registry = TermRegistry::builtin());

// Canonical text; parse_formula(render_formula(s)) == s.
std::string render_formula(const ModelSpec& spec);

}  // namespace netglm
