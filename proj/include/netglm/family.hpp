#pragma once

#include <string>
#include <string_view>

namespace netglm {

enum class Family { binomial, poisson, normal };

Family parse_family(std::string_view name);
const char* family_name(Family f);

// Dyad selection used by most network terms: all dyads, overlapping
// neighborhoods only, or non-overlapping only.
enum class Mode { global, local, alocal };

Mode parse_mode(std::string_view name);
const char* mode_name(Mode m);

inline double mode_weight(Mode m, bool overlap) {
  switch (m) {
    case Mode::global: return 1.0;
    case Mode::local: return overlap ? 1.0 : 0.0;
    case Mode::alocal: return overlap ? 0.0 : 1.0;
  }
  return 0.0;
}

// Shared-partner path orientation for directed networks. `symmetric` is the
// undirected convention (two-path through a common neighbor).
enum class PathType { otp, isp, osp, itp, symmetric };

PathType parse_path_type(std::string_view name);
const char* path_type_name(PathType t);

}  // namespace netglm
