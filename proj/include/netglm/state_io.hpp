#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "netglm/csv_io.hpp"
#include "netglm/sampler.hpp"

namespace netglm {

nlohmann::json state_to_json(const State& s);
State state_from_json(const nlohmann::json& j, int n, bool directed);

// samples.json: {"labels": [...], "statistics": [[...]], "states": [...], "transitions": k}
void write_samples(const std::string& path, const SimulationResult& sim, const std::vector<std::string>& labels);
// The transition count comes back as 0: loading spends none.
SimulationResult read_samples(const std::string& path, int n, bool directed);

// One row per draw: draw index then one column per statistic.
void write_statistics_csv(const std::string& path, const SimulationResult& sim, const std::vector<std::string>& labels);

}  // namespace netglm
