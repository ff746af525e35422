#pragma once

#include <optional>
#include <string>
#include <vector>

#include "netglm/population.hpp"

namespace netglm {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<int> line_numbers;
};

// Comma-separated with a mandatory header row; double quotes may wrap fields.
CsvTable read_csv(const std::string& path);

struct DataPaths {
  std::string attributes;
  std::string edges;
  std::optional<std::string> neighborhoods;
};

// Attributes file: unit id first, then columns "x" (optional) and "y"; any other
// column becomes a unit covariate. Non-numeric covariate columns are coded by
// order of first appearance. Edge and neighborhood files hold (src, dst) ids.
PopulationData load_population(const DataPaths& paths, BuildFlags flags);

// Writes attributes.csv, edges.csv and neighborhoods.csv (unless full) into dir.
void write_population(const PopulationData& data, const std::string& dir);

std::string csv_escape(const std::string& s);
// Shortest text that reads back to the same double.
std::string format_number(double v);

}  // namespace netglm
