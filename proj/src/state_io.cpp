#include "netglm/state_io.hpp"

#include <fstream>

#include "netglm/csv_io.hpp"
#include "netglm/error.hpp"

namespace netglm {

nlohmann::json state_to_json(const State& s) {
  nlohmann::json edges = nlohmann::json::array();
  for (auto [i, j] : s.z.edge_list()) edges.push_back({i, j});
  return {{"x", s.x}, {"y", s.y}, {"edges", edges}};
}

State state_from_json(const nlohmann::json& j, int n, bool directed) {
  State s{j.at("x").get<std::vector<double>>(), j.at("y").get<std::vector<double>>(), Network(n, directed)};
  if (static_cast<int>(s.x.size()) != n || static_cast<int>(s.y.size()) != n)
    throw ValidationError("stored state has " + std::to_string(s.x.size()) + " units, expected " + std::to_string(n));
  for (const auto& e : j.at("edges")) {
    int a = e.at(0).get<int>(), b = e.at(1).get<int>();
    if (a < 0 || b < 0 || a >= n || b >= n || a == b) throw ValidationError("stored state has an invalid edge");
    s.z.add_edge(a, b);
  }
  return s;
}

void write_samples(const std::string& path, const SimulationResult& sim, const std::vector<std::string>& labels) {
  nlohmann::json j;
  j["labels"] = labels;
  j["transitions"] = sim.transitions;
  nlohmann::json stats = nlohmann::json::array();
  for (const auto& v : sim.statistics) stats.push_back(std::vector<double>(v.data(), v.data() + v.size()));
  j["statistics"] = stats;
  nlohmann::json states = nlohmann::json::array();
  for (const auto& s : sim.states) states.push_back(state_to_json(s));
  j["states"] = states;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump() << "\n";
}

SimulationResult read_samples(const std::string& path, int n, bool directed) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open samples file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("samples file " + path + " is not valid JSON: " + e.what());
  }
  SimulationResult sim;
  for (const auto& row : j.at("statistics")) {
    auto v = row.get<std::vector<double>>();
    sim.statistics.push_back(Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
  }
  for (const auto& s : j.at("states")) sim.states.push_back(state_from_json(s, n, directed));
  sim.transitions = 0;
  return sim;
}

void write_statistics_csv(const std::string& path, const SimulationResult& sim, const std::vector<std::string>& labels) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "draw";
  for (const auto& l : labels) out << "," << csv_escape(l);
  out << "\n";
  for (std::size_t d = 0; d < sim.statistics.size(); ++d) {
    out << d;
    for (double v : sim.statistics[d]) out << "," << format_number(v);
    out << "\n";
  }
}

}  // namespace netglm
