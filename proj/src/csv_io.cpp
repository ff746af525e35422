#include "netglm/csv_io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "netglm/error.hpp"

namespace netglm {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  for (auto& f : out) {
    auto b = f.find_first_not_of(" \t");
    auto e = f.find_last_not_of(" \t");
    f = b == std::string::npos ? std::string() : f.substr(b, e - b + 1);
  }
  return out;
}

std::optional<double> to_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  if (*b == '+') ++b;
  auto r = std::from_chars(b, e, v);
  if (r.ec != std::errc() || r.ptr != e) {
    if (s == "TRUE" || s == "true") return 1.0;
    if (s == "FALSE" || s == "false") return 0.0;
    return std::nullopt;
  }
  return v;
}

std::vector<std::pair<int, int>> read_pairs(const std::string& path,
                                            const std::unordered_map<std::string, int>& ids,
                                            const char* what) {
  CsvTable t = read_csv(path);
  if (t.header.size() < 2) throw ValidationError(path + ": " + what + " file needs two columns (src,dst)");
  std::vector<std::pair<int, int>> out;
  out.reserve(t.rows.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    auto loc = path + ":" + std::to_string(t.line_numbers[r]);
    if (row.size() < 2) throw ValidationError(loc + ": expected two fields");
    auto a = ids.find(row[0]);
    auto b = ids.find(row[1]);
    if (a == ids.end()) throw ValidationError(loc + ": unknown unit id '" + row[0] + "'");
    if (b == ids.end()) throw ValidationError(loc + ": unknown unit id '" + row[1] + "'");
    out.emplace_back(a->second, b->second);
  }
  return out;
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string o = "\"";
  for (char c : s) {
    if (c == '"') o += '"';
    o += c;
  }
  return o + "\"";
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file '" + path + "'");
  CsvTable t;
  std::string line;
  int ln = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++ln;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (!have_header) {
      if (ln == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
      t.header = split_line(line);
      have_header = true;
      continue;
    }
    t.rows.push_back(split_line(line));
    t.line_numbers.push_back(ln);
  }
  if (!have_header) throw ValidationError("file '" + path + "' is empty (header row required)");
  return t;
}

PopulationData load_population(const DataPaths& paths, BuildFlags flags) {
  CsvTable attrs = read_csv(paths.attributes);
  const auto& h = attrs.header;
  int col_x = -1, col_y = -1;
  for (std::size_t c = 1; c < h.size(); ++c) {
    if (h[c] == "x") col_x = static_cast<int>(c);
    if (h[c] == "y") col_y = static_cast<int>(c);
  }
  if (col_y < 0) throw ValidationError(paths.attributes + ": missing 'y' column");

  RawPopulation raw;
  std::unordered_map<std::string, int> ids;
  std::map<std::string, std::vector<std::string>> cov_text;
  for (std::size_t r = 0; r < attrs.rows.size(); ++r) {
    const auto& row = attrs.rows[r];
    auto loc = paths.attributes + ":" + std::to_string(attrs.line_numbers[r]);
    if (row.size() != h.size())
      throw ValidationError(loc + ": expected " + std::to_string(h.size()) + " fields, found " +
                            std::to_string(row.size()));
    if (!ids.emplace(row[0], static_cast<int>(raw.unit_ids.size())).second)
      throw ValidationError(loc + ": duplicate unit id '" + row[0] + "'");
    raw.unit_ids.push_back(row[0]);
    auto num = [&](int c) {
      auto v = to_number(row[c]);
      if (!v) throw ValidationError(loc + ": column '" + h[c] + "' is not numeric ('" + row[c] + "')");
      return *v;
    };
    raw.y.push_back(num(col_y));
    raw.x.push_back(col_x >= 0 ? num(col_x) : 0.0);
    for (std::size_t c = 1; c < h.size(); ++c)
      if (static_cast<int>(c) != col_x && static_cast<int>(c) != col_y) cov_text[h[c]].push_back(row[c]);
  }
  if (col_x < 0) flags.fix_x = true;

  for (auto& [name, text] : cov_text) {
    std::vector<double> v(text.size());
    bool numeric = true;
    for (std::size_t i = 0; i < text.size() && numeric; ++i) {
      auto d = to_number(text[i]);
      if (d) v[i] = *d; else numeric = false;
    }
    if (!numeric) {
      std::map<std::string, double> codes;
      for (std::size_t i = 0; i < text.size(); ++i) {
        auto it = codes.emplace(text[i], static_cast<double>(codes.size())).first;
        v[i] = it->second;
      }
    }
    raw.unit_covariates[name] = std::move(v);
  }

  raw.edges = read_pairs(paths.edges, ids, "edge");
  if (paths.neighborhoods) raw.neighborhood_pairs = read_pairs(*paths.neighborhoods, ids, "neighborhood");
  return build_population(raw, flags);
}

void write_population(const PopulationData& data, const std::string& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir + "/attributes.csv");
    out << "unit_id,x,y";
    for (const auto& [name, v] : data.covariates.unit) out << ',' << csv_escape(name);
    out << '\n';
    for (int i = 0; i < data.n(); ++i) {
      out << csv_escape(data.unit_ids[i]) << ',' << format_number(data.x.values[i]) << ','
          << format_number(data.y.values[i]);
      for (const auto& [name, v] : data.covariates.unit) out << ',' << format_number((*v)[i]);
      out << '\n';
    }
  }
  {
    std::ofstream out(dir + "/edges.csv");
    out << "src,dst\n";
    for (auto [i, j] : data.z.edge_list())
      out << csv_escape(data.unit_ids[i]) << ',' << csv_escape(data.unit_ids[j]) << '\n';
  }
  if (!data.nb->is_full()) {
    std::ofstream out(dir + "/neighborhoods.csv");
    out << "src,dst\n";
    for (int i = 0; i < data.n(); ++i)
      for (int k : data.nb->members(i))
        out << csv_escape(data.unit_ids[i]) << ',' << csv_escape(data.unit_ids[k]) << '\n';
  }
}

}  // namespace netglm
