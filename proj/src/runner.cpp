#include "cpeps/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace cpeps {

namespace fs = std::filesystem;

void write_csv_atomic(const std::string& path, const CsvTable& table,
                      const std::string& config_hash, unsigned seed) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw ConfigError("cannot open output file: " + tmp.string());
    os << "# schema_version: 1\n";
    os << "# config_hash: " << (config_hash.empty() ? "none" : config_hash) << "\n";
    os << "# seed: " << seed << "\n";
    for (const auto& c : table.comments) os << "# " << c << "\n";
    for (size_t i = 0; i < table.columns.size(); ++i)
      os << table.columns[i] << (i + 1 == table.columns.size() ? "\n" : ",");
    char buf[40];
    for (const auto& row : table.rows) {
      for (size_t i = 0; i < row.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", row[i]);
        os << buf << (i + 1 == row.size() ? "\n" : ",");
      }
    }
  }
  fs::rename(tmp, target);
}

CsvTable read_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open csv: " + path);
  CsvTable t;
  std::string line;
  bool header_done = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      t.comments.push_back(line.substr(line.size() > 1 && line[1] == ' ' ? 2 : 1));
      continue;
    }
    std::stringstream ss(line);
    std::string cell;
    if (!header_done) {
      while (std::getline(ss, cell, ',')) t.columns.push_back(cell);
      header_done = true;
      continue;
    }
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    t.rows.push_back(std::move(row));
  }
  return t;
}

RegressReport regress(const std::string& golden_dir, const std::string& candidate_dir,
                      double tol) {
  RegressReport rep;
  if (!fs::is_directory(golden_dir))
    throw ConfigError("regress: golden directory not found: " + golden_dir);
  std::vector<fs::path> goldens;
  for (const auto& e : fs::directory_iterator(golden_dir))
    if (e.is_regular_file() && e.path().extension() == ".csv") goldens.push_back(e.path());
  std::sort(goldens.begin(), goldens.end());
  if (goldens.empty()) {
    rep.pass = false;
    rep.files.push_back({"(none)", false, 0.0, "no golden csv files"});
    return rep;
  }
  for (const auto& g : goldens) {
    RegressFileResult r;
    r.file = g.filename().string();
    const fs::path cand = fs::path(candidate_dir) / g.filename();
    if (!fs::exists(cand)) {
      r.note = "missing candidate";
      rep.files.push_back(r);
      rep.pass = false;
      continue;
    }
    try {
      const CsvTable a = read_csv(g.string());
      const CsvTable b = read_csv(cand.string());
      if (a.columns != b.columns || a.rows.size() != b.rows.size()) {
        r.note = "shape mismatch";
        rep.files.push_back(r);
        rep.pass = false;
        continue;
      }
      double worst = 0.0;
      for (size_t i = 0; i < a.rows.size(); ++i) {
        if (a.rows[i].size() != b.rows[i].size()) {
          r.note = "row length mismatch";
          worst = std::numeric_limits<double>::infinity();
          break;
        }
        for (size_t j = 0; j < a.rows[i].size(); ++j)
          worst = std::max(worst, std::abs(a.rows[i][j] - b.rows[i][j]));
      }
      r.worst = worst;
      r.ok = worst <= tol && r.note.empty();
      if (!r.ok && r.note.empty()) r.note = "deviation above tolerance";
    } catch (const std::exception& e) {
      r.note = e.what();
    }
    if (!r.ok) rep.pass = false;
    rep.files.push_back(r);
  }
  return rep;
}

}  // namespace cpeps
