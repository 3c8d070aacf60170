#pragma once

#include <string>
#include <vector>

#include "cpeps/types.hpp"

namespace cpeps {

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> comments;  // header comment lines (without '#')
};

// Artifacts are written atomically (temp file + rename) and start with
// comment lines carrying schema version, config hash and seed.
void write_csv_atomic(const std::string& path, const CsvTable& table,
                      const std::string& config_hash, unsigned seed);

CsvTable read_csv(const std::string& path);

struct RegressFileResult {
  std::string file;
  bool ok = false;
  double worst = 0.0;
  std::string note;
};

struct RegressReport {
  std::vector<RegressFileResult> files;
  bool pass = true;
};

// Numeric comparison of every golden CSV against its candidate; worst
// per-file deviation is reported.  Missing candidates fail with a listing.
RegressReport regress(const std::string& golden_dir, const std::string& candidate_dir,
                      double tol);

}  // namespace cpeps
