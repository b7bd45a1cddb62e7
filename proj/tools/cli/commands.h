#pragma once

#include <optional>
#include <string>
#include <vector>

namespace nlperim::cli {

struct RunOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::string> out_dir;
  std::optional<unsigned long long> seed;
  std::optional<int> threads;
};

// Exit codes: 0 success, 2 validation error, 3 numerical failure.
int run(const RunOptions& o);

// Writes a gnuplot script with one panel per regime of a series.csv.
int plot(const std::string& csv_path, const std::string& out_path);

}  // namespace nlperim::cli
