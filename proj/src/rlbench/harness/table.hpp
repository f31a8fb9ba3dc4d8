#pragma once

#include <map>
#include <string>
#include <vector>

namespace rlbench {

// One (task, algorithm) cell: performance per seed, aggregated for display.
struct TableCell {
  std::vector<double> seed_performances;
  double mean = 0.0;
  double std = 0.0;  // across seeds (n-1 divisor)
  bool bold = false;  // best, or not significantly different from the best
  bool present = false;
};

struct ComparisonTable {
  std::vector<std::string> tasks;
  std::vector<std::string> algorithms;
  std::map<std::string, std::map<std::string, TableCell>> cells;  // [task][algo]

  std::string render_text() const;
  std::string render_csv() const;
};

// Reads per-seed metrics under <results_dir>/<task>/<algo>/seed*/metrics.csv,
// computes per-seed performances, and bolds the best algorithm per task along
// with every algorithm whose Welch p-value against it is >= alpha.
ComparisonTable build_table(const std::string& results_dir, double alpha = 0.05);

}  // namespace rlbench
