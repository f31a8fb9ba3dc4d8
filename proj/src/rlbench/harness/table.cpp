#include "rlbench/harness/table.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <sstream>

#include "rlbench/harness/metrics.hpp"
#include "rlbench/harness/stats.hpp"

namespace rlbench {

namespace fs = std::filesystem;

ComparisonTable build_table(const std::string& results_dir, double alpha) {
  ComparisonTable table;
  if (!fs::is_directory(results_dir))
    throw std::invalid_argument("not a results directory: " + results_dir);

  for (const auto& task_entry : fs::directory_iterator(results_dir)) {
    if (!task_entry.is_directory()) continue;
    const std::string task = task_entry.path().filename().string();
    bool task_has_data = false;
    for (const auto& algo_entry : fs::directory_iterator(task_entry.path())) {
      if (!algo_entry.is_directory()) continue;
      const std::string algo = algo_entry.path().filename().string();
      TableCell cell;
      std::vector<fs::path> seed_paths;
      for (const auto& seed_entry : fs::directory_iterator(algo_entry.path()))
        if (seed_entry.is_directory() &&
            seed_entry.path().filename().string().rfind("seed", 0) == 0)
          seed_paths.push_back(seed_entry.path());
      std::sort(seed_paths.begin(), seed_paths.end());
      for (const auto& sp : seed_paths) {
        const auto rows = read_metrics((sp / "metrics.csv").string());
        if (rows.empty()) continue;
        try {
          cell.seed_performances.push_back(performance_from_rows(rows));
        } catch (const std::exception&) {
          // seed directory without a single episode: treated as absent
        }
      }
      if (cell.seed_performances.empty()) continue;
      cell.present = true;
      cell.mean = mean(cell.seed_performances);
      cell.std = cell.seed_performances.size() > 1
                     ? std::sqrt(sample_variance(cell.seed_performances))
                     : 0.0;
      table.cells[task][algo] = std::move(cell);
      task_has_data = true;
      if (std::find(table.algorithms.begin(), table.algorithms.end(), algo) ==
          table.algorithms.end())
        table.algorithms.push_back(algo);
    }
    if (task_has_data) table.tasks.push_back(task);
  }
  std::sort(table.tasks.begin(), table.tasks.end());
  std::sort(table.algorithms.begin(), table.algorithms.end());

  // bold = best mean plus everything statistically indistinguishable from it
  for (const auto& task : table.tasks) {
    auto& row = table.cells[task];
    std::string best;
    for (const auto& [algo, cell] : row)
      if (best.empty() || cell.mean > row[best].mean) best = algo;
    if (best.empty()) continue;
    row[best].bold = true;
    for (auto& [algo, cell] : row) {
      if (algo == best) continue;
      if (cell.seed_performances.size() < 2 ||
          row[best].seed_performances.size() < 2)
        continue;  // too few seeds to test; only the best is bolded
      const WelchResult w =
          welch_t_test(cell.seed_performances, row[best].seed_performances);
      cell.bold = w.p >= alpha;
    }
  }
  return table;
}

std::string ComparisonTable::render_text() const {
  std::ostringstream os;
  std::size_t task_width = 4;
  for (const auto& t : tasks) task_width = std::max(task_width, t.size());
  const int cell_width = 22;

  os << std::left << std::setw(static_cast<int>(task_width) + 2) << "task";
  for (const auto& a : algorithms) os << std::setw(cell_width) << a;
  os << '\n';
  for (const auto& task : tasks) {
    os << std::setw(static_cast<int>(task_width) + 2) << task;
    for (const auto& algo : algorithms) {
      const auto it = cells.at(task).find(algo);
      if (it == cells.at(task).end() || !it->second.present) {
        os << std::setw(cell_width) << "N/A";
        continue;
      }
      std::ostringstream cell;
      cell << std::setprecision(6) << it->second.mean << " +- "
           << std::setprecision(3) << it->second.std;
      os << std::setw(cell_width)
         << (it->second.bold ? "*" + cell.str() + "*" : cell.str());
    }
    os << '\n';
  }
  os << "(* best per task and algorithms not significantly different from it,"
        " Welch's t-test p >= 0.05)\n";
  return os.str();
}

std::string ComparisonTable::render_csv() const {
  std::ostringstream os;
  os << "task,algorithm,mean,std,seeds,bold\n";
  for (const auto& task : tasks) {
    for (const auto& algo : algorithms) {
      const auto it = cells.at(task).find(algo);
      if (it == cells.at(task).end() || !it->second.present) {
        os << task << ',' << algo << ",N/A,N/A,0,0\n";
        continue;
      }
      os << task << ',' << algo << ',' << std::setprecision(6)
         << it->second.mean << ',' << it->second.std << ','
         << it->second.seed_performances.size() << ','
         << (it->second.bold ? 1 : 0) << '\n';
    }
  }
  return os.str();
}

}  // namespace rlbench
