#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rlbench {

// One row per (seed, iteration) in the metrics CSV. Header, column order,
// and formatting are part of the file contract:
//   seed,iteration,episodes,mean_return,std_return,min_return,max_return,mean_kl,steps,wall_ms
// Return statistics print with six significant digits; mean_kl is nan for
// algorithms without a KL notion.
struct MetricsRow {
  std::uint64_t seed = 0;
  int iteration = 0;
  int episodes = 0;
  double mean_return = 0.0;
  double std_return = 0.0;
  double min_return = 0.0;
  double max_return = 0.0;
  double mean_kl = 0.0;
  long steps = 0;
  long wall_ms = 0;
};

extern const char* kMetricsHeader;

std::string format_metrics_row(const MetricsRow& row);

// builds the statistics columns from one iteration's episode returns
MetricsRow make_metrics_row(std::uint64_t seed, int iteration,
                            const std::vector<double>& episode_returns,
                            double mean_kl, long steps, long wall_ms);

// Reads a metrics CSV, tolerating a torn final line (crash mid-append);
// throws on a wrong header. Missing file reads as empty.
std::vector<MetricsRow> read_metrics(const std::string& path);

// read_metrics plus cleanup: when the file carries torn trailing garbage
// from an interrupted append, rewrites it to exactly the valid rows so that
// later appends land on a well-formed file
std::vector<MetricsRow> repair_metrics(const std::string& path);

// appends rows with the header written first when the file is new/empty
void append_metrics(const std::string& path, const std::vector<MetricsRow>& rows);

// pooled mean undiscounted return over all episodes in the rows
double performance_from_rows(const std::vector<MetricsRow>& rows);

}  // namespace rlbench
