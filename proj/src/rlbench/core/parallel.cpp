#include "rlbench/core/parallel.hpp"

#include <omp.h>

#include <atomic>
#include <stdexcept>

namespace rlbench {

namespace {
std::atomic<int> g_threads{0};  // 0 = hardware default
}

void set_num_threads(int n) { g_threads.store(n > 0 ? n : 0); }

int num_threads() {
  const int n = g_threads.load();
  return n > 0 ? n : omp_get_max_threads();
}

void parallel_for(int n, ExecMode mode, const std::function<void(int)>& fn) {
  if (mode == ExecMode::kSerial) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
#pragma omp parallel for schedule(dynamic, 1) num_threads(num_threads())
  for (int i = 0; i < n; ++i) fn(i);
}

Eigen::VectorXd pairwise_sum(std::vector<Eigen::VectorXd> blocks) {
  if (blocks.empty()) throw std::invalid_argument("pairwise_sum: no blocks");
  std::size_t n = blocks.size();
  while (n > 1) {
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i + half < n; ++i) blocks[i] += blocks[i + half];
    n = half;
  }
  return blocks[0];
}

std::vector<BlockRange> fixed_blocks(int n, int block_size) {
  std::vector<BlockRange> out;
  if (n <= 0) return out;
  if (block_size < 1) block_size = 1;
  for (int b = 0; b < n; b += block_size)
    out.push_back({b, b + block_size < n ? b + block_size : n});
  return out;
}

}  // namespace rlbench
