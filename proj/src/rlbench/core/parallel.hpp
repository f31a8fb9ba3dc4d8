#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

namespace rlbench {

// Every data-parallel kernel has two paths: a plain serial loop kept as the
// reference, and an OpenMP loop that must produce bit-identical results.
enum class ExecMode { kSerial, kOpenMp };

// Global worker count for the OpenMP paths (the --jobs flag).
void set_num_threads(int n);
int num_threads();

// Runs fn(i) for i in [0, n). The OpenMP path uses a dynamic schedule; fn
// must only write to per-index state so iteration order cannot matter.
void parallel_for(int n, ExecMode mode, const std::function<void(int)>& fn);

// Sums per-block vectors in a fixed pairwise tree so the result is identical
// no matter how many threads produced the blocks.
Eigen::VectorXd pairwise_sum(std::vector<Eigen::VectorXd> blocks);

// Fixed partition of [0, n) into blocks of at most block_size elements.
// Block boundaries depend only on (n, block_size), never on thread count,
// which keeps blockwise reductions reproducible across --jobs settings.
struct BlockRange {
  int begin = 0;
  int end = 0;
  int size() const { return end - begin; }
};
std::vector<BlockRange> fixed_blocks(int n, int block_size);

}  // namespace rlbench
