#include "pcd/parallel.hpp"

namespace pcd {

double deterministic_sum(std::int64_t n,
                         const std::function<double(std::int64_t, std::int64_t)>& chunk_sum,
                         ThreadPool* pool) {
  if (n <= 0) return 0.0;
  if (n <= kSumChunk || !pool || pool->workers() == 1) {
    // Same chunk boundaries as the parallel path, accumulated in order.
    double total = 0.0;
    for (std::int64_t b = 0; b < n; b += kSumChunk) {
      total += chunk_sum(b, std::min(n, b + kSumChunk));
    }
    return total;
  }
  const std::int64_t chunks = (n + kSumChunk - 1) / kSumChunk;
  std::vector<double> partial(static_cast<std::size_t>(chunks));
  pool->parallel_for(chunks, [&](std::int64_t cb, std::int64_t ce) {
    for (std::int64_t c = cb; c < ce; ++c) {
      const std::int64_t b = c * kSumChunk;
      partial[static_cast<std::size_t>(c)] = chunk_sum(b, std::min(n, b + kSumChunk));
    }
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace pcd
