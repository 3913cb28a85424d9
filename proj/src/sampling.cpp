#include <algorithm>
#include <numeric>

#include "pcd/errors.hpp"
#include "pcd/solver.hpp"

namespace pcd {

namespace {

void check_subset_args(int d, int P, Sampling sampling) {
  if (d < 1) throw ValidationError("d must be at least 1");
  if (P < 1 || P > d) throw ValidationError("P must lie in [1, d]");
  if (sampling == Sampling::BlockPartition && d % P != 0) {
    throw ValidationError("block partition sampling requires P to divide d");
  }
}

}  // namespace

SubsetSampler::SubsetSampler(int d, int P, Sampling sampling, std::uint64_t seed)
    : d_(d), P_(P), sampling_(sampling), rng_(seed, kStreamSubsets) {
  check_subset_args(d, P, sampling);
  if (sampling == Sampling::UniformSubset) {
    perm_.resize(static_cast<std::size_t>(d));
    std::iota(perm_.begin(), perm_.end(), 0);
  }
  subset_.resize(static_cast<std::size_t>(P));
}

std::span<const int> SubsetSampler::next() {
  if (sampling_ == Sampling::BlockPartition) {
    // One independent uniform pick inside each of the P contiguous blocks.
    const int block = d_ / P_;
    for (int b = 0; b < P_; ++b) {
      subset_[static_cast<std::size_t>(b)] =
          b * block + static_cast<int>(rng_.index(static_cast<std::uint64_t>(block)));
    }
    return subset_;  // ascending by construction
  }
  // Partial Fisher-Yates.  The array stays a permutation between calls and
  // the draw is uniform from any starting arrangement, so no re-init.
  for (int k = 0; k < P_; ++k) {
    const int r =
        k + static_cast<int>(rng_.index(static_cast<std::uint64_t>(d_ - k)));
    std::swap(perm_[static_cast<std::size_t>(k)], perm_[static_cast<std::size_t>(r)]);
    subset_[static_cast<std::size_t>(k)] = perm_[static_cast<std::size_t>(k)];
  }
  std::sort(subset_.begin(), subset_.end());
  return subset_;
}

std::vector<int> sample_subset(int d, int P, Sampling sampling, Rng& rng) {
  check_subset_args(d, P, sampling);
  std::vector<int> out(static_cast<std::size_t>(P));
  if (sampling == Sampling::BlockPartition) {
    const int block = d / P;
    for (int b = 0; b < P; ++b) {
      out[static_cast<std::size_t>(b)] =
          b * block + static_cast<int>(rng.index(static_cast<std::uint64_t>(block)));
    }
    return out;
  }
  std::vector<int> perm(static_cast<std::size_t>(d));
  std::iota(perm.begin(), perm.end(), 0);
  for (int k = 0; k < P; ++k) {
    const int r = k + static_cast<int>(rng.index(static_cast<std::uint64_t>(d - k)));
    std::swap(perm[static_cast<std::size_t>(k)], perm[static_cast<std::size_t>(r)]);
    out[static_cast<std::size_t>(k)] = perm[static_cast<std::size_t>(k)];
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace pcd
