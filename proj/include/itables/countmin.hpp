#pragma once

#include <cstdint>
#include <vector>

#include "itables/rng.hpp"

namespace itables {

// CountMin sketch with pairwise-independent row hashes
// ((a_r * key + b_r) mod p) mod width, p = 2^61 - 1. Each row's
// coefficients come from that row's seed; the row seeds are part of the
// shared model, so sketches built from the same seeds share their layout
// and merge by elementwise sum.
class CountMinSketch {
 public:
  static constexpr int kDefaultDepth = 4;
  static constexpr int kDefaultWidth = 1000;

  // Derives one row seed per row from the sketch seed.
  CountMinSketch(int depth, int width, uint64_t seed);
  // Explicit row seeds, e.g. reassembled from the wire.
  CountMinSketch(int width, std::vector<uint64_t> row_seeds);

  int depth() const { return depth_; }
  int width() const { return width_; }
  const std::vector<uint64_t>& row_seeds() const { return row_seeds_; }
  bool noised() const { return noised_; }
  const std::vector<double>& cells() const { return cells_; }
  const std::vector<double>& epsilons() const { return epsilons_; }

  void insert(uint64_t key);
  double query(uint64_t key) const;  // min across rows
  void add_laplace_noise(double epsilon, Rng& rng);

  size_t cell_index(int row, uint64_t key) const;

  static CountMinSketch merge(const std::vector<const CountMinSketch*>& parts);

  static CountMinSketch from_parts(int width, std::vector<uint64_t> row_seeds,
                                   std::vector<double> cells,
                                   std::vector<double> epsilons, bool noised);

 private:
  int depth_;
  int width_;
  std::vector<uint64_t> row_seeds_;
  std::vector<uint64_t> row_a_;
  std::vector<uint64_t> row_b_;
  std::vector<double> cells_;  // depth x width, row-major
  std::vector<double> epsilons_;
  bool noised_ = false;
};

// Folds a tuple of quantized values into a sketch key. Deterministic, so
// participants sharing the same hash spec produce identical keys.
uint64_t tuple_key(const int64_t* values, size_t count);

}  // namespace itables
