#pragma once

#include <cstdint>
#include <vector>

#include "itables/rng.hpp"

namespace itables {

// Bucket counts over composite hash codes. Counts stay integral until
// Laplace noise is added; a noised histogram is frozen and can only be read
// or merged. Merging sums counts elementwise and concatenates the
// per-source privacy budgets.
class Histogram {
 public:
  explicit Histogram(int l);

  int l() const { return l_; }
  size_t size() const { return counts_.size(); }
  bool noised() const { return noised_; }
  int sources() const { return sources_; }
  const std::vector<double>& counts() const { return counts_; }
  const std::vector<double>& epsilons() const { return epsilons_; }

  void increment(uint32_t code);
  void increment_codes(const uint32_t* codes, size_t n);
  double bucket(uint32_t code) const;
  double sum() const;

  // Adds an independent Laplace(0, 1/epsilon) draw to every cell and
  // freezes the histogram.
  void add_laplace_noise(double epsilon, Rng& rng);

  static Histogram merge(const std::vector<const Histogram*>& parts);

  // Reassembly from the wire format.
  static Histogram from_parts(int l, std::vector<double> counts,
                              std::vector<double> epsilons, int sources,
                              bool noised);

 private:
  int l_;
  std::vector<double> counts_;
  std::vector<double> epsilons_;
  int sources_ = 1;
  bool noised_ = false;
};

}  // namespace itables
