#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace itables {

// Row-major n x d point matrix with binary outlier labels (1 = outlier).
// Immutable after loading; duplicate feature rows are removed at load time.
struct Dataset {
  std::string name;
  size_t n = 0;
  size_t d = 0;
  std::vector<double> values;
  std::vector<uint8_t> labels;
  std::string provenance;

  const double* row(size_t i) const { return values.data() + i * d; }
  size_t outlier_count() const;
};

// Parses a comma-separated file. A non-numeric first row is treated as a
// header. label_col < 0 selects the last column. Exact duplicate feature
// rows are dropped, keeping the first occurrence (its label wins).
// Throws std::runtime_error with the offending row number on ragged rows,
// non-numeric cells, or labels other than 0/1.
Dataset load_csv(const std::string& path, int label_col = -1);

// Gaussian inlier cluster plus outliers placed uniformly on a shell at
// radius = separation * (max inlier norm).
Dataset synth_planted(size_t n_inliers, size_t n_outliers, size_t d,
                      double separation, uint64_t seed);

// A subsample-sized point set with two probe points whose weighted-l1 ball
// counts differ by construction: |ball(q1, r)| > |ball(q2, r)|, with in-ball
// distances approximately uniform in [0, r]. Counts are verified against the
// linear-scan oracle before returning.
struct Lemma1Instance {
  Dataset points;
  std::vector<double> q1;
  std::vector<double> q2;
  double r = 0.0;
  int ball1 = 0;
  int ball2 = 0;
};
Lemma1Instance synth_lemma1(int s, double r, uint64_t seed);

}  // namespace itables
