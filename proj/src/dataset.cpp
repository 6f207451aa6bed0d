#include "itables/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "itables/evaluation.hpp"
#include "itables/hashing.hpp"
#include "itables/rng.hpp"

namespace itables {

size_t Dataset::outlier_count() const {
  size_t o = 0;
  for (uint8_t v : labels) o += v;
  return o;
}

namespace {

bool parse_double(const std::string& cell, double* out) {
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  auto [ptr, ec] = std::from_chars(begin, end, *out);
  return ec == std::errc() && ptr == end;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    size_t a = cell.find_first_not_of(" \t\r");
    size_t b = cell.find_last_not_of(" \t\r");
    cells.push_back(a == std::string::npos ? std::string() : cell.substr(a, b - a + 1));
  }
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

std::string stem_of(const std::string& path) {
  size_t slash = path.find_last_of("/\\");
  std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
  size_t dot = base.find_last_of('.');
  if (dot != std::string::npos) base = base.substr(0, dot);
  std::transform(base.begin(), base.end(), base.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return base;
}

struct KnownShape {
  size_t n, d, o;
};

// Expected (n, d, o) after dedup for the public benchmark files.
const std::unordered_map<std::string, KnownShape>& known_shapes() {
  static const std::unordered_map<std::string, KnownShape> table{
      {"breastw", {683, 9, 239}},    {"pima", {768, 8, 268}},
      {"cardio", {1822, 21, 175}},   {"mnist", {7603, 100, 700}},
      {"musk", {3062, 166, 97}},     {"pendigits", {6870, 16, 156}},
      {"pen", {6870, 16, 156}},      {"satimage-2", {5801, 36, 69}},
      {"sat", {5801, 36, 69}},       {"thyroid", {3656, 6, 93}},
      {"shuttle", {49097, 9, 3511}}, {"cover", {286048, 54, 2747}},
      {"covertype", {286048, 54, 2747}}, {"kdd99", {48113, 40, 200}},
  };
  return table;
}

void check_known_shape(const Dataset& data) {
  auto it = known_shapes().find(data.name);
  if (it == known_shapes().end()) return;
  const KnownShape& want = it->second;
  size_t o = data.outlier_count();
  if (data.n != want.n || data.d != want.d || o != want.o) {
    std::fprintf(stderr,
                 "warning: dataset '%s' has (n=%zu, d=%zu, o=%zu) after dedup, "
                 "expected (n=%zu, d=%zu, o=%zu)\n",
                 data.name.c_str(), data.n, data.d, o, want.n, want.d, want.o);
  }
}

}  // namespace

Dataset load_csv(const std::string& path, int label_col) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);

  Dataset data;
  data.name = stem_of(path);
  data.provenance = path;

  std::string line;
  size_t row_no = 0;
  size_t columns = 0;
  std::vector<double> cells_buf;
  // dedup on exact feature bytes; first occurrence wins
  std::unordered_map<uint64_t, std::vector<size_t>> seen;
  size_t kept = 0;

  while (std::getline(in, line)) {
    ++row_no;
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<std::string> cells = split_csv_line(line);

    if (columns == 0) {
      // header detection: a first row with any non-numeric cell is skipped
      bool numeric = true;
      double v;
      for (const std::string& c : cells) numeric = numeric && parse_double(c, &v);
      if (!numeric) continue;
      columns = cells.size();
      if (columns < 2) throw std::runtime_error("row " + std::to_string(row_no) + ": need at least one feature and a label");
      size_t lc = label_col < 0 ? columns - 1 : static_cast<size_t>(label_col);
      if (lc >= columns) throw std::runtime_error("label column out of range");
      data.d = columns - 1;
    }

    if (cells.size() != columns) {
      throw std::runtime_error("row " + std::to_string(row_no) + ": expected " +
                               std::to_string(columns) + " columns, got " +
                               std::to_string(cells.size()));
    }

    size_t lc = label_col < 0 ? columns - 1 : static_cast<size_t>(label_col);
    cells_buf.clear();
    double label_value = 0.0;
    for (size_t j = 0; j < columns; ++j) {
      double v;
      if (!parse_double(cells[j], &v)) {
        throw std::runtime_error("row " + std::to_string(row_no) +
                                 ": non-numeric cell '" + cells[j] + "'");
      }
      if (j == lc) {
        label_value = v;
      } else {
        cells_buf.push_back(v);
      }
    }
    if (label_value != 0.0 && label_value != 1.0) {
      throw std::runtime_error("row " + std::to_string(row_no) + ": label must be 0 or 1");
    }

    // hash the candidate row, then confirm against kept rows byte for byte
    uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (double v : cells_buf) {
      uint64_t bits;
      std::memcpy(&bits, &v, sizeof bits);
      h = mix64(h ^ bits);
    }
    bool duplicate = false;
    for (size_t prior : seen[h]) {
      if (std::memcmp(data.values.data() + prior * data.d, cells_buf.data(),
                      data.d * sizeof(double)) == 0) {
        duplicate = true;
        break;
      }
    }
    if (duplicate) continue;
    seen[h].push_back(kept);
    data.values.insert(data.values.end(), cells_buf.begin(), cells_buf.end());
    data.labels.push_back(label_value == 1.0 ? 1 : 0);
    ++kept;
  }

  if (kept == 0) throw std::runtime_error("empty dataset: " + path);
  data.n = kept;
  check_known_shape(data);
  return data;
}

Dataset synth_planted(size_t n_inliers, size_t n_outliers, size_t d,
                      double separation, uint64_t seed) {
  if (separation <= 0.0) throw std::invalid_argument("separation must be positive");
  Dataset data;
  data.name = "synth-planted";
  data.provenance = "synthetic";
  data.d = d;
  data.n = n_inliers + n_outliers;
  data.values.reserve(data.n * d);
  data.labels.reserve(data.n);

  Rng rng(seed);
  double max_norm = 0.0;
  for (size_t i = 0; i < n_inliers; ++i) {
    double norm2 = 0.0;
    for (size_t j = 0; j < d; ++j) {
      double v = rng.normal();
      data.values.push_back(v);
      norm2 += v * v;
    }
    max_norm = std::max(max_norm, std::sqrt(norm2));
    data.labels.push_back(0);
  }
  double radius = separation * std::max(max_norm, 1.0);
  for (size_t i = 0; i < n_outliers; ++i) {
    std::vector<double> dir(d);
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (size_t j = 0; j < d; ++j) {
        dir[j] = rng.normal();
        norm2 += dir[j] * dir[j];
      }
    } while (norm2 == 0.0);
    double scale = radius / std::sqrt(norm2);
    for (size_t j = 0; j < d; ++j) data.values.push_back(dir[j] * scale);
    data.labels.push_back(1);
  }
  return data;
}

Lemma1Instance synth_lemma1(int s, double r, uint64_t seed) {
  if (s < 20) throw std::invalid_argument("need at least 20 points");
  if (r <= 0.0 || r > 0.25) throw std::invalid_argument("radius must be in (0, 0.25]");

  constexpr size_t kDim = 3;
  Lemma1Instance inst;
  inst.r = r;
  inst.q1.assign(kDim, 0.3);
  inst.q2.assign(kDim, 0.7);

  int n1 = std::max(2, s / 5);
  int n2 = std::max(1, s / 30);
  int background = s - n1 - n2 - 2;
  if (background < 0) throw std::invalid_argument("radius/ball sizes leave no background");

  Dataset& pts = inst.points;
  pts.name = "synth-lemma1";
  pts.provenance = "synthetic";
  pts.d = kDim;
  pts.n = static_cast<size_t>(s);
  pts.values.reserve(pts.n * kDim);
  pts.labels.assign(pts.n, 0);

  Rng rng(seed);
  // anchors pin the per-dimension range to exactly [0, 1]
  for (size_t j = 0; j < kDim; ++j) pts.values.push_back(0.0);
  for (size_t j = 0; j < kDim; ++j) pts.values.push_back(1.0);

  auto plant_ball = [&](const std::vector<double>& q, int count) {
    for (int i = 0; i < count; ++i) {
      double t = r * 0.999 * rng.uniform01_open();  // distance uniform in (0, r)
      double e[kDim];
      double esum = 0.0;
      for (size_t j = 0; j < kDim; ++j) {
        e[j] = -std::log(rng.uniform01_open());
        esum += e[j];
      }
      for (size_t j = 0; j < kDim; ++j) {
        double sign = rng.uniform01() < 0.5 ? -1.0 : 1.0;
        pts.values.push_back(q[j] + sign * t * e[j] / esum);
      }
    }
  };
  plant_ball(inst.q1, n1);
  plant_ball(inst.q2, n2);

  auto l1_to = [&](const double* x, const std::vector<double>& q) {
    double acc = 0.0;
    for (size_t j = 0; j < kDim; ++j) acc += std::fabs(x[j] - q[j]);
    return acc;
  };
  for (int i = 0; i < background; ++i) {
    double x[kDim];
    for (;;) {
      for (size_t j = 0; j < kDim; ++j) x[j] = rng.uniform01();
      if (l1_to(x, inst.q1) > 1.5 * r && l1_to(x, inst.q2) > 1.5 * r) break;
    }
    pts.values.insert(pts.values.end(), x, x + kDim);
  }

  FeatureStats stats = compute_feature_stats(pts);
  inst.ball1 = ball_count(pts, inst.q1.data(), r, stats);
  inst.ball2 = ball_count(pts, inst.q2.data(), r, stats);
  if (inst.ball1 != n1 || inst.ball2 != n2) {
    throw std::logic_error("ball construction failed oracle check");
  }
  return inst;
}

}  // namespace itables
