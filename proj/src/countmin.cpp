#include "itables/countmin.hpp"

#include <algorithm>
#include <stdexcept>

namespace itables {

namespace {

constexpr uint64_t kPrime = (uint64_t{1} << 61) - 1;  // Mersenne prime

uint64_t mod_p(uint64_t x) { return x % kPrime; }

uint64_t mulmod_p(uint64_t a, uint64_t b) {
  return static_cast<uint64_t>((static_cast<__uint128_t>(a) * b) % kPrime);
}

}  // namespace

CountMinSketch::CountMinSketch(int depth, int width, uint64_t seed)
    : CountMinSketch(width, [&] {
        if (depth < 1) throw std::invalid_argument("bad sketch shape");
        std::vector<uint64_t> seeds(depth);
        for (int r = 0; r < depth; ++r) {
          seeds[r] = derive_seed(seed, static_cast<uint64_t>(r));
        }
        return seeds;
      }()) {}

CountMinSketch::CountMinSketch(int width, std::vector<uint64_t> row_seeds)
    : depth_(static_cast<int>(row_seeds.size())),
      width_(width),
      row_seeds_(std::move(row_seeds)) {
  if (depth_ < 1 || width < 1) throw std::invalid_argument("bad sketch shape");
  cells_.assign(static_cast<size_t>(depth_) * width_, 0.0);
  row_a_.resize(depth_);
  row_b_.resize(depth_);
  for (int r = 0; r < depth_; ++r) {
    Rng rng(row_seeds_[r]);
    row_a_[r] = 1 + rng.uniform_int(kPrime - 1);
    row_b_[r] = rng.uniform_int(kPrime);
  }
}

size_t CountMinSketch::cell_index(int row, uint64_t key) const {
  uint64_t h = mod_p(mulmod_p(row_a_[row], mod_p(key)) + row_b_[row]);
  return static_cast<size_t>(row) * width_ + h % width_;
}

void CountMinSketch::insert(uint64_t key) {
  if (noised_) throw std::logic_error("sketch already released");
  for (int r = 0; r < depth_; ++r) cells_[cell_index(r, key)] += 1.0;
}

double CountMinSketch::query(uint64_t key) const {
  double best = cells_[cell_index(0, key)];
  for (int r = 1; r < depth_; ++r) {
    best = std::min(best, cells_[cell_index(r, key)]);
  }
  return best;
}

void CountMinSketch::add_laplace_noise(double epsilon, Rng& rng) {
  if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
  if (noised_) throw std::logic_error("sketch already released");
  double scale = 1.0 / epsilon;
  for (double& c : cells_) c += rng.laplace(scale);
  epsilons_.push_back(epsilon);
  noised_ = true;
}

CountMinSketch CountMinSketch::merge(const std::vector<const CountMinSketch*>& parts) {
  if (parts.empty()) throw std::invalid_argument("nothing to merge");
  const CountMinSketch& first = *parts.front();
  CountMinSketch out(first.width_, first.row_seeds_);
  for (const CountMinSketch* part : parts) {
    if (part->width_ != out.width_ || part->row_seeds_ != out.row_seeds_) {
      throw std::invalid_argument("incompatible sketches");
    }
    for (size_t i = 0; i < out.cells_.size(); ++i) out.cells_[i] += part->cells_[i];
    out.epsilons_.insert(out.epsilons_.end(), part->epsilons_.begin(),
                         part->epsilons_.end());
    out.noised_ = out.noised_ || part->noised_;
  }
  return out;
}

CountMinSketch CountMinSketch::from_parts(int width, std::vector<uint64_t> row_seeds,
                                          std::vector<double> cells,
                                          std::vector<double> epsilons,
                                          bool noised) {
  CountMinSketch out(width, std::move(row_seeds));
  if (cells.size() != out.cells_.size()) {
    throw std::invalid_argument("cell vector length must be depth*width");
  }
  out.cells_ = std::move(cells);
  out.epsilons_ = std::move(epsilons);
  out.noised_ = noised;
  return out;
}

uint64_t tuple_key(const int64_t* values, size_t count) {
  uint64_t key = 0x9e3779b97f4a7c15ULL;
  for (size_t i = 0; i < count; ++i) {
    key = mix64(key ^ static_cast<uint64_t>(values[i]));
  }
  return key;
}

}  // namespace itables
