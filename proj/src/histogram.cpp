#include "itables/histogram.hpp"

#include <stdexcept>

#include "itables/hashing.hpp"

namespace itables {

Histogram::Histogram(int l) : l_(l) {
  if (l < 1 || l > kMaxHashCount) throw std::invalid_argument("hash count out of range");
  counts_.assign(size_t{1} << l, 0.0);
}

void Histogram::increment(uint32_t code) {
  if (noised_) throw std::logic_error("histogram already released");
  if (code >= counts_.size()) throw std::out_of_range("bucket code out of range");
  counts_[code] += 1.0;
}

void Histogram::increment_codes(const uint32_t* codes, size_t n) {
  if (noised_) throw std::logic_error("histogram already released");
  for (size_t i = 0; i < n; ++i) {
    if (codes[i] >= counts_.size()) throw std::out_of_range("bucket code out of range");
    counts_[codes[i]] += 1.0;
  }
}

double Histogram::bucket(uint32_t code) const {
  if (code >= counts_.size()) throw std::out_of_range("bucket code out of range");
  return counts_[code];
}

double Histogram::sum() const {
  double total = 0.0;
  for (double c : counts_) total += c;
  return total;
}

void Histogram::add_laplace_noise(double epsilon, Rng& rng) {
  if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
  if (noised_) throw std::logic_error("histogram already released");
  double scale = 1.0 / epsilon;
  for (double& c : counts_) c += rng.laplace(scale);
  epsilons_.push_back(epsilon);
  noised_ = true;
}

Histogram Histogram::merge(const std::vector<const Histogram*>& parts) {
  if (parts.empty()) throw std::invalid_argument("nothing to merge");
  Histogram out(parts.front()->l_);
  out.sources_ = 0;
  for (const Histogram* part : parts) {
    if (part->l_ != out.l_) throw std::invalid_argument("incompatible histograms");
    for (size_t i = 0; i < out.counts_.size(); ++i) out.counts_[i] += part->counts_[i];
    out.epsilons_.insert(out.epsilons_.end(), part->epsilons_.begin(),
                         part->epsilons_.end());
    out.sources_ += part->sources_;
    out.noised_ = out.noised_ || part->noised_;
  }
  return out;
}

Histogram Histogram::from_parts(int l, std::vector<double> counts,
                                std::vector<double> epsilons, int sources,
                                bool noised) {
  Histogram out(l);
  if (counts.size() != out.counts_.size()) {
    throw std::invalid_argument("count vector length must be 2^l");
  }
  out.counts_ = std::move(counts);
  out.epsilons_ = std::move(epsilons);
  out.sources_ = sources;
  out.noised_ = noised;
  return out;
}

}  // namespace itables
