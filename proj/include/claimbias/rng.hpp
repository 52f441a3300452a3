#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace claimbias {

// Seeded generator with explicit draw helpers. std::uniform_int_distribution
// and std::shuffle are implementation-defined, so outputs built on them would
// not be reproducible across standard libraries; these helpers are.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t next_u64() { return gen_(); }

  // Draw from [0, n). n == 0 yields 0.
  uint64_t below(uint64_t n) {
    if (n == 0) return 0;
    return gen_() % n;
  }

  // Inclusive integer range.
  int range_int(int lo, int hi) {
    if (hi <= lo) return lo;
    return lo + static_cast<int>(below(static_cast<uint64_t>(hi - lo) + 1));
  }

  // [0, 1) with 53 bits of precision.
  double unit_real() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return unit_real() < p; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace claimbias
