#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace wlb {

// SplitMix64 expander: derives independent substream seeds from one master
// seed so that adding a consumer never shifts the draws of existing ones.
class SeedSequence {
 public:
  explicit SeedSequence(std::uint64_t master) : state_(master) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

// Deterministic random stream. The engine (mt19937_64) is bit-exact per the
// C++ standard; the distribution transforms are written out by hand because
// std::uniform_real_distribution / std::normal_distribution are
// implementation-defined and would break run reproducibility across stdlibs.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  // Index in [0, n). Modulo bias is < n / 2^64, irrelevant at our scales.
  std::size_t below(std::size_t n) {
    return static_cast<std::size_t>(engine_() % static_cast<std::uint64_t>(n));
  }

  // Standard normal via Marsaglia's polar method (log/sqrt only; avoids the
  // trig functions whose last-bit behaviour varies more between libms).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    have_spare_ = true;
    return u * m;
  }

  // In-place Fisher-Yates; spelled out because std::shuffle's draw pattern is
  // implementation-defined.
  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace wlb
