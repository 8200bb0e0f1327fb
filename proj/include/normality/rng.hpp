#pragma once

// Counter-based randomness: every sample gets its own stream keyed by
// (seed, sample index), so results do not depend on how samples are split
// across workers.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "matrix.hpp"

namespace normality {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

class SampleRng {
 public:
  SampleRng(std::uint64_t seed, std::uint64_t index, std::uint64_t stream = 0) noexcept
      : state_(splitmix64(splitmix64(seed ^ 0xA0761D6478BD642FULL) ^ index) ^
               splitmix64(stream + 0xE7037ED1A0B428DBULL)) {}

  std::uint64_t next() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    return splitmix64(state_);
  }

  // Uniform in [0, bound), bound >= 1 (Lemire's multiply-shift, with rejection).
  std::uint64_t below(std::uint64_t bound) noexcept {
    for (;;) {
      const std::uint64_t x = next();
      const unsigned __int128 m = static_cast<unsigned __int128>(x) * bound;
      const auto low = static_cast<std::uint64_t>(m);
      if (low >= bound || low >= (-bound) % bound) return static_cast<std::uint64_t>(m >> 64);
    }
  }

  // Uniform integer in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi) noexcept {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  int sign() noexcept { return (next() >> 63) != 0U ? -1 : 1; }

  template <typename T>
  void shuffle(std::vector<T>& v) noexcept {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::uint64_t state_;
};

inline SignMatrix random_sign_matrix(std::size_t n, SampleRng& rng) {
  std::vector<std::int8_t> e(n * n);
  std::uint64_t word = 0;
  for (std::size_t b = 0; b < e.size(); ++b) {
    if (b % 64 == 0) word = rng.next();
    e[b] = ((word >> (b % 64)) & 1U) != 0U ? -1 : 1;
  }
  return SignMatrix(n, std::move(e));
}

inline IntMatrix random_pm1_matrix(std::size_t rows, std::size_t cols, SampleRng& rng) {
  IntMatrix a(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) a(r, c) = rng.sign();
  return a;
}

inline Permutation random_permutation(std::size_t n, SampleRng& rng) {
  std::vector<std::size_t> img(n);
  for (std::size_t i = 0; i < n; ++i) img[i] = i;
  rng.shuffle(img);
  return Permutation::from_zero_based(std::move(img));
}

}  // namespace normality
