#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace biflab {

/// Unbiased integer in [0, m) from a 64-bit generator (Lemire's method).
/// Used instead of std::uniform_int_distribution so that streams are
/// bit-reproducible across standard library implementations.
template <typename Gen>
inline std::uint32_t uniform_index(Gen& gen, std::uint32_t m) {
  std::uint64_t x = gen();
  __uint128_t prod = static_cast<__uint128_t>(x) * m;
  std::uint64_t lo = static_cast<std::uint64_t>(prod);
  if (lo < m) {
    std::uint64_t threshold = (-static_cast<std::uint64_t>(m)) % m;
    while (lo < threshold) {
      x = gen();
      prod = static_cast<__uint128_t>(x) * m;
      lo = static_cast<std::uint64_t>(prod);
    }
  }
  return static_cast<std::uint32_t>(prod >> 64);
}

/// Uniform double in [0,1) with 53 bits, reproducible.
template <typename Gen>
inline double uniform_unit(Gen& gen) {
  return (gen() >> 11) * 0x1.0p-53;
}

/// Shared stream of preimage-choice digits: the same sequence is reused
/// at every parameter so that estimates vary smoothly in the parameter
/// (common random numbers).
struct DigitStream {
  std::vector<double> u;  // each in [0,1)

  static DigitStream make(std::uint64_t seed, std::size_t count) {
    std::mt19937_64 gen(seed);
    DigitStream s;
    s.u.resize(count);
    for (std::size_t i = 0; i < count; ++i) s.u[i] = uniform_unit(gen);
    return s;
  }
};

}  // namespace biflab
