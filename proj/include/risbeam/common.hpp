// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>

namespace risbeam {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / std::numbers::pi; }

// Power in watts to dBm. Zero power is floored so the value stays finite and
// round-trips through text output.
inline double watts_to_dbm(double p_w) {
  return 10.0 * std::log10(std::max(p_w, 1e-300) / 1e-3);
}

inline double db_ratio(double num_w, double den_w) {
  return 10.0 * std::log10(std::max(num_w, 1e-300) / std::max(den_w, 1e-300));
}

// Phase reduced mod 2π into [0, 2π).
inline double canonical_phase(double omega) {
  double x = std::fmod(omega, kTwoPi);
  if (x < 0.0) x += kTwoPi;
  if (x >= kTwoPi) x = 0.0;
  return x;
}

// Deterministic uniform draws on top of mt19937_64. std::ranlib distributions
// are implementation-defined, so the mapping is fixed here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform01() {  // [0, 1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  double uniform_phase() { return kTwoPi * uniform01(); }
  std::uint64_t next_u64() { return engine_(); }
  // Fisher-Yates index permutation.
  template <typename Vec>
  void shuffle(Vec& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(engine_() % i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// Derives a stream-specific seed so independent trials decorrelate (splitmix64).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// FNV-1a 64-bit, used to fingerprint scenario files in sidecars.
inline std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace risbeam
