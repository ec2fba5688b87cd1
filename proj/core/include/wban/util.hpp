#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace wban {

// dB / dBm conversions. dBm values convert with the same formula; the
// milliwatt reference cancels in every ratio we form.
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }
inline double q_func(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Stable stream-seed derivation: same (master, tag) pair always yields the
// same seed, different tags yield decorrelated streams.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag) {
  std::uint64_t s = master ^ (0x517cc1b727220a95ULL * (tag + 1));
  splitmix64(s);
  return splitmix64(s);
}

class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : gen_(seed) {}

  double uniform() { return std::generate_canonical<double, 53>(gen_); }
  double normal() { return normal_(gen_); }
  bool coin() { return (gen_() >> 63) != 0; }
  std::uint64_t bits64() { return gen_(); }

 private:
  std::mt19937_64 gen_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace wban
