#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace edgesched {

// SplitMix64 finalizer; used to derive independent seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Named sub-streams of one scenario seed. Streams are independent of the
// policy so that every policy sees the same hardware and workload.
enum class Stream : std::uint64_t {
  Hardware = 1,
  Arrivals = 2,
  Workload = 3,
  ServiceNoise = 4,
  Augment = 5,
  Lora = 6,
};

constexpr std::uint64_t stream_seed(std::uint64_t seed, Stream s) {
  return mix64(mix64(seed) ^ (static_cast<std::uint64_t>(s) * 0xd1b54a32d192ed03ULL));
}

// Seeded generator with distribution code written out explicitly: the
// standard library's distributions are implementation-defined, engine
// output is not.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t seed, Stream s) : engine_(stream_seed(seed, s)) {}

  std::uint64_t next_u64() { return engine_(); }

  // [0,1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  // Knuth's product method; fine for the small means used here.
  unsigned poisson(double mean) {
    const double limit = std::exp(-mean);
    unsigned k = 0;
    double p = uniform();
    while (p > limit) {
      ++k;
      p *= uniform();
    }
    return k;
  }

  std::size_t below(std::size_t n) { return static_cast<std::size_t>(uniform() * n); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0;
  bool has_spare_ = false;
};

}  // namespace edgesched
