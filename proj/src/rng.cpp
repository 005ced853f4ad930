#include "ivdag/rng.hpp"

#include <cmath>

namespace ivdag {

namespace {

inline uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

Rng::Rng(uint64_t stream_key) {
  // Canonical xoshiro seeding: four SplitMix64 steps from the key.
  uint64_t z = stream_key;
  for (auto& s : s_) {
    z += 0x9e3779b97f4a7c15ULL;
    uint64_t t = z;
    t = (t ^ (t >> 30)) * 0xbf58476d1ce4e5b9ULL;
    t = (t ^ (t >> 27)) * 0x94d049bb133111ebULL;
    s = t ^ (t >> 31);
  }
}

uint64_t Rng::next_u64() {
  // xoshiro256++
  const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform01();
}

double Rng::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  // u1 in (0, 1] keeps the log finite.
  double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  double u2 = uniform01();
  double r = std::sqrt(-2.0 * std::log(u1));
  cached_ = r * std::sin(kTwoPi * u2);
  has_cached_ = true;
  return r * std::cos(kTwoPi * u2);
}

uint64_t Rng::bounded(uint64_t n) {
  // Rejection sampling on the top of the range to stay unbiased.
  const uint64_t threshold = (0 - n) % n;
  for (;;) {
    uint64_t r = next_u64();
    if (r >= threshold) return r % n;
  }
}

namespace streams {

namespace {
inline uint64_t absorb(uint64_t key, uint64_t word) { return mix64(key ^ (word + 0x9e3779b97f4a7c15ULL)); }
}  // namespace

uint64_t derive(uint64_t seed, uint64_t purpose) { return absorb(seed, purpose); }

uint64_t derive(uint64_t seed, uint64_t purpose, uint64_t a) {
  return absorb(absorb(seed, purpose), a);
}

uint64_t derive(uint64_t seed, uint64_t purpose, uint64_t a, uint64_t b) {
  return absorb(absorb(absorb(seed, purpose), a), b);
}

uint64_t derive(uint64_t seed, uint64_t purpose, uint64_t a, uint64_t b, uint64_t c) {
  return absorb(absorb(absorb(absorb(seed, purpose), a), b), c);
}

}  // namespace streams

}  // namespace ivdag
