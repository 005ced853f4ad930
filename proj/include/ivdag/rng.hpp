#pragma once

#include <cstdint>
#include <vector>

// Seeded, splittable randomness. Every consumer of randomness in this project
// draws from an Rng constructed from a stream key, and stream keys are derived
// from (seed, purpose, coordinates...) by iterating the SplitMix64 finalizer:
//
//   key <- seed
//   for each word w in (purpose, a, b, c):  key <- mix64(key ^ (w + phi))
//
// so streams are independent of evaluation order. Sampling a dataset keys one
// stream per (dataset, regime, node); sweeps key replicates by index. This is
// what makes parallel sweeps byte-identical to sequential ones and lets
// intervention models share noise draws (regimes differ only where the model
// touches the target).
//
// The stream generator is xoshiro256++ seeded from the key via SplitMix64.
// Gaussians come from a cached Box-Muller pair, so normal draws are fully
// specified here (no dependence on libstdc++'s unspecified
// normal_distribution).

namespace ivdag {

inline uint64_t mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(uint64_t stream_key);

  uint64_t next_u64();
  double uniform01();                     // [0, 1), 53-bit resolution
  double uniform(double lo, double hi);   // [lo, hi)
  double normal();                        // standard normal, Box-Muller
  uint64_t bounded(uint64_t n);           // unbiased draw from [0, n)

  // Fisher-Yates, back to front.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(bounded(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  uint64_t s_[4];
  double cached_ = 0.0;
  bool has_cached_ = false;
};

namespace streams {

// Purpose tags. Values are arbitrary but frozen: changing them changes every
// seeded output.
inline constexpr uint64_t kStructure = 0xA1;    // DAG topology + edge weights
inline constexpr uint64_t kSigma = 0xA2;        // exogenous standard deviations
inline constexpr uint64_t kNoise = 0xA3;        // per (dataset, regime, node) noise
inline constexpr uint64_t kRegimeParam = 0xA4;  // per-regime draws (e.g. alpha perturbation c_k)
inline constexpr uint64_t kReplicate = 0xA5;    // sweep replicate sub-seeds
inline constexpr uint64_t kFolds = 0xA6;        // cross-validation fold shuffles

// Dataset tags within one scenario draw.
inline constexpr uint64_t kInterventionalData = 0;
inline constexpr uint64_t kObservationalData = 1;

uint64_t derive(uint64_t seed, uint64_t purpose);
uint64_t derive(uint64_t seed, uint64_t purpose, uint64_t a);
uint64_t derive(uint64_t seed, uint64_t purpose, uint64_t a, uint64_t b);
uint64_t derive(uint64_t seed, uint64_t purpose, uint64_t a, uint64_t b, uint64_t c);

}  // namespace streams

}  // namespace ivdag
