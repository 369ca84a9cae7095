#pragma once

// Reproducible random streams.
//
// Engine: std::mt19937_64 (output fully specified by the C++ standard).
// Uniforms: top 53 bits of one engine output scaled by 2⁻⁵³, giving [0, 1).
// Normals: Box–Muller on two uniforms, u₁ mapped to (0, 1] as 1 − u;
// both the cosine and sine outputs are used, cosine first.
// Integers below n: rejection sampling on the raw 64-bit output, then modulo.
// Child seeds: splitmix64(parent ⊕ splitmix64(stream)).
//
// The library's distributions are deliberately not used because their
// output is implementation-defined.

#include <cstdint>
#include <random>
#include <vector>

namespace covnet {

std::uint64_t splitmix64(std::uint64_t x);

/// Deterministic per-stream seed derived from a parent seed.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  /// Fisher–Yates permutation of 0 … n−1.
  std::vector<long> permutation(long n);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace covnet
