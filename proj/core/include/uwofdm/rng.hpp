// Deterministic random number generation.  Every stochastic routine in the
// library draws from an explicitly seeded Rng so runs are reproducible and
// independent realizations can use decorrelated per-index streams.
#pragma once

#include <cstdint>
#include <random>

#include "uwofdm/numerics.hpp"

namespace uwofdm {

class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  // Decorrelated substream: mixes (seed, stream_id) into a fresh seed, so
  // stream(s, 0), stream(s, 1), ... are independent for fixed s.
  static Rng stream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform();

  // Standard normal via Box-Muller; the second value of each pair is cached.
  double gaussian();

  // Circularly symmetric complex normal, unit variance overall
  // (real and imaginary parts each N(0, 1/2)).
  cxd cgaussian();
  cxvec cgaussian_vec(int n);

  // Unit-energy QPSK symbols, values (+-1 +-j)/sqrt(2).
  cxvec qpsk(int n);

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace uwofdm
