#include "uwofdm/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace uwofdm {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed) : eng_(seed) {}

Rng Rng::stream(std::uint64_t seed, std::uint64_t stream_id) {
  // two mixing rounds so adjacent (seed, id) pairs land far apart
  const std::uint64_t mixed = splitmix64(splitmix64(seed) ^ splitmix64(stream_id));
  return Rng(mixed);
}

std::uint64_t Rng::next_u64() { return eng_(); }

double Rng::uniform() {
  return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

cxd Rng::cgaussian() {
  const double scale = std::numbers::sqrt2 / 2.0;
  const double re = gaussian();
  const double im = gaussian();
  return cxd(re * scale, im * scale);
}

cxvec Rng::cgaussian_vec(int n) {
  if (n < 0) throw std::invalid_argument("cgaussian_vec: negative length");
  cxvec v(n);
  for (int i = 0; i < n; ++i) v(i) = cgaussian();
  return v;
}

cxvec Rng::qpsk(int n) {
  if (n < 0) throw std::invalid_argument("qpsk: negative length");
  const double a = std::numbers::sqrt2 / 2.0;
  cxvec v(n);
  for (int i = 0; i < n; ++i) {
    const std::uint64_t bits = eng_();
    v(i) = cxd((bits & 1) ? a : -a, (bits & 2) ? a : -a);
  }
  return v;
}

}  // namespace uwofdm
