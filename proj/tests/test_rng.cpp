#include <cmath>
#include <cstdint>
#include <set>

#include "doctest.h"
#include "uwofdm/rng.hpp"

using namespace uwofdm;

TEST_SUITE("rng") {

TEST_CASE("same seed reproduces, different seeds and streams do not") {
  Rng a(42), b(42), c(43);
  for (int i = 0; i < 64; ++i) CHECK(a.next_u64() == b.next_u64());
  int diff = 0;
  Rng a2(42);
  for (int i = 0; i < 64; ++i) diff += (a2.next_u64() != c.next_u64());
  CHECK(diff > 60);

  Rng s0 = Rng::stream(7, 0);
  Rng s1 = Rng::stream(7, 1);
  Rng s0b = Rng::stream(7, 0);
  int same01 = 0;
  for (int i = 0; i < 64; ++i) {
    std::uint64_t x = s0.next_u64();
    CHECK(x == s0b.next_u64());
    same01 += (x == s1.next_u64());
  }
  CHECK(same01 == 0);
}

TEST_CASE("uniform stays in [0,1) with the right mean and variance") {
  Rng rng(1);
  const int n = 100000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
    sum2 += u * u;
  }
  double mean = sum / n;
  double var = sum2 / n - mean * mean;
  CHECK(std::abs(mean - 0.5) < 0.005);        // ~5.5 sigma
  CHECK(std::abs(var - 1.0 / 12.0) < 0.004);
}

TEST_CASE("gaussian moments") {
  Rng rng(2);
  const int n = 200000;
  double sum = 0.0, sum2 = 0.0, sum4 = 0.0;
  for (int i = 0; i < n; ++i) {
    double g = rng.gaussian();
    sum += g;
    sum2 += g * g;
    sum4 += g * g * g * g;
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(std::abs(sum2 / n - 1.0) < 0.02);
  CHECK(std::abs(sum4 / n - 3.0) < 0.15);  // normal kurtosis
}

TEST_CASE("complex gaussian is circular with unit variance") {
  Rng rng(3);
  const int n = 100000;
  double pow = 0.0, re_var = 0.0, im_var = 0.0;
  cxd mean(0, 0), pseudo(0, 0);
  for (int i = 0; i < n; ++i) {
    cxd z = rng.cgaussian();
    pow += std::norm(z);
    re_var += z.real() * z.real();
    im_var += z.imag() * z.imag();
    mean += z;
    pseudo += z * z;  // vanishes iff circularly symmetric
  }
  CHECK(std::abs(pow / n - 1.0) < 0.015);
  CHECK(std::abs(re_var / n - 0.5) < 0.01);
  CHECK(std::abs(im_var / n - 0.5) < 0.01);
  CHECK(std::abs(mean / double(n)) < 0.01);
  CHECK(std::abs(pseudo / double(n)) < 0.01);
}

TEST_CASE("cgaussian_vec matches scalar draws") {
  Rng a(9), b(9);
  cxvec v = a.cgaussian_vec(10);
  for (int i = 0; i < 10; ++i) CHECK(std::abs(v(i) - b.cgaussian()) == 0.0);
}

TEST_CASE("qpsk symbols sit on the unit constellation") {
  Rng rng(4);
  cxvec s = rng.qpsk(4000);
  const double h = 1.0 / std::sqrt(2.0);
  std::set<std::pair<int, int>> seen;
  for (int i = 0; i < s.size(); ++i) {
    CHECK(std::abs(std::abs(s(i)) - 1.0) < 1e-15);
    CHECK(std::abs(std::abs(s(i).real()) - h) < 1e-15);
    CHECK(std::abs(std::abs(s(i).imag()) - h) < 1e-15);
    seen.insert({s(i).real() > 0, s(i).imag() > 0});
  }
  CHECK(seen.size() == 4);  // all four points occur
}

}  // TEST_SUITE
