#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "uwofdm/design.hpp"
#include "uwofdm/genmat.hpp"

using namespace uwofdm;

namespace {

// Cost recomputed through a different route: scale the generator, take
// the eigenvalues of its gram, and sum the per-mode error variances.
double cost_by_eigenvalues(const cxmat& a_d, const SystemConfig& cfg,
                           const CarrierMaps& maps) {
  cxmat g = scale_G_d(build_G_d(a_d, maps, cfg), cfg);
  Eigen::SelfAdjointEigenSolver<cxmat> es(g.adjoint() * g);
  const double nu = cfg.sigma_d2 / cfg.snr_design;  // N * sigma_n^2
  double j = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    j += nu / (es.eigenvalues()(i) + nu / cfg.sigma_d2);
  return j;
}

}  // namespace

TEST_SUITE("design") {

TEST_CASE("cost matches an independent eigenvalue evaluation") {
  const auto& cfg = testutil::uw_cfg();
  const auto& maps = testutil::uw_maps();
  for (const cxmat& a : {permutation_init(maps, cfg),
                         random_init(48, 21, false),
                         random_init(48, 22, true)}) {
    double j = cost_Jd(a, maps, cfg);
    CHECK(j == doctest::Approx(cost_by_eigenvalues(a, cfg, maps)).epsilon(1e-9));
  }
}

TEST_CASE("cost is bounded below by the equal-eigenvalue optimum") {
  const auto& cfg = testutil::uw_cfg();
  const auto& maps = testutil::uw_maps();
  // trace(c2 * gram) is pinned at alpha*n_d, so by convexity the cost
  // cannot go below n_d * nu / (alpha + nu), here exactly 2.
  const double nu = cfg.sigma_d2 / cfg.snr_design;
  const double floor_cost = cfg.n_d * nu / (cfg.alpha() + nu);
  CHECK(floor_cost == doctest::Approx(2.0));
  for (std::uint64_t s : {31u, 32u, 33u, 34u}) {
    CHECK(cost_Jd(random_init(48, s, true), maps, cfg) > floor_cost - 1e-9);
  }
  CHECK(cost_Jd(permutation_init(maps, cfg), maps, cfg) ==
        doctest::Approx(2.7118).epsilon(2e-3));
}

TEST_CASE("cost rejects infeasible starts") {
  const auto& cfg = testutil::uw_cfg();
  const auto& maps = testutil::uw_maps();
  cxmat a = cxmat::Identity(48, 48);
  a.col(47).setZero();  // kills a tail-system column
  CHECK_THROWS_AS(cost_Jd(a, maps, cfg), std::runtime_error);
  CHECK_THROWS_AS(cost_Jd(cxmat::Identity(40, 40), maps, cfg),
                  std::invalid_argument);
}

TEST_CASE("gradient matches central differences of the cost") {
  const auto& cfg = testutil::uw_cfg();
  const auto& maps = testutil::uw_maps();
  std::mt19937 pick(7);
  std::uniform_int_distribution<int> idx(0, 47);
  for (bool complex_params : {false, true}) {
    // Stay off the permutation point itself: entries there are exactly
    // zero and the relative finite-difference step would vanish.
    cxmat a = permutation_init(maps, cfg) +
              0.05 * random_init(48, complex_params ? 51u : 50u, complex_params);
    const cxmat grad = cost_gradient(a, maps, cfg, complex_params);
    const double scale = std::max(grad.cwiseAbs().maxCoeff(), 1e-12);
    if (!complex_params) CHECK(grad.imag().cwiseAbs().maxCoeff() == 0.0);
    for (int probe = 0; probe < 40; ++probe) {
      const int i = idx(pick);
      const int j = idx(pick);
      const double h = 1e-5;
      auto shifted = [&](cxd delta) {
        cxmat b = a;
        b(i, j) += delta;
        return cost_Jd(b, maps, cfg);
      };
      const double d_re = (shifted(h) - shifted(-h)) / (2.0 * h);
      CHECK(std::abs(grad(i, j).real() - d_re) < 1e-6 * scale);
      if (complex_params) {
        const double d_im =
            (shifted(cxd(0.0, h)) - shifted(cxd(0.0, -h))) / (2.0 * h);
        CHECK(std::abs(grad(i, j).imag() - d_im) < 1e-6 * scale);
      }
    }
  }
}

TEST_CASE("permutation start is a permutation") {
  const auto& cfg = testutil::uw_cfg();
  const auto& maps = testutil::uw_maps();
  cxmat a = permutation_init(maps, cfg);
  REQUIRE(a.rows() == 48);
  REQUIRE(a.cols() == 48);
  for (int i = 0; i < 48; ++i) {
    CHECK(a.row(i).cwiseAbs().sum() == doctest::Approx(1.0));
    CHECK(a.col(i).cwiseAbs().sum() == doctest::Approx(1.0));
    for (int j = 0; j < 48; ++j) {
      double v = std::abs(a(i, j));
      CHECK((v == 0.0 || v == 1.0));
      CHECK(a(i, j).imag() == 0.0);
    }
  }
}

TEST_CASE("random start is reproducible and respects the field flag") {
  cxmat a = random_init(48, 77, false);
  cxmat b = random_init(48, 77, false);
  CHECK(testutil::max_abs_diff(a, b) == 0.0);
  CHECK(a.imag().cwiseAbs().maxCoeff() == 0.0);
  cxmat c = random_init(48, 77, true);
  CHECK(c.imag().cwiseAbs().maxCoeff() > 0.0);
  CHECK(testutil::max_abs_diff(a, random_init(48, 78, false)) > 0.0);
  // Crude moment check on 2304 samples.
  CHECK(std::abs(a.real().mean()) < 0.1);
  CHECK(std::abs(a.real().array().square().mean() - 1.0) < 0.15);
}

TEST_CASE("descent decreases the cost monotonically") {
  const auto& cfg = testutil::uw_cfg();
  const auto& maps = testutil::uw_maps();
  DescentOptions opts;
  opts.max_iters = 25;
  cxmat a0 = permutation_init(maps, cfg);
  DescentResult res = optimize_Ad(a0, maps, cfg, opts);
  REQUIRE(res.costs.size() >= 2);
  CHECK(res.costs.front() == doctest::Approx(cost_Jd(a0, maps, cfg)));
  for (size_t i = 1; i < res.costs.size(); ++i)
    CHECK(res.costs[i] <= res.costs[i - 1] + 1e-12);
  CHECK(res.costs.back() < res.costs.front());
  // Result is consistent: reported final cost is the cost of a_d.
  CHECK(cost_Jd(res.a_d, maps, cfg) ==
        doctest::Approx(res.costs.back()).epsilon(1e-12));
  // A real start stays real.
  CHECK(res.a_d.imag().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("descent handles complex parameterizations") {
  const auto& cfg = testutil::uw_cfg();
  const auto& maps = testutil::uw_maps();
  DescentOptions opts;
  opts.max_iters = 4;
  cxmat a0 = random_init(48, 5, true);
  DescentResult res = optimize_Ad(a0, maps, cfg, opts);
  for (size_t i = 1; i < res.costs.size(); ++i)
    CHECK(res.costs[i] <= res.costs[i - 1] + 1e-12);
  CHECK(res.costs.back() < res.costs.front());
  CHECK(res.a_d.imag().cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("descent option validation") {
  const auto& cfg = testutil::uw_cfg();
  const auto& maps = testutil::uw_maps();
  cxmat a0 = permutation_init(maps, cfg);
  DescentOptions opts;
  opts.max_iters = -1;
  CHECK_THROWS_AS(optimize_Ad(a0, maps, cfg, opts), std::invalid_argument);
  opts = {};
  opts.step_init = 0.0;
  CHECK_THROWS_AS(optimize_Ad(a0, maps, cfg, opts), std::invalid_argument);
  opts = {};
  opts.backtrack_factor = 1.0;
  CHECK_THROWS_AS(optimize_Ad(a0, maps, cfg, opts), std::invalid_argument);
  opts = {};
  opts.tol_rel = -1e-3;
  CHECK_THROWS_AS(optimize_Ad(a0, maps, cfg, opts), std::invalid_argument);
  // Zero iterations: just the initial cost.
  opts = {};
  opts.max_iters = 0;
  DescentResult res = optimize_Ad(a0, maps, cfg, opts);
  CHECK(res.costs.size() == 1);
  CHECK_FALSE(res.converged);
}

TEST_CASE("pilot search reproduces the small alphabets") {
  const auto& gens = testutil::perm_gens();
  PilotSearchResult r2 = optimize_pilots(gens.g_p, 2);
  CHECK(std::abs(r2.energy - 5.4633) < 5e-4);
  PilotSearchResult r4 = optimize_pilots(gens.g_p, 4);
  CHECK(std::abs(r4.energy - 5.2423) < 5e-4);
  PilotSearchResult r6 = optimize_pilots(gens.g_p, 6);
  CHECK(std::abs(r6.energy - 5.1969) < 5e-4);
  // Nested alphabets can only improve.
  CHECK(r4.energy <= r2.energy + 1e-12);
  // The reported vector matches the reported exponents and energy.
  for (int k = 0; k < 4; ++k) {
    CHECK(std::abs(r4.p(k) - std::polar(1.0, 2 * M_PI * r4.exponents[k] / 4.0)) <
          1e-15);
  }
  CHECK(pilot_energy(gens.g_p, r4.p) == doctest::Approx(r4.energy));
}

TEST_CASE("pilot search agrees with a shuffled brute force") {
  const auto& gens = testutil::perm_gens();
  PilotSearchResult r = optimize_pilots(gens.g_p, 4);
  std::vector<int> order(256);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), std::mt19937(123));
  double best = 1e300;
  for (int code : order) {
    cxvec p(4);
    int c = code;
    for (int k = 0; k < 4; ++k) {
      p(k) = std::polar(1.0, 2 * M_PI * (c % 4) / 4.0);
      c /= 4;
    }
    best = std::min(best, (gens.g_p * p).squaredNorm());
  }
  CHECK(r.energy == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("pilot search tie-break picks the smallest exponents") {
  // With orthonormal pilot columns every vector has the same energy, so
  // the lexicographic rule must return all zeros.
  const auto& maps = testutil::uw_maps();
  cxmat g = cxmat::Zero(52, 4);
  for (int k = 0; k < 4; ++k) g(maps.pilot_rel[k], k) = 1.0;
  PilotSearchResult r = optimize_pilots(g, 5);
  CHECK(r.exponents == std::vector<int>{0, 0, 0, 0});
  CHECK(r.energy == doctest::Approx(4.0));
}

TEST_CASE("pilot search guards its runtime") {
  const auto& gens = testutil::perm_gens();
  CHECK_THROWS_AS(optimize_pilots(gens.g_p, 100), std::invalid_argument);
  CHECK_THROWS_AS(optimize_pilots(gens.g_p, 0), std::invalid_argument);
  CHECK_THROWS_AS(optimize_pilots(gens.g_p, -3), std::invalid_argument);
}

}  // TEST_SUITE
