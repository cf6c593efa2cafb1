#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "uwofdm/sysmodel.hpp"

using namespace uwofdm;

TEST_SUITE("sysmodel") {

TEST_CASE("reference configs validate cleanly") {
  CHECK(validate_config(reference_uw_config()).empty());
  CHECK(validate_config(reference_cp_config()).empty());
  CHECK(reference_uw_config().alpha() == doctest::Approx(1.5));
  CHECK(reference_cp_config().n_r == 0);
  CHECK(reference_cp_config().mode == "cp-ofdm");
  CHECK(reference_cp_config().n_d == 48);
}

TEST_CASE("reference carrier layout") {
  const auto& maps = testutil::uw_maps();
  REQUIRE(maps.nonzero.size() == 52);
  REQUIRE(maps.zero_sorted.size() == 12);
  CHECK(maps.zero_sorted.front() == 0);
  CHECK(maps.zero_sorted.back() == 37);
  CHECK(maps.pilot_abs == std::vector<int>{7, 21, 43, 57});
  CHECK(maps.pilot_rel == std::vector<int>{6, 20, 31, 45});
  CHECK(maps.nonpilot_rel.size() == 48);
  // Relative indexing is consistent: nonzero[pilot_rel[k]] == pilot_abs[k].
  for (int k = 0; k < 4; ++k)
    CHECK(maps.nonzero[maps.pilot_rel[k]] == maps.pilot_abs[k]);
}

TEST_CASE("routing matrices are consistent") {
  const auto& maps = testutil::uw_maps();
  const int n = 64, nnz = 52, np = 4;

  REQUIRE(maps.b.rows() == n);
  REQUIRE(maps.b.cols() == nnz);
  CHECK(testutil::max_abs_diff(maps.b.adjoint() * maps.b,
                               cxmat(cxmat::Identity(nnz, nnz))) == 0.0);
  // b places entry j at absolute carrier nonzero[j] and zeros elsewhere.
  cxvec x(nnz);
  for (int j = 0; j < nnz; ++j) x(j) = cxd(j + 1, -j);
  cxvec full = maps.b * x;
  for (int j = 0; j < nnz; ++j) CHECK(full(maps.nonzero[j]) == x(j));
  for (int z : maps.zero_sorted) CHECK(full(z) == cxd(0, 0));

  // p_p is a permutation sending [pilots; non-pilots] to relative order.
  CHECK(testutil::max_abs_diff(maps.p_p.adjoint() * maps.p_p,
                               cxmat(cxmat::Identity(nnz, nnz))) == 0.0);
  cxvec stacked(nnz);
  for (int k = 0; k < np; ++k) stacked(k) = cxd(100 + k, 0);
  for (int j = 0; j < nnz - np; ++j) stacked(np + j) = cxd(-1 - j, 0);
  cxvec rel = maps.p_p * stacked;
  for (int k = 0; k < np; ++k) CHECK(rel(maps.pilot_rel[k]) == cxd(100 + k, 0));
  for (size_t j = 0; j < maps.nonpilot_rel.size(); ++j)
    CHECK(rel(maps.nonpilot_rel[j]) == cxd(-1.0 - double(j), 0));

  // b_p is the non-pilot column block of p_p; e_p reads the pilots back.
  CHECK(testutil::max_abs_diff(maps.b_p,
                               cxmat(maps.p_p.rightCols(nnz - np))) == 0.0);
  CHECK(testutil::max_abs_diff(maps.e_p * rel, cxvec(stacked.head(np))) == 0.0);
  // Round trip: e_p * p_p restricted to the pilot inputs is the identity.
  CHECK(testutil::max_abs_diff(maps.e_p * maps.p_p.leftCols(np),
                               cxmat(cxmat::Identity(np, np))) == 0.0);
}

TEST_CASE("validate_config catches structural violations") {
  auto bad = [](auto mutate) {
    SystemConfig cfg = reference_uw_config();
    mutate(cfg);
    return !validate_config(cfg).empty();
  };
  CHECK(bad([](SystemConfig& c) { c.mode = "tdma"; }));
  CHECK(bad([](SystemConfig& c) { c.n_d = 31; }));            // budget broken
  CHECK(bad([](SystemConfig& c) { c.i_p[0] = c.i_z[0]; }));   // overlap
  CHECK(bad([](SystemConfig& c) { c.i_r[0] = 64; }));         // out of range
  CHECK(bad([](SystemConfig& c) { c.i_r[0] = c.i_r[1]; }));   // duplicate
  CHECK(bad([](SystemConfig& c) { c.n_r = 15; }));            // n_r != n_u
  CHECK(bad([](SystemConfig& c) { c.l_symbols = 0; }));
  CHECK(bad([](SystemConfig& c) { c.t_s = 0.0; }));
  CHECK(bad([](SystemConfig& c) { c.tau_rms = -1.0; }));
  CHECK(bad([](SystemConfig& c) { c.n_taps = 0; }));
  CHECK(bad([](SystemConfig& c) { c.n_taps = c.n_u + 1; }));
  CHECK(bad([](SystemConfig& c) { c.sigma_d2 = 0.0; }));
  CHECK(bad([](SystemConfig& c) { c.snr_design = 0.0; }));
  CHECK(bad([](SystemConfig& c) {
    c.mode = "cp-ofdm";  // cp mode must not keep redundant carriers
  }));

  SystemConfig cfg = reference_uw_config();
  cfg.i_z[0] = 1;  // still valid: a different zero set
  CHECK(validate_config(cfg).empty());

  cfg = reference_uw_config();
  cfg.i_p[0] = 70;
  CHECK_THROWS_AS(build_carrier_maps(cfg), std::invalid_argument);
}

TEST_CASE("json round trip preserves every field") {
  SystemConfig cfg = reference_uw_config();
  cfg.l_symbols = 5;
  cfg.snr_design = 25.0;
  cfg.i_p = {3, 21, 43, 57};
  nlohmann::json j = cfg;
  SystemConfig back = j.get<SystemConfig>();
  CHECK(back.n == cfg.n);
  CHECK(back.n_d == cfg.n_d);
  CHECK(back.i_p == cfg.i_p);
  CHECK(back.i_z == cfg.i_z);
  CHECK(back.i_r == cfg.i_r);
  CHECK(back.l_symbols == 5);
  CHECK(back.snr_design == 25.0);
  CHECK(back.mode == cfg.mode);
  CHECK(config_hash(back) == config_hash(cfg));
}

TEST_CASE("load_config overlays defaults and rejects junk") {
  {
    std::ofstream f("tmp_cfg.json");
    f << "{\"l_symbols\": 3, \"snr_design\": 100.0}\n";
  }
  SystemConfig cfg = load_config("tmp_cfg.json");
  CHECK(cfg.l_symbols == 3);
  CHECK(cfg.snr_design == 100.0);
  CHECK(cfg.n == 64);  // untouched fields keep reference values
  CHECK(cfg.i_p == reference_uw_config().i_p);
  std::remove("tmp_cfg.json");

  {
    std::ofstream f("tmp_bad.json");
    f << "{not json";
  }
  CHECK_THROWS_AS(load_config("tmp_bad.json"), std::runtime_error);
  std::remove("tmp_bad.json");
  CHECK_THROWS_AS(load_config("no_such_file.json"), std::runtime_error);
}

TEST_CASE("config hash is stable and sensitive") {
  SystemConfig a = reference_uw_config();
  SystemConfig b = reference_uw_config();
  CHECK(config_hash(a) == config_hash(b));
  b.snr_design = 11.0;
  CHECK(config_hash(a) != config_hash(b));
  b = reference_uw_config();
  b.i_r[3] = 14;
  CHECK(config_hash(a) != config_hash(b));
}

}  // TEST_SUITE
