// Shared fixtures for the unit suites: cached reference setups and small
// comparison helpers.
#pragma once

#include <cmath>

#include "uwofdm/airlink.hpp"
#include "uwofdm/design.hpp"
#include "uwofdm/genmat.hpp"
#include "uwofdm/numerics.hpp"
#include "uwofdm/sysmodel.hpp"

namespace testutil {

inline const uwofdm::SystemConfig& uw_cfg() {
  static const uwofdm::SystemConfig cfg = uwofdm::reference_uw_config();
  return cfg;
}

inline const uwofdm::CarrierMaps& uw_maps() {
  static const uwofdm::CarrierMaps maps = uwofdm::build_carrier_maps(uw_cfg());
  return maps;
}

inline const uwofdm::SystemConfig& cp_cfg() {
  static const uwofdm::SystemConfig cfg = uwofdm::reference_cp_config();
  return cfg;
}

inline const uwofdm::CarrierMaps& cp_maps() {
  static const uwofdm::CarrierMaps maps = uwofdm::build_carrier_maps(cp_cfg());
  return maps;
}

// Permutation-initialized generator set with the 20-ary minimum-energy
// pilot vector.  Cheap to build, deterministic, good enough wherever the
// tests only need *a* valid generator pair.
inline const uwofdm::GeneratorSet& perm_gens() {
  static const uwofdm::GeneratorSet gens = [] {
    const auto& cfg = uw_cfg();
    const auto& maps = uw_maps();
    uwofdm::GeneratorSet g;
    g.g_d = uwofdm::scale_G_d(
        uwofdm::build_G_d(uwofdm::permutation_init(maps, cfg), maps, cfg), cfg);
    g.g_p = uwofdm::build_G_p(maps, cfg);
    g.p = uwofdm::optimize_pilots(g.g_p, 20).p;
    g.alpha = cfg.alpha();
    g.mode = cfg.mode;
    return g;
  }();
  return gens;
}

template <typename A, typename B>
double max_abs_diff(const Eigen::MatrixBase<A>& a,
                    const Eigen::MatrixBase<B>& b) {
  return (a.derived() - b.derived()).cwiseAbs().maxCoeff();
}

}  // namespace testutil
