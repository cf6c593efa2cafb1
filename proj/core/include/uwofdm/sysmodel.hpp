// System configuration and the fixed subcarrier-mapping matrices derived
// from it (zero-carrier insertion, pilot routing, pilot extraction).
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "uwofdm/numerics.hpp"

namespace uwofdm {

struct SystemConfig {
  int n = 64;       // DFT length
  int n_d = 32;     // data symbols per OFDM symbol
  int n_r = 16;     // redundant subcarriers (0 in cp-ofdm mode)
  int n_p = 4;      // pilot subcarriers
  int n_z = 12;     // zero subcarriers
  int n_u = 16;     // guard length: unique word (uw-ofdm) or CP (cp-ofdm)
  std::vector<int> i_z;  // zero subcarrier indices
  std::vector<int> i_p;  // pilot subcarrier indices
  std::vector<int> i_r;  // redundant subcarrier indices
  int l_symbols = 8;     // OFDM symbols per burst
  double t_s = 50e-9;    // sample period [s]
  double tau_rms = 100e-9;  // channel RMS delay spread [s]
  int n_taps = 16;          // channel impulse response length
  double sigma_d2 = 1.0;    // data symbol variance
  double snr_design = 10.0;  // design SNR sigma_d^2/(N*sigma_n^2), linear
  std::string mode = "uw-ofdm";  // "uw-ofdm" or "cp-ofdm"

  // Energy ratio alpha = (N - N_z - N_p) / N_d used when scaling data
  // generators to the reference transmit energy.
  double alpha() const;
};

// Index bookkeeping plus the 0/1 routing matrices.  "Relative" indices
// count within the N - N_z populated subcarriers in ascending absolute
// order; "absolute" indices count within the full DFT grid.
struct CarrierMaps {
  std::vector<int> nonzero;      // absolute indices of populated carriers
  std::vector<int> zero_sorted;  // absolute zero-carrier indices, ascending
  std::vector<int> pilot_abs;    // absolute pilot indices, ascending
  std::vector<int> pilot_rel;    // relative positions of the pilots
  std::vector<int> nonpilot_rel; // relative positions of everything else
  cxmat b;    // N x (N-N_z): inserts zeros at the reserved carriers
  cxmat p_p;  // (N-N_z) x (N-N_z): [pilots; non-pilots] -> relative order
  cxmat b_p;  // (N-N_z) x (N-N_z-N_p): non-pilot part of p_p
  cxmat e_p;  // N_p x (N-N_z): reads the pilot entries back out, ascending
};

// Structural checks; returns human-readable violations, empty when valid.
std::vector<std::string> validate_config(const SystemConfig& cfg);

// Builds the routing matrices; throws std::invalid_argument when
// validate_config reports problems.
CarrierMaps build_carrier_maps(const SystemConfig& cfg);

// Reference parameter sets (64-carrier burst with four pilots).
SystemConfig reference_uw_config();
SystemConfig reference_cp_config();

void to_json(nlohmann::json& j, const SystemConfig& cfg);
void from_json(const nlohmann::json& j, SystemConfig& cfg);

// Parses a JSON config file; missing fields keep their defaults.
// Throws std::runtime_error on IO or parse failure.
SystemConfig load_config(const std::string& path);

// FNV-1a over the canonical JSON serialization; stable across runs and
// platforms, used to tie generator archives to the config they came from.
std::uint64_t config_hash(const SystemConfig& cfg);

}  // namespace uwofdm
