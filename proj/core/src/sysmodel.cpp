#include "uwofdm/sysmodel.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace uwofdm {

double SystemConfig::alpha() const {
  return static_cast<double>(n - n_z - n_p) / static_cast<double>(n_d);
}

namespace {

bool indices_ok(const std::vector<int>& idx, int n) {
  return std::all_of(idx.begin(), idx.end(),
                     [n](int i) { return i >= 0 && i < n; });
}

}  // namespace

std::vector<std::string> validate_config(const SystemConfig& cfg) {
  std::vector<std::string> problems;
  auto add = [&problems](const std::string& msg) { problems.push_back(msg); };

  if (cfg.mode != "uw-ofdm" && cfg.mode != "cp-ofdm")
    add("mode must be uw-ofdm or cp-ofdm, got '" + cfg.mode + "'");
  if (cfg.n <= 0) add("n must be positive");
  if (cfg.n_d <= 0) add("n_d must be positive");
  if (cfg.n_p < 0) add("n_p must be non-negative");
  if (cfg.n_z < 0) add("n_z must be non-negative");
  if (cfg.n_u <= 0) add("n_u must be positive");

  if (cfg.mode == "uw-ofdm") {
    if (cfg.n_r < 0) add("n_r must be non-negative");
    if (cfg.n != cfg.n_d + cfg.n_r + cfg.n_p + cfg.n_z)
      add("carrier budget mismatch: n != n_d + n_r + n_p + n_z");
    if (cfg.n_r != cfg.n_u)
      add("uw-ofdm needs n_r == n_u so the zero word is reachable");
  } else if (cfg.mode == "cp-ofdm") {
    if (cfg.n_r != 0) add("cp-ofdm must have n_r == 0");
    if (cfg.n != cfg.n_d + cfg.n_p + cfg.n_z)
      add("carrier budget mismatch: n != n_d + n_p + n_z");
  }

  if (static_cast<int>(cfg.i_z.size()) != cfg.n_z)
    add("i_z size does not match n_z");
  if (static_cast<int>(cfg.i_p.size()) != cfg.n_p)
    add("i_p size does not match n_p");
  if (static_cast<int>(cfg.i_r.size()) != cfg.n_r)
    add("i_r size does not match n_r");
  if (!indices_ok(cfg.i_z, cfg.n)) add("i_z has indices outside [0, n)");
  if (!indices_ok(cfg.i_p, cfg.n)) add("i_p has indices outside [0, n)");
  if (!indices_ok(cfg.i_r, cfg.n)) add("i_r has indices outside [0, n)");

  std::set<int> seen;
  std::size_t total = 0;
  for (const auto* v : {&cfg.i_z, &cfg.i_p, &cfg.i_r}) {
    seen.insert(v->begin(), v->end());
    total += v->size();
  }
  if (seen.size() != total) add("i_z, i_p, i_r must be pairwise disjoint");

  if (cfg.l_symbols < 1) add("l_symbols must be at least 1");
  if (cfg.t_s <= 0.0) add("t_s must be positive");
  if (cfg.tau_rms <= 0.0) add("tau_rms must be positive");
  if (cfg.n_taps < 1) add("n_taps must be at least 1");
  if (cfg.n_taps > cfg.n_u)
    add("n_taps must not exceed the guard length n_u");
  if (cfg.sigma_d2 <= 0.0) add("sigma_d2 must be positive");
  if (cfg.snr_design <= 0.0) add("snr_design must be positive");

  return problems;
}

CarrierMaps build_carrier_maps(const SystemConfig& cfg) {
  const auto problems = validate_config(cfg);
  if (!problems.empty())
    throw std::invalid_argument("build_carrier_maps: " + problems.front());

  CarrierMaps maps;
  std::set<int> zero(cfg.i_z.begin(), cfg.i_z.end());
  std::set<int> pilot(cfg.i_p.begin(), cfg.i_p.end());
  maps.zero_sorted.assign(zero.begin(), zero.end());
  maps.pilot_abs.assign(pilot.begin(), pilot.end());
  for (int i = 0; i < cfg.n; ++i) {
    if (!zero.count(i)) maps.nonzero.push_back(i);
  }
  const int n_nz = static_cast<int>(maps.nonzero.size());
  for (int j = 0; j < n_nz; ++j) {
    if (pilot.count(maps.nonzero[j]))
      maps.pilot_rel.push_back(j);
    else
      maps.nonpilot_rel.push_back(j);
  }

  maps.b = cxmat::Zero(cfg.n, n_nz);
  for (int j = 0; j < n_nz; ++j) maps.b(maps.nonzero[j], j) = 1.0;

  maps.p_p = cxmat::Zero(n_nz, n_nz);
  for (int k = 0; k < cfg.n_p; ++k) maps.p_p(maps.pilot_rel[k], k) = 1.0;
  for (std::size_t j = 0; j < maps.nonpilot_rel.size(); ++j)
    maps.p_p(maps.nonpilot_rel[j], cfg.n_p + static_cast<int>(j)) = 1.0;

  maps.b_p = cxmat::Zero(n_nz, n_nz - cfg.n_p);
  for (std::size_t j = 0; j < maps.nonpilot_rel.size(); ++j)
    maps.b_p(maps.nonpilot_rel[j], static_cast<int>(j)) = 1.0;

  maps.e_p = cxmat::Zero(cfg.n_p, n_nz);
  for (int k = 0; k < cfg.n_p; ++k) maps.e_p(k, maps.pilot_rel[k]) = 1.0;

  return maps;
}

SystemConfig reference_uw_config() {
  SystemConfig cfg;
  cfg.i_z = {0, 27, 28, 29, 30, 31, 32, 33, 34, 35, 36, 37};
  cfg.i_p = {7, 21, 43, 57};
  cfg.i_r = {2, 5, 9, 13, 17, 20, 24, 26, 38, 40, 44, 47, 51, 54, 58, 62};
  return cfg;
}

SystemConfig reference_cp_config() {
  SystemConfig cfg = reference_uw_config();
  cfg.mode = "cp-ofdm";
  cfg.n_d = 48;
  cfg.n_r = 0;
  cfg.i_r.clear();
  return cfg;
}

void to_json(nlohmann::json& j, const SystemConfig& cfg) {
  j = nlohmann::json{{"n", cfg.n},
                     {"n_d", cfg.n_d},
                     {"n_r", cfg.n_r},
                     {"n_p", cfg.n_p},
                     {"n_z", cfg.n_z},
                     {"n_u", cfg.n_u},
                     {"i_z", cfg.i_z},
                     {"i_p", cfg.i_p},
                     {"i_r", cfg.i_r},
                     {"l_symbols", cfg.l_symbols},
                     {"t_s", cfg.t_s},
                     {"tau_rms", cfg.tau_rms},
                     {"n_taps", cfg.n_taps},
                     {"sigma_d2", cfg.sigma_d2},
                     {"snr_design", cfg.snr_design},
                     {"mode", cfg.mode}};
}

void from_json(const nlohmann::json& j, SystemConfig& cfg) {
  cfg.n = j.value("n", cfg.n);
  cfg.n_d = j.value("n_d", cfg.n_d);
  cfg.n_r = j.value("n_r", cfg.n_r);
  cfg.n_p = j.value("n_p", cfg.n_p);
  cfg.n_z = j.value("n_z", cfg.n_z);
  cfg.n_u = j.value("n_u", cfg.n_u);
  cfg.i_z = j.value("i_z", cfg.i_z);
  cfg.i_p = j.value("i_p", cfg.i_p);
  cfg.i_r = j.value("i_r", cfg.i_r);
  cfg.l_symbols = j.value("l_symbols", cfg.l_symbols);
  cfg.t_s = j.value("t_s", cfg.t_s);
  cfg.tau_rms = j.value("tau_rms", cfg.tau_rms);
  cfg.n_taps = j.value("n_taps", cfg.n_taps);
  cfg.sigma_d2 = j.value("sigma_d2", cfg.sigma_d2);
  cfg.snr_design = j.value("snr_design", cfg.snr_design);
  cfg.mode = j.value("mode", cfg.mode);
}

SystemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_config: cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("load_config: parse error in " + path + ": " +
                             e.what());
  }
  SystemConfig cfg = reference_uw_config();
  from_json(j, cfg);
  return cfg;
}

std::uint64_t config_hash(const SystemConfig& cfg) {
  nlohmann::json j;
  to_json(j, cfg);
  const std::string dump = j.dump();  // keys are emitted sorted
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace uwofdm
