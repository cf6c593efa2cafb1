// Experiment orchestration: scenario definition, Monte-Carlo sweeps for
// CPE estimation error and ICI power, pilot-energy tables, the CP-OFDM
// reference system, and CSV emission.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uwofdm/airlink.hpp"
#include "uwofdm/estimator.hpp"
#include "uwofdm/genmat.hpp"
#include "uwofdm/sysmodel.hpp"

namespace uwofdm {

// One simulation setup.  The mode (uw-ofdm or cp-ofdm) lives in cfg.mode
// and must match how gens was built.
struct Scenario {
  SystemConfig cfg;
  GeneratorSet gens;
  UniqueWord uw;
  std::vector<double> eps_grid;
  int n_realizations = 1000;
  double noise_var = 0.0;  // time-domain sigma_n^2; 0 = noiseless
  std::uint64_t seed = 1;
};

// Throws std::invalid_argument when the scenario violates its bounds
// (eps values outside [0, 0.5), n_realizations < 1, bad cfg).
void validate_scenario(const Scenario& sc);

// Identity-routed generators of the classical cyclic-prefix system: data
// one-hot on the non-pilot carriers, pilots one-hot at the same absolute
// positions, carrying the given pilot values.
GeneratorSet build_cp_reference(const SystemConfig& cfg, const cxvec& p);

struct BmseRow {
  double eps = 0.0;
  double bmse = 0.0;  // mean squared CPE error, radians^2
  int n_used = 0;
};

// Rows plus the per-realization squared errors behind them (same order
// as the realization index), for convergence diagnostics.
struct BmseReport {
  std::vector<BmseRow> rows;
  std::vector<std::vector<double>> sq_errors;  // [eps index][used draws]
};

// Monte-Carlo BMSE of the compensated CPE estimate at symbol 0: per
// realization draw a channel and data, receive noiselessly-or-not, fit
// (m, q) for that channel with W_p = |H_p|^2, estimate, compensate, and
// average the squared error per eps.  Failed realizations (channel nulls,
// undefined angles) are skipped, reported via n_used and logged to stderr.
BmseReport run_cpe_bmse_report(const Scenario& sc);
std::vector<BmseRow> run_cpe_bmse(const Scenario& sc);

struct IciRow {
  double eps = 0.0;
  double data_ici = 0.0;   // mean over pilot positions, channel-averaged
  double pilot_ici = 0.0;
  int n_used = 0;
};

// Channel-averaged closed-form ICI powers at the pilot positions.
std::vector<IciRow> run_ici_sweep(const Scenario& sc);

struct PilotTableRow {
  int cardinality = 0;
  double energy = 0.0;  // ||G_p p||^2 at the searched minimum
  std::vector<int> exponents;
};

// Minimum pilot energies over root-of-unity alphabets of the given
// cardinalities, for the pilot generator of cfg.
std::vector<PilotTableRow> run_pilot_table(const SystemConfig& cfg,
                                           const std::vector<int>& cardinalities);

struct ApproxReportRow {
  std::string uw;        // unique-word kind
  int subcarrier = 0;    // absolute index
  double sigma2 = 0.0;
  double sigma2_delta = 0.0;
  double ratio_db = 0.0;  // +inf when sigma2_delta == 0
};

// Signal-to-neglected-term power ratios of the approximate receive model
// per populated subcarrier, flat channel, one block of rows per UW.
std::vector<ApproxReportRow> run_approx_error(const GeneratorSet& gens,
                                              const std::vector<UniqueWord>& uws,
                                              double eps,
                                              const CarrierMaps& maps,
                                              const SystemConfig& cfg);

// First line of every emitted CSV.
std::string csv_comment(std::uint64_t seed);

// Writes a numeric CSV: comment line, column-name line, then one line per
// row with %.12g formatting (non-finite values print as inf/-inf/nan).
void write_csv(const std::string& path, std::uint64_t seed,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);

}  // namespace uwofdm
