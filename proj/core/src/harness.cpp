#include "uwofdm/harness.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <stdexcept>

#include "uwofdm/design.hpp"
#include "uwofdm/rng.hpp"
#include "uwofdm/version.hpp"

namespace uwofdm {

void validate_scenario(const Scenario& sc) {
  const auto problems = validate_config(sc.cfg);
  if (!problems.empty())
    throw std::invalid_argument("scenario: " + problems.front());
  if (sc.n_realizations < 1)
    throw std::invalid_argument("scenario: n_realizations must be >= 1");
  if (sc.eps_grid.empty())
    throw std::invalid_argument("scenario: empty eps grid");
  for (double e : sc.eps_grid) {
    if (e < 0.0 || e >= 0.5)
      throw std::invalid_argument("scenario: eps values must lie in [0, 0.5)");
  }
  if (sc.noise_var < 0.0)
    throw std::invalid_argument("scenario: negative noise power");
}

GeneratorSet build_cp_reference(const SystemConfig& cfg, const cxvec& p) {
  if (cfg.mode != "cp-ofdm")
    throw std::invalid_argument("build_cp_reference: cfg.mode must be cp-ofdm");
  const CarrierMaps maps = build_carrier_maps(cfg);
  if (p.size() != cfg.n_p)
    throw std::invalid_argument("build_cp_reference: pilot length mismatch");
  GeneratorSet gens;
  gens.g_d = maps.b_p;
  gens.g_p = maps.p_p.leftCols(cfg.n_p);
  gens.p = p;
  gens.alpha = cfg.alpha();
  gens.mode = "cp-ofdm";
  return gens;
}

BmseReport run_cpe_bmse_report(const Scenario& sc) {
  validate_scenario(sc);
  const CarrierMaps maps = build_carrier_maps(sc.cfg);
  const Eigen::Index n_nz = static_cast<Eigen::Index>(maps.nonzero.size());
  const int n_eps = static_cast<int>(sc.eps_grid.size());

  BmseReport report;
  report.rows.resize(n_eps);
  report.sq_errors.resize(n_eps);
  for (int e = 0; e < n_eps; ++e) report.rows[e].eps = sc.eps_grid[e];

  for (int r = 0; r < sc.n_realizations; ++r) {
    Rng rng = Rng::stream(sc.seed, static_cast<std::uint64_t>(r));
    const ChannelRealization chan =
        draw_channel(rng, sc.cfg.tau_rms, maps, sc.cfg);
    const cxvec d = rng.qpsk(static_cast<int>(sc.gens.g_d.cols()));
    cxvec noise;
    if (sc.noise_var > 0.0)
      noise = std::sqrt(sc.cfg.n * sc.noise_var) *
              rng.cgaussian_vec(static_cast<int>(n_nz));

    rvec w_p(sc.cfg.n_p);
    for (int k = 0; k < sc.cfg.n_p; ++k) w_p(k) = std::norm(chan.h_p(k));

    AffineCpe fit;
    try {
      fit = fit_phi_pil(sc.gens, sc.uw, chan, w_p, maps, sc.cfg);
    } catch (const std::runtime_error& err) {
      std::cerr << "run_cpe_bmse: realization " << r
                << " skipped (" << err.what() << ")\n";
      continue;
    }

    for (int e = 0; e < n_eps; ++e) {
      const double eps = sc.eps_grid[e];
      try {
        Rng no_noise_rng(0);  // untouched, receive is called noiseless
        std::vector<cxvec> burst =
            receive_exact({d}, sc.gens, sc.uw, chan, eps, 0.0, no_noise_rng,
                          maps, sc.cfg);
        cxvec y = std::move(burst[0]);
        if (sc.noise_var > 0.0) y += noise;

        const cxvec p_hat = extract_pilots(y, chan, maps);
        const double phi_hat = estimate_cpe(p_hat, sc.gens.p, w_p);
        const double eps_hat =
            estimate_cfo_from_cpe(phi_hat, fit.m, fit.q, sc.cfg, 0);
        const double phi_hathat =
            compensate_cpe(phi_hat, fit.m, fit.q, eps_hat);
        // Angles compare on the circle: a perfect estimate of a slightly
        // negative accumulated angle differs from phi_l by a full turn in
        // its [0, 2*pi) representation.
        const double err = wrap_pm_pi(phi_hathat - cfo_phi(eps, 0, sc.cfg));
        report.sq_errors[e].push_back(err * err);
      } catch (const std::runtime_error& err) {
        std::cerr << "run_cpe_bmse: realization " << r << " at eps " << eps
                  << " skipped (" << err.what() << ")\n";
      }
    }
  }

  for (int e = 0; e < n_eps; ++e) {
    const auto& errs = report.sq_errors[e];
    report.rows[e].n_used = static_cast<int>(errs.size());
    double acc = 0.0;
    for (double v : errs) acc += v;
    report.rows[e].bmse = errs.empty() ? 0.0 : acc / errs.size();
  }
  return report;
}

std::vector<BmseRow> run_cpe_bmse(const Scenario& sc) {
  return run_cpe_bmse_report(sc).rows;
}

std::vector<IciRow> run_ici_sweep(const Scenario& sc) {
  validate_scenario(sc);
  const CarrierMaps maps = build_carrier_maps(sc.cfg);
  const int n_eps = static_cast<int>(sc.eps_grid.size());

  std::vector<IciRow> rows(n_eps);
  for (int e = 0; e < n_eps; ++e) rows[e].eps = sc.eps_grid[e];

  for (int r = 0; r < sc.n_realizations; ++r) {
    Rng rng = Rng::stream(sc.seed, static_cast<std::uint64_t>(r));
    const ChannelRealization chan =
        draw_channel(rng, sc.cfg.tau_rms, maps, sc.cfg);
    for (int e = 0; e < n_eps; ++e) {
      try {
        const double s2d =
            data_ici_power(sc.gens.g_d, chan, sc.eps_grid[e], maps, sc.cfg);
        const double s2p = pilot_ici_power(sc.gens.g_p, sc.gens.p, chan,
                                           sc.eps_grid[e], maps, sc.cfg);
        rows[e].data_ici += s2d;
        rows[e].pilot_ici += s2p;
        rows[e].n_used += 1;
      } catch (const std::runtime_error& err) {
        std::cerr << "run_ici_sweep: realization " << r << " at eps "
                  << sc.eps_grid[e] << " skipped (" << err.what() << ")\n";
      }
    }
  }
  for (auto& row : rows) {
    if (row.n_used > 0) {
      row.data_ici /= row.n_used;
      row.pilot_ici /= row.n_used;
    }
  }
  return rows;
}

std::vector<PilotTableRow> run_pilot_table(
    const SystemConfig& cfg, const std::vector<int>& cardinalities) {
  const CarrierMaps maps = build_carrier_maps(cfg);
  const cxmat g_p = build_G_p(maps, cfg);
  std::vector<PilotTableRow> rows;
  rows.reserve(cardinalities.size());
  for (int card : cardinalities) {
    const PilotSearchResult res = optimize_pilots(g_p, card);
    PilotTableRow row;
    row.cardinality = card;
    row.energy = res.energy;
    row.exponents = res.exponents;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ApproxReportRow> run_approx_error(const GeneratorSet& gens,
                                              const std::vector<UniqueWord>& uws,
                                              double eps,
                                              const CarrierMaps& maps,
                                              const SystemConfig& cfg) {
  const ChannelRealization flat = awgn_channel(maps, cfg);
  std::vector<ApproxReportRow> rows;
  for (const UniqueWord& uw : uws) {
    const auto powers = approx_error_powers(gens, uw, flat, eps, maps, cfg);
    for (const auto& p : powers) {
      ApproxReportRow row;
      row.uw = uw_kind_name(uw.kind);
      row.subcarrier = p.subcarrier;
      row.sigma2 = p.sigma2;
      row.sigma2_delta = p.sigma2_delta;
      row.ratio_db = p.sigma2_delta > 0.0
                         ? 10.0 * std::log10(p.sigma2 / p.sigma2_delta)
                         : std::numeric_limits<double>::infinity();
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string csv_comment(std::uint64_t seed) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "# %s v%d schema=%d seed=%llu", kLibraryName,
                kVersionMajor, kCsvSchema,
                static_cast<unsigned long long>(seed));
  return buf;
}

void write_csv(const std::string& path, std::uint64_t seed,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path);
  out << csv_comment(seed) << "\n";
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c) out << ",";
    out << columns[c];
  }
  out << "\n";
  char buf[64];
  for (const auto& row : rows) {
    if (row.size() != columns.size())
      throw std::invalid_argument("write_csv: row width mismatch");
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ",";
      std::snprintf(buf, sizeof(buf), "%.12g", row[c]);
      out << buf;
    }
    out << "\n";
  }
  if (!out) throw std::runtime_error("write_csv: write failed: " + path);
}

}  // namespace uwofdm
