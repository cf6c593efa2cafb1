// Command-line front end: config validation, generator design and
// archiving, pilot-energy tables, and the Monte-Carlo sweeps, all emitted
// as seeded CSV files.
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "uwofdm/airlink.hpp"
#include "uwofdm/design.hpp"
#include "uwofdm/genmat.hpp"
#include "uwofdm/harness.hpp"
#include "uwofdm/sysmodel.hpp"

using namespace uwofdm;

namespace {

SystemConfig config_from(const std::string& path) {
  return path.empty() ? reference_uw_config() : load_config(path);
}

// "a:b:step" -> {a, a+step, ..., <= b} (endpoint included within half a
// step of rounding slack)
std::vector<double> parse_eps_grid(const std::string& s) {
  double a = 0.0, b = 0.0, step = 0.0;
  if (std::sscanf(s.c_str(), "%lf:%lf:%lf", &a, &b, &step) != 3)
    throw std::invalid_argument("eps grid must be a:b:step, got '" + s + "'");
  if (step <= 0.0 || b < a)
    throw std::invalid_argument("eps grid needs step > 0 and b >= a");
  std::vector<double> grid;
  for (double e = a; e <= b + step * 0.5; e += step) grid.push_back(e);
  return grid;
}

UniqueWord uw_from_flag(const std::string& flag, const CarrierMaps& maps,
                        const SystemConfig& cfg) {
  const std::string custom_prefix = "custom:";
  if (flag.rfind(custom_prefix, 0) == 0) {
    const std::string path = flag.substr(custom_prefix.size());
    return make_custom_uw(read_uw_file(path, cfg.n_u), maps, cfg);
  }
  return make_uw(parse_uw_kind(flag), maps, cfg);
}

struct DesignFlags {
  std::string init = "perm";
  bool complex_entries = false;
  int iters = 5000;
  int cardinality = 20;
  std::uint64_t seed = 1;
};

void add_design_flags(CLI::App* cmd, DesignFlags& f) {
  cmd->add_option("--init", f.init, "starting point: perm or random")
      ->check(CLI::IsMember({"perm", "random"}));
  cmd->add_flag("--complex", f.complex_entries,
                "random start with complex entries (random init only)");
  cmd->add_option("--iters", f.iters, "descent iteration budget")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--cardinality", f.cardinality,
                  "root-of-unity alphabet size for the pilot search")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", f.seed, "seed for the random start");
}

struct DesignOutput {
  GeneratorArchive archive;
  DescentResult descent;
};

// Runs the descent and pilot search the flags describe; uw-ofdm only.
DesignOutput design_generators(const SystemConfig& cfg,
                               const CarrierMaps& maps,
                               const DesignFlags& f) {
  if (cfg.mode != "uw-ofdm")
    throw std::invalid_argument(
        "generator design applies to uw-ofdm configs; the cp-ofdm reference "
        "is identity-routed and needs no optimization");
  DescentOptions opts;
  opts.max_iters = f.iters;
  opts.seed = f.seed;
  const cxmat a0 = f.init == "perm"
                       ? permutation_init(maps, cfg)
                       : random_init(cfg.n_d + cfg.n_r, f.seed,
                                     f.complex_entries);
  DesignOutput out;
  out.descent = optimize_Ad(a0, maps, cfg, opts);
  out.archive.cfg_hash = config_hash(cfg);
  out.archive.mode = cfg.mode;
  out.archive.alpha = cfg.alpha();
  out.archive.a_d = out.descent.a_d;
  out.archive.g_d = scale_G_d(build_G_d(out.descent.a_d, maps, cfg), cfg);
  out.archive.g_p = build_G_p(maps, cfg);
  out.archive.p = optimize_pilots(out.archive.g_p, f.cardinality).p;
  return out;
}

// Generators for the simulation subcommands: a saved archive when given,
// otherwise the default design (permutation-start descent, 20-ary pilots)
// or the identity-routed cp-ofdm reference.
GeneratorSet resolve_gens(const SystemConfig& cfg, const CarrierMaps& maps,
                          const std::string& gens_path) {
  if (!gens_path.empty()) {
    const GeneratorArchive a = read_generator_archive(gens_path);
    if (a.cfg_hash != config_hash(cfg))
      throw std::runtime_error(
          "generator archive was built for a different config (hash "
          "mismatch)");
    return GeneratorSet{a.g_d, a.g_p, a.p, a.alpha, a.mode};
  }
  if (cfg.mode == "cp-ofdm")
    return build_cp_reference(cfg, cxvec::Ones(cfg.n_p));
  DesignFlags defaults;
  const DesignOutput out = design_generators(cfg, maps, defaults);
  return GeneratorSet{out.archive.g_d, out.archive.g_p, out.archive.p,
                      out.archive.alpha, out.archive.mode};
}

Scenario make_scenario(const SystemConfig& cfg, const GeneratorSet& gens,
                       const UniqueWord& uw, const std::string& grid,
                       int realizations, double noise_var,
                       std::uint64_t seed) {
  Scenario sc;
  sc.cfg = cfg;
  sc.gens = gens;
  sc.uw = uw;
  sc.eps_grid = parse_eps_grid(grid);
  sc.n_realizations = realizations;
  sc.noise_var = noise_var;
  sc.seed = seed;
  validate_scenario(sc);
  return sc;
}

void print_config_summary(const SystemConfig& cfg, const CarrierMaps& maps) {
  std::printf("mode %s: n=%d n_d=%d n_r=%d n_p=%d n_z=%d n_u=%d\n",
              cfg.mode.c_str(), cfg.n, cfg.n_d, cfg.n_r, cfg.n_p, cfg.n_z,
              cfg.n_u);
  std::printf("pilots at");
  for (int k : maps.pilot_abs) std::printf(" %d", k);
  std::printf("; %zu populated carriers; config hash %016llx\n",
              maps.nonzero.size(),
              static_cast<unsigned long long>(config_hash(cfg)));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"uw-ofdm pilot-tone baseband simulation toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path,
                 "JSON system config (default: built-in reference)")
      ->check(CLI::ExistingFile);

  // validate ----------------------------------------------------------------
  auto* c_val = app.add_subcommand("validate", "check a config and print it");
  c_val->callback([&] {
    const SystemConfig cfg = config_from(config_path);
    validate_config(cfg);
    print_config_summary(cfg, build_carrier_maps(cfg));
    std::printf("ok\n");
  });

  // optimize-gd ---------------------------------------------------------------
  auto* c_opt = app.add_subcommand(
      "optimize-gd", "design the data generator by steepest descent");
  DesignFlags opt_flags;
  std::string opt_out;
  add_design_flags(c_opt, opt_flags);
  c_opt->add_option("--out", opt_out, "write the generator archive here");
  c_opt->callback([&] {
    const SystemConfig cfg = config_from(config_path);
    const CarrierMaps maps = build_carrier_maps(cfg);
    const DesignOutput out = design_generators(cfg, maps, opt_flags);
    std::printf("cost %.6f -> %.6f over %zu accepted iterations (%s)\n",
                out.descent.costs.front(), out.descent.costs.back(),
                out.descent.costs.size() - 1,
                out.descent.converged ? "converged" : "budget exhausted");
    std::printf("pilot alphabet %d-ary, energy %.6f\n", opt_flags.cardinality,
                pilot_energy(out.archive.g_p, out.archive.p));
    if (!opt_out.empty()) {
      write_generator_archive(opt_out, out.archive);
      std::printf("archive written to %s\n", opt_out.c_str());
    }
  });

  // pilot-table -----------------------------------------------------------------
  auto* c_tab = app.add_subcommand(
      "pilot-table", "minimum pilot energies per alphabet cardinality");
  std::vector<int> tab_cards{2, 4, 6, 10, 20};
  std::string tab_out;
  std::uint64_t tab_seed = 1;
  c_tab->add_option("--cardinalities", tab_cards,
                    "alphabet sizes to search (default 2 4 6 10 20)")
      ->delimiter(',');
  c_tab->add_option("--seed", tab_seed, "seed stamped into the CSV header");
  c_tab->add_option("--out", tab_out, "output CSV path")->required();
  c_tab->callback([&] {
    const SystemConfig cfg = config_from(config_path);
    const auto table = run_pilot_table(cfg, tab_cards);
    std::vector<std::string> cols{"cardinality", "energy"};
    for (int k = 0; k < cfg.n_p; ++k) cols.push_back("k" + std::to_string(k));
    std::vector<std::vector<double>> rows;
    for (const auto& r : table) {
      std::vector<double> row{static_cast<double>(r.cardinality), r.energy};
      for (int e : r.exponents) row.push_back(e);
      rows.push_back(std::move(row));
    }
    write_csv(tab_out, tab_seed, cols, rows);
    std::printf("%zu rows written to %s\n", rows.size(), tab_out.c_str());
  });

  // shared simulation flags ------------------------------------------------------
  struct SimFlags {
    std::string gens_path;
    std::string uw = "zero";
    std::string grid = "0:0.1:0.02";
    int realizations = 1000;
    double noise_var = 0.0;
    std::uint64_t seed = 1;
    std::string out;
  };
  auto add_sim_flags = [](CLI::App* cmd, SimFlags& f, bool with_noise) {
    cmd->add_option("--gens", f.gens_path,
                    "generator archive (default: design on the fly)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--uw", f.uw,
                    "unique word: zero, cazac, barker or custom:PATH");
    cmd->add_option("--eps-grid", f.grid, "CFO grid as a:b:step");
    cmd->add_option("--realizations", f.realizations,
                    "channel realizations per grid point")
        ->check(CLI::PositiveNumber);
    if (with_noise)
      cmd->add_option("--noise-var", f.noise_var,
                      "time-domain noise variance (default 0, noiseless)")
          ->check(CLI::NonNegativeNumber);
    cmd->add_option("--seed", f.seed, "master RNG seed");
    cmd->add_option("--out", f.out, "output CSV path")->required();
  };

  auto scenario_from = [&](const SimFlags& f) {
    const SystemConfig cfg = config_from(config_path);
    const CarrierMaps maps = build_carrier_maps(cfg);
    if (cfg.mode == "cp-ofdm" && f.uw != "zero")
      throw std::invalid_argument(
          "--uw applies to uw-ofdm configs; the cp-ofdm guard is a prefix");
    return make_scenario(cfg, resolve_gens(cfg, maps, f.gens_path),
                         uw_from_flag(f.uw, maps, cfg), f.grid,
                         f.realizations, f.noise_var, f.seed);
  };

  // simulate-cpe -------------------------------------------------------------------
  auto* c_cpe = app.add_subcommand(
      "simulate-cpe", "Monte-Carlo BMSE of the compensated CPE estimate");
  SimFlags cpe_flags;
  add_sim_flags(c_cpe, cpe_flags, true);
  c_cpe->callback([&] {
    const Scenario sc = scenario_from(cpe_flags);
    const auto rows = run_cpe_bmse(sc);
    std::vector<std::vector<double>> out;
    for (const auto& r : rows)
      out.push_back({r.eps, r.bmse, static_cast<double>(r.n_used)});
    write_csv(cpe_flags.out, sc.seed, {"eps", "bmse", "n_used"}, out);
    std::printf("%zu rows written to %s\n", out.size(), cpe_flags.out.c_str());
  });

  // ici-sweep -----------------------------------------------------------------------
  auto* c_ici = app.add_subcommand(
      "ici-sweep", "channel-averaged ICI powers at the pilot bins");
  SimFlags ici_flags;
  add_sim_flags(c_ici, ici_flags, false);
  c_ici->callback([&] {
    const Scenario sc = scenario_from(ici_flags);
    const auto rows = run_ici_sweep(sc);
    std::vector<std::vector<double>> out;
    for (const auto& r : rows)
      out.push_back({r.eps, r.data_ici, r.pilot_ici,
                     static_cast<double>(r.n_used)});
    write_csv(ici_flags.out, sc.seed,
              {"eps", "data_ici", "pilot_ici", "n_used"}, out);
    std::printf("%zu rows written to %s\n", out.size(), ici_flags.out.c_str());
  });

  // approx-error ----------------------------------------------------------------------
  auto* c_apx = app.add_subcommand(
      "approx-error",
      "signal-to-neglected-term ratios of the approximate receive model");
  std::string apx_gens, apx_uw = "cazac", apx_out;
  double apx_eps = 0.1;
  std::uint64_t apx_seed = 1;
  c_apx->add_option("--gens", apx_gens,
                    "generator archive (default: design on the fly)")
      ->check(CLI::ExistingFile);
  c_apx->add_option("--uw", apx_uw,
                    "unique word: zero, cazac, barker or custom:PATH");
  c_apx->add_option("--eps", apx_eps, "CFO as a fraction of carrier spacing");
  c_apx->add_option("--seed", apx_seed, "seed stamped into the CSV header");
  c_apx->add_option("--out", apx_out, "output CSV path")->required();
  c_apx->callback([&] {
    const SystemConfig cfg = config_from(config_path);
    const CarrierMaps maps = build_carrier_maps(cfg);
    if (apx_eps < 0.0 || apx_eps >= 0.5)
      throw std::invalid_argument("--eps must lie in [0, 0.5)");
    const GeneratorSet gens = resolve_gens(cfg, maps, apx_gens);
    const std::vector<UniqueWord> uws{uw_from_flag(apx_uw, maps, cfg)};
    const auto rows = run_approx_error(gens, uws, apx_eps, maps, cfg);
    std::vector<std::vector<double>> out;
    for (const auto& r : rows)
      out.push_back({static_cast<double>(r.subcarrier), r.sigma2,
                     r.sigma2_delta, r.ratio_db});
    write_csv(apx_out, apx_seed,
              {"subcarrier", "sigma2_k", "sigma2_delta", "ratio_db"}, out);
    std::printf("%zu rows written to %s\n", out.size(), apx_out.c_str());
  });

  // genmat export/import ------------------------------------------------------------------
  auto* c_gm = app.add_subcommand("genmat", "generator archive tooling");
  c_gm->require_subcommand(1);

  auto* c_exp = c_gm->add_subcommand(
      "export", "design generators and save them as an archive");
  DesignFlags exp_flags;
  std::string exp_out;
  add_design_flags(c_exp, exp_flags);
  c_exp->add_option("--out", exp_out, "archive path")->required();
  c_exp->callback([&] {
    const SystemConfig cfg = config_from(config_path);
    const CarrierMaps maps = build_carrier_maps(cfg);
    const DesignOutput out = design_generators(cfg, maps, exp_flags);
    write_generator_archive(exp_out, out.archive);
    std::printf("archive written to %s (final cost %.6f)\n", exp_out.c_str(),
                out.descent.costs.back());
  });

  auto* c_imp = c_gm->add_subcommand(
      "import", "read an archive back, verify it and summarize");
  std::string imp_in, imp_out;
  c_imp->add_option("--in", imp_in, "archive path")
      ->required()
      ->check(CLI::ExistingFile);
  c_imp->add_option("--out", imp_out, "re-serialize the archive here");
  c_imp->callback([&] {
    const GeneratorArchive a = read_generator_archive(imp_in);
    if (!config_path.empty()) {
      const SystemConfig cfg = config_from(config_path);
      if (a.cfg_hash != config_hash(cfg))
        throw std::runtime_error(
            "archive config hash does not match --config");
    }
    std::printf(
        "mode %s, alpha %.4f, cfg hash %016llx; a_d %ldx%ld, g_d %ldx%ld, "
        "g_p %ldx%ld, %ld pilots\n",
        a.mode.c_str(), a.alpha, static_cast<unsigned long long>(a.cfg_hash),
        a.a_d.rows(), a.a_d.cols(), a.g_d.rows(), a.g_d.cols(), a.g_p.rows(),
        a.g_p.cols(), a.p.size());
    if (!imp_out.empty()) {
      write_generator_archive(imp_out, a);
      std::printf("archive re-written to %s\n", imp_out.c_str());
    }
    std::printf("ok\n");
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
