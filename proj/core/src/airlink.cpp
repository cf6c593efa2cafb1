#include "uwofdm/airlink.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace uwofdm {

namespace {

cxvec restrict_to(const cxvec& full, const std::vector<int>& idx) {
  cxvec out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) out(i) = full(idx[i]);
  return out;
}

cxmat restrict_to(const cxmat& full, const std::vector<int>& rows,
                  const std::vector<int>& cols) {
  cxmat out(static_cast<Eigen::Index>(rows.size()),
            static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      out(i, j) = full(rows[i], cols[j]);
  return out;
}

UniqueWord finish_uw(UwKind kind, cxvec x_u, const CarrierMaps& maps,
                     const SystemConfig& cfg, double energy) {
  if (kind != UwKind::zero) {
    const double have = x_u.squaredNorm();
    if (have <= 0.0)
      throw std::invalid_argument("make_uw: zero-energy unique word samples");
    const double want = energy < 0.0 ? static_cast<double>(cfg.n_u) : energy;
    x_u *= std::sqrt(want / have);
  }
  UniqueWord uw;
  uw.kind = kind;
  uw.x_u = std::move(x_u);
  cxvec padded = cxvec::Zero(cfg.n);
  padded.tail(cfg.n_u) = uw.x_u;
  uw.xt = dft_matrix(cfg.n) * padded;
  uw.xt_nz = restrict_to(uw.xt, maps.nonzero);
  uw.xt_z = restrict_to(uw.xt, maps.zero_sorted);
  uw.xt_p = restrict_to(uw.xt, maps.pilot_abs);
  return uw;
}

}  // namespace

UwKind parse_uw_kind(const std::string& name) {
  if (name == "zero") return UwKind::zero;
  if (name == "cazac") return UwKind::cazac;
  if (name == "barker") return UwKind::barker;
  if (name == "custom") return UwKind::custom;
  throw std::invalid_argument("unknown unique-word kind '" + name + "'");
}

std::string uw_kind_name(UwKind kind) {
  switch (kind) {
    case UwKind::zero: return "zero";
    case UwKind::cazac: return "cazac";
    case UwKind::barker: return "barker";
    case UwKind::custom: return "custom";
  }
  throw std::invalid_argument("uw_kind_name: bad kind");
}

UniqueWord make_uw(UwKind kind, const CarrierMaps& maps,
                   const SystemConfig& cfg, double energy) {
  const int n_u = cfg.n_u;
  if (n_u < 1) throw std::invalid_argument("make_uw: n_u must be >= 1");
  cxvec x_u = cxvec::Zero(n_u);
  switch (kind) {
    case UwKind::zero:
      break;
    case UwKind::cazac:
      for (int n = 0; n < n_u; ++n) {
        const double ang =
            -std::numbers::pi * static_cast<double>(n) * n / n_u;
        x_u(n) = std::polar(1.0, ang);
      }
      break;
    case UwKind::barker: {
      static constexpr int kBarker13[13] = {1, 1, 1, 1, 1, -1, -1,
                                            1, 1, -1, 1,  -1, 1};
      if (n_u < 13)
        throw std::invalid_argument("make_uw: barker needs n_u >= 13");
      for (int n = 0; n < 13; ++n) x_u(n) = static_cast<double>(kBarker13[n]);
      break;
    }
    case UwKind::custom:
      throw std::invalid_argument("make_uw: custom kind needs samples, use make_custom_uw");
  }
  return finish_uw(kind, std::move(x_u), maps, cfg, energy);
}

UniqueWord make_custom_uw(const cxvec& samples, const CarrierMaps& maps,
                          const SystemConfig& cfg, double energy) {
  if (samples.size() != cfg.n_u)
    throw std::invalid_argument("make_custom_uw: need exactly n_u samples");
  return finish_uw(UwKind::custom, samples, maps, cfg, energy);
}

cxvec read_uw_file(const std::string& path, int n_u) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_uw_file: cannot open " + path);
  std::vector<cxd> samples;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    double re = 0.0, im = 0.0;
    if (std::sscanf(line.c_str(), " %lf , %lf", &re, &im) != 2)
      throw std::runtime_error("read_uw_file: bad line " +
                               std::to_string(line_no) + " in " + path);
    samples.emplace_back(re, im);
  }
  if (static_cast<int>(samples.size()) != n_u)
    throw std::runtime_error("read_uw_file: expected " + std::to_string(n_u) +
                             " samples, got " + std::to_string(samples.size()));
  cxvec v(n_u);
  for (int i = 0; i < n_u; ++i) v(i) = samples[i];
  return v;
}

cxvec draw_taps_raw(Rng& rng, double tau_rms, const SystemConfig& cfg) {
  if (tau_rms <= 0.0)
    throw std::invalid_argument("draw_taps_raw: tau_rms must be positive");
  cxvec taps(cfg.n_taps);
  for (int m = 0; m < cfg.n_taps; ++m) {
    const double var = std::exp(-m * cfg.t_s / tau_rms);
    taps(m) = std::sqrt(var) * rng.cgaussian();
  }
  return taps;
}

namespace {

ChannelRealization fill_channel(cxvec taps, const CarrierMaps& maps,
                                const SystemConfig& cfg) {
  ChannelRealization chan;
  chan.taps = std::move(taps);
  cxvec padded = cxvec::Zero(cfg.n);
  padded.head(chan.taps.size()) = chan.taps;
  chan.h_full = dft_matrix(cfg.n) * padded;
  chan.h_nz = restrict_to(chan.h_full, maps.nonzero);
  chan.h_z = restrict_to(chan.h_full, maps.zero_sorted);
  chan.h_p = restrict_to(chan.h_full, maps.pilot_abs);
  return chan;
}

}  // namespace

ChannelRealization draw_channel(Rng& rng, double tau_rms,
                                const CarrierMaps& maps,
                                const SystemConfig& cfg) {
  cxvec taps = draw_taps_raw(rng, tau_rms, cfg);
  taps /= taps.norm();
  return fill_channel(std::move(taps), maps, cfg);
}

ChannelRealization channel_from_taps(const cxvec& taps,
                                     const CarrierMaps& maps,
                                     const SystemConfig& cfg) {
  if (taps.size() < 1 || taps.size() > cfg.n)
    throw std::invalid_argument("channel_from_taps: bad tap count");
  return fill_channel(taps, maps, cfg);
}

ChannelRealization awgn_channel(const CarrierMaps& maps,
                                const SystemConfig& cfg) {
  cxvec taps = cxvec::Zero(1);
  taps(0) = 1.0;
  return fill_channel(std::move(taps), maps, cfg);
}

double cfo_psi(double eps, int l, const SystemConfig& cfg) {
  if (l < 0) throw std::invalid_argument("cfo_psi: l must be >= 0");
  // uw mode: symbols of length n follow the burst-leading unique word;
  // cp mode: each symbol's discarded prefix advances the clock as well
  const double offset = cfg.mode == "cp-ofdm"
                            ? static_cast<double>(cfg.n + cfg.n_u) * l + cfg.n_u
                            : static_cast<double>(cfg.n) * l + cfg.n_u;
  return 2.0 * std::numbers::pi * eps * offset / cfg.n;
}

double cfo_phi(double eps, int l, const SystemConfig& cfg) {
  return cfo_psi(eps, l, cfg) +
         std::numbers::pi * eps * (cfg.n - 1.0) / cfg.n;
}

TimeCfo cfo_time_matrix(double eps, int l, const SystemConfig& cfg) {
  if (std::abs(eps) > 0.5)
    throw std::invalid_argument("cfo_time_matrix: |eps| must be <= 0.5");
  TimeCfo out;
  out.psi_l = cfo_psi(eps, l, cfg);
  out.diag.resize(cfg.n);
  for (int n = 0; n < cfg.n; ++n) {
    out.diag(n) =
        std::polar(1.0, out.psi_l + 2.0 * std::numbers::pi * eps * n / cfg.n);
  }
  return out;
}

CfoState cfo_freq_matrix(double eps, int l, const CarrierMaps& maps,
                         const SystemConfig& cfg) {
  if (std::abs(eps) > 0.5)
    throw std::invalid_argument("cfo_freq_matrix: |eps| must be <= 0.5");
  CfoState st;
  st.eps = eps;
  st.l = l;
  st.psi_l = cfo_psi(eps, l, cfg);
  st.phi_l = cfo_phi(eps, l, cfg);
  st.lambda_time_diag = cfo_time_matrix(eps, l, cfg).diag;

  const int n = cfg.n;
  if (eps == 0.0) {
    st.lam_freq_full = cxmat::Identity(n, n);
    st.lam_stat_full = cxmat::Identity(n, n);
  } else {
    st.lam_stat_full.resize(n, n);
    const double pi = std::numbers::pi;
    for (int m = 0; m < n; ++m) {
      for (int k = 0; k < n; ++k) {
        const double x = k - m + eps;
        const double denom = std::sin(pi * x / n);
        double mag;
        if (std::abs(denom) < 1e-14) {
          mag = std::cos(pi * x) / std::cos(pi * x / n);  // x -> multiple of n
        } else {
          mag = std::sin(pi * x) / (n * denom);
        }
        st.lam_stat_full(m, k) =
            mag * std::polar(1.0, pi * (k - m) * (n - 1.0) / n);
      }
    }
    st.lam_freq_full =
        std::polar(1.0, pi * eps * (n - 1.0) / n) * st.lam_stat_full;
  }

  const cxd phase = std::polar(1.0, st.psi_l);
  st.lambda = phase * restrict_to(st.lam_freq_full, maps.nonzero, maps.nonzero);
  st.lambda_zn =
      phase * restrict_to(st.lam_freq_full, maps.nonzero, maps.zero_sorted);
  return st;
}

cxvec assemble_tx_symbol(const cxvec& d, const GeneratorSet& gens,
                         const UniqueWord& uw, const CarrierMaps& maps,
                         const SystemConfig& cfg) {
  if (d.size() != gens.g_d.cols())
    throw std::invalid_argument("assemble_tx_symbol: data length mismatch");
  if (gens.p.size() != gens.g_p.cols())
    throw std::invalid_argument("assemble_tx_symbol: pilot length mismatch");
  const cxvec carriers = gens.g_d * d + gens.g_p * gens.p;
  return idft_matrix(cfg.n) * (maps.b * carriers + uw.xt);
}

namespace {

std::vector<cxvec> receive_impl(const std::vector<cxvec>& data,
                                const GeneratorSet& gens, const UniqueWord& uw,
                                const ChannelRealization& chan, double eps,
                                double noise_var, Rng& rng,
                                const CarrierMaps& maps,
                                const SystemConfig& cfg, bool keep_leakage) {
  const Eigen::Index n_nz = static_cast<Eigen::Index>(maps.nonzero.size());
  if (gens.g_d.rows() != n_nz || gens.g_p.rows() != n_nz)
    throw std::invalid_argument("receive: generator/config size mismatch");
  if (uw.xt_nz.size() != n_nz || chan.h_nz.size() != n_nz)
    throw std::invalid_argument("receive: uw/channel/config size mismatch");

  const CfoState st = cfo_freq_matrix(eps, 0, maps, cfg);
  const cxd unphase = std::polar(1.0, -st.psi_l);
  const cxmat lam_nz = unphase * st.lambda;      // symbol-independent part
  const cxmat lam_zn = unphase * st.lambda_zn;
  const cxvec leak = keep_leakage && uw.xt_z.size() > 0
                         ? cxvec(lam_zn * chan.h_z.cwiseProduct(uw.xt_z))
                         : cxvec(cxvec::Zero(n_nz));

  std::vector<cxvec> out;
  out.reserve(data.size());
  for (std::size_t l = 0; l < data.size(); ++l) {
    const cxvec& d = data[l];
    if (d.size() != gens.g_d.cols())
      throw std::invalid_argument("receive: data length mismatch");
    const cxvec carriers = gens.g_d * d + gens.g_p * gens.p + uw.xt_nz;
    cxvec y = lam_nz * chan.h_nz.cwiseProduct(carriers) + leak;
    y *= std::polar(1.0, cfo_psi(eps, static_cast<int>(l), cfg));
    if (noise_var > 0.0)
      y += std::sqrt(cfg.n * noise_var) * rng.cgaussian_vec(static_cast<int>(n_nz));
    out.push_back(std::move(y));
  }
  return out;
}

}  // namespace

std::vector<cxvec> receive_exact(const std::vector<cxvec>& data,
                                 const GeneratorSet& gens,
                                 const UniqueWord& uw,
                                 const ChannelRealization& chan, double eps,
                                 double noise_var, Rng& rng,
                                 const CarrierMaps& maps,
                                 const SystemConfig& cfg) {
  return receive_impl(data, gens, uw, chan, eps, noise_var, rng, maps, cfg,
                      true);
}

std::vector<cxvec> receive_approx(const std::vector<cxvec>& data,
                                  const GeneratorSet& gens,
                                  const UniqueWord& uw,
                                  const ChannelRealization& chan, double eps,
                                  double noise_var, Rng& rng,
                                  const CarrierMaps& maps,
                                  const SystemConfig& cfg) {
  return receive_impl(data, gens, uw, chan, eps, noise_var, rng, maps, cfg,
                      false);
}

std::vector<ApproxErrorRow> approx_error_powers(const GeneratorSet& gens,
                                                const UniqueWord& uw,
                                                const ChannelRealization& chan,
                                                double eps,
                                                const CarrierMaps& maps,
                                                const SystemConfig& cfg) {
  const Eigen::Index n_nz = static_cast<Eigen::Index>(maps.nonzero.size());
  const CfoState st = cfo_freq_matrix(eps, 0, maps, cfg);
  const cxd unphase = std::polar(1.0, -st.psi_l);
  const cxmat lam_nz = unphase * st.lambda;
  const cxmat lam_zn = unphase * st.lambda_zn;

  const cxvec leak = uw.xt_z.size() > 0
                         ? cxvec(lam_zn * chan.h_z.cwiseProduct(uw.xt_z))
                         : cxvec(cxvec::Zero(n_nz));
  const cxvec known =
      lam_nz * chan.h_nz.cwiseProduct(cxvec(gens.g_p * gens.p + uw.xt_nz)) +
      leak;
  const cxmat data_path = lam_nz * chan.h_nz.asDiagonal() * gens.g_d;

  std::vector<ApproxErrorRow> rows(static_cast<std::size_t>(n_nz));
  for (Eigen::Index k = 0; k < n_nz; ++k) {
    rows[k].subcarrier = maps.nonzero[k];
    rows[k].sigma2 = std::norm(known(k)) +
                     cfg.sigma_d2 * data_path.row(k).squaredNorm();
    rows[k].sigma2_delta = std::norm(leak(k));
  }
  return rows;
}

}  // namespace uwofdm
