#include "uwofdm/estimator.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace uwofdm {

namespace {

// Pilot rows of H^-1 Lambda_stat H over the populated subcarriers:
// row k = (Lambda_stat row at pilot k) .* h_nz / h_nz[pilot k].
cxmat pilot_mixing_rows(const ChannelRealization& chan, double eps,
                        const CarrierMaps& maps, const SystemConfig& cfg) {
  const Eigen::Index n_nz = static_cast<Eigen::Index>(maps.nonzero.size());
  const int n_p = static_cast<int>(maps.pilot_rel.size());
  const CfoState st = cfo_freq_matrix(eps, 0, maps, cfg);
  cxmat rows(n_p, n_nz);
  for (int k = 0; k < n_p; ++k) {
    const int pk = maps.pilot_rel[k];
    const cxd h_pk = chan.h_nz(pk);
    if (std::abs(h_pk) <= 1e-6)
      throw std::runtime_error(
          "pilot mixing: channel null at subcarrier " +
          std::to_string(maps.nonzero[pk]));
    for (Eigen::Index j = 0; j < n_nz; ++j) {
      rows(k, j) = st.lam_stat_full(maps.nonzero[pk], maps.nonzero[j]) *
                   chan.h_nz(j) / h_pk;
    }
  }
  return rows;
}

}  // namespace

LmmseResult lmmse_data_estimate(const cxvec& y, const cxmat& g,
                                const cxvec& h_nz, double noise_var,
                                const SystemConfig& cfg) {
  if (y.size() != g.rows() || h_nz.size() != g.rows())
    throw std::invalid_argument("lmmse_data_estimate: size mismatch");
  if (noise_var < 0.0)
    throw std::invalid_argument("lmmse_data_estimate: negative noise power");

  const cxmat hg = h_nz.asDiagonal() * g;
  cxmat normal = hg.adjoint() * hg;
  const double load = cfg.n * noise_var / cfg.sigma_d2;
  normal.diagonal().array() += load;

  Eigen::FullPivLU<cxmat> lu(normal);
  if (!lu.isInvertible())
    throw std::runtime_error(
        "lmmse_data_estimate: normal matrix singular (rank-deficient H G at "
        "zero noise)");

  LmmseResult out;
  out.d_hat = lu.solve(hg.adjoint() * y);
  out.c_ee = cfg.n * noise_var * lu.inverse();
  return out;
}

cxvec extract_pilots(const cxvec& y_down, const ChannelRealization& chan,
                     const CarrierMaps& maps) {
  if (y_down.size() != chan.h_nz.size() ||
      y_down.size() != static_cast<Eigen::Index>(maps.nonzero.size()))
    throw std::invalid_argument("extract_pilots: size mismatch");
  for (Eigen::Index j = 0; j < chan.h_nz.size(); ++j) {
    if (std::abs(chan.h_nz(j)) <= 1e-6)
      throw std::runtime_error("extract_pilots: channel null at subcarrier " +
                               std::to_string(maps.nonzero[j]));
  }
  const int n_p = static_cast<int>(maps.pilot_rel.size());
  cxvec p_hat(n_p);
  for (int k = 0; k < n_p; ++k) {
    const int pk = maps.pilot_rel[k];
    p_hat(k) = y_down(pk) / chan.h_nz(pk);
  }
  return p_hat;
}

double estimate_cpe(const cxvec& p_hat, const cxvec& p, const rvec& w_p) {
  if (p_hat.size() != p.size() || w_p.size() != p.size())
    throw std::invalid_argument("estimate_cpe: size mismatch");
  if ((w_p.array() < 0.0).any())
    throw std::invalid_argument("estimate_cpe: weights must be non-negative");
  cxd corr = 0.0;
  for (Eigen::Index k = 0; k < p.size(); ++k)
    corr += w_p(k) * std::conj(p(k)) * p_hat(k);
  if (std::abs(corr) < 1e-12)
    throw std::runtime_error("estimate_cpe: undefined angle (zero correlation)");
  return wrap_2pi(std::arg(corr));
}

AffineCpe fit_phi_pil(const GeneratorSet& gens, const UniqueWord& uw,
                      const ChannelRealization& chan, const rvec& w_p,
                      const CarrierMaps& maps, const SystemConfig& cfg) {
  const int n_p = static_cast<int>(maps.pilot_rel.size());
  if (gens.p.size() != n_p || w_p.size() != n_p)
    throw std::invalid_argument("fit_phi_pil: size mismatch");

  // noiseless, data-free pilot term: own-pilot passthrough plus the
  // unique word's contribution, per pilot position
  auto angle_at = [&](double eps) {
    const cxmat rows = pilot_mixing_rows(chan, eps, maps, cfg);
    cxd acc = 0.0;
    for (int k = 0; k < n_p; ++k) {
      const cxd own = (rows.row(k) * gens.g_p.col(k))(0, 0) *
                      std::norm(gens.p(k));
      const cxd from_uw =
          (rows.row(k) * uw.xt_nz)(0, 0) * std::conj(gens.p(k));
      acc += w_p(k) * (own + from_uw);
    }
    if (std::abs(acc) < 1e-12)
      throw std::runtime_error("fit_phi_pil: undefined angle");
    return std::arg(acc);
  };

  AffineCpe fit;
  fit.q = angle_at(0.0);
  fit.m = wrap_pm_pi(angle_at(0.1) - fit.q) / 0.1;
  return fit;
}

double compensate_cpe(double phi_hat, double m, double q, double eps_hat) {
  return phi_hat - m * eps_hat - q;
}

double estimate_cfo_from_cpe(double phi_hat, double m, double q,
                             const SystemConfig& cfg, int l) {
  if (l < 0) throw std::invalid_argument("estimate_cfo_from_cpe: l >= 0");
  const double two_pi = 2.0 * std::numbers::pi;
  const double n_pil = m * cfg.n / two_pi;
  const double stride =
      cfg.mode == "cp-ofdm" ? static_cast<double>(cfg.n + cfg.n_u) : cfg.n;
  const double denom = stride * l + cfg.n_u + (cfg.n - 1.0) / 2.0 + n_pil;
  // phi_hat arrives as the [0, 2*pi) representative of an angle whose
  // offset-free part can be slightly negative (q spans (-pi, pi] across
  // channels), so take the branch nearest to zero.
  return wrap_pm_pi(phi_hat - q) * cfg.n / (two_pi * denom);
}

double estimate_cfo_from_delta(double phi_hat_l, double phi_hat_lm1) {
  return wrap_pm_pi(phi_hat_l - phi_hat_lm1) / (2.0 * std::numbers::pi);
}

double data_ici_power(const cxmat& g_d, const ChannelRealization& chan,
                      double eps, const CarrierMaps& maps,
                      const SystemConfig& cfg) {
  if (eps == 0.0) return 0.0;
  const cxmat rows = pilot_mixing_rows(chan, eps, maps, cfg);
  const cxmat leaked = rows * g_d;  // n_p x n_d
  return cfg.sigma_d2 * leaked.squaredNorm() / rows.rows();
}

double pilot_ici_power(const cxmat& g_p, const cxvec& p,
                       const ChannelRealization& chan, double eps,
                       const CarrierMaps& maps, const SystemConfig& cfg) {
  if (g_p.cols() != p.size())
    throw std::invalid_argument("pilot_ici_power: size mismatch");
  if (eps == 0.0) return 0.0;
  const cxmat rows = pilot_mixing_rows(chan, eps, maps, cfg);
  const int n_p = static_cast<int>(p.size());
  double acc = 0.0;
  for (int k = 0; k < n_p; ++k) {
    cxvec others = cxvec::Zero(g_p.rows());
    for (int m = 0; m < n_p; ++m) {
      if (m != k) others += g_p.col(m) * p(m);
    }
    acc += std::norm((rows.row(k) * others)(0, 0));
  }
  return acc / n_p;
}

}  // namespace uwofdm
