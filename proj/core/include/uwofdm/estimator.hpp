// Receive-side estimation: LMMSE data recovery, pilot extraction, common
// phase error estimation with its affine pilot-offset model, CFO recovery
// and closed-form ICI powers at the pilot positions.
#pragma once

#include <vector>

#include "uwofdm/airlink.hpp"
#include "uwofdm/genmat.hpp"
#include "uwofdm/numerics.hpp"
#include "uwofdm/sysmodel.hpp"

namespace uwofdm {

struct LmmseResult {
  cxvec d_hat;
  cxmat c_ee;  // error covariance
};

// d_hat = (G^H H^H H G + (n*noise_var/sigma_d2) I)^-1 G^H H^H y for the
// known-part-free observation y.  At noise_var == 0 this is the zero-
// forcing limit; a rank-deficient H G then raises std::runtime_error.
LmmseResult lmmse_data_estimate(const cxvec& y, const cxmat& g,
                                const cxvec& h_nz, double noise_var,
                                const SystemConfig& cfg);

// p_hat = E_p H^-1 y over the populated subcarriers.  Channel bins with
// magnitude <= 1e-6 raise std::runtime_error naming the subcarrier.
cxvec extract_pilots(const cxvec& y_down, const ChannelRealization& chan,
                     const CarrierMaps& maps);

// phi_hat = arg(p^H W_p p_hat), wrapped to [0, 2*pi).  W_p is a diagonal
// of non-negative weights; a correlation magnitude below 1e-12 raises
// std::runtime_error ("undefined angle").
double estimate_cpe(const cxvec& p_hat, const cxvec& p, const rvec& w_p);

// Affine model phi_pil(eps) ~= m*eps + q of the pilot-term angle,
// evaluated noiselessly at eps = 0 and eps = 0.1 for the given channel.
struct AffineCpe {
  double m = 0.0;
  double q = 0.0;
};
AffineCpe fit_phi_pil(const GeneratorSet& gens, const UniqueWord& uw,
                      const ChannelRealization& chan, const rvec& w_p,
                      const CarrierMaps& maps, const SystemConfig& cfg);

// phi_hathat = phi_hat - m*eps_hat - q, plain arithmetic, not wrapped.
double compensate_cpe(double phi_hat, double m, double q, double eps_hat);

// Single-shot CFO from the symbol-l CPE estimate:
//   eps_hat = (phi_hat - q) * n / (2*pi*(stride*l + head + (n-1)/2 + n_pil))
// with n_pil = m*n/(2*pi); stride/head follow cfg.mode (n and n_u for
// uw-ofdm, n+n_u and n_u for cp-ofdm).  The difference phi_hat - q is
// wrapped to (-pi, pi], so offset-free accumulated angles beyond half a
// turn (large l or large eps) alias.
double estimate_cfo_from_cpe(double phi_hat, double m, double q,
                             const SystemConfig& cfg, int l = 0);

// CFO from the CPE difference of consecutive symbols spaced n samples:
// eps_hat = wrap_pm_pi(phi_l - phi_lm1) / (2*pi).  The pilot offset
// cancels in the difference.
double estimate_cfo_from_delta(double phi_hat_l, double phi_hat_lm1);

// Mean ICI power seen at the pilot positions from the data layer,
// sigma_d2 * mean_k ||e_k^T H^-1 Lambda_stat H G_d||^2.
double data_ici_power(const cxmat& g_d, const ChannelRealization& chan,
                      double eps, const CarrierMaps& maps,
                      const SystemConfig& cfg);

// Mean ICI power at pilot k from the other pilots' spread spectra,
// deterministic for a fixed pilot vector.
double pilot_ici_power(const cxmat& g_p, const cxvec& p,
                       const ChannelRealization& chan, double eps,
                       const CarrierMaps& maps, const SystemConfig& cfg);

// Aggregate a harness run cares about for one burst.
struct CpeResult {
  std::vector<double> phi_hat;     // raw CPE per symbol, in [0, 2*pi)
  std::vector<double> phi_hathat;  // compensated CPE per symbol
  double m = 0.0;
  double q = 0.0;
  double eps_hat = 0.0;
};

}  // namespace uwofdm
