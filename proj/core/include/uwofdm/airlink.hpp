// Physical-layer path: unique words, transmit assembly, the multipath
// channel, and carrier-frequency-offset effects in time and frequency,
// including exact and approximate receive models.
#pragma once

#include <string>
#include <vector>

#include "uwofdm/genmat.hpp"
#include "uwofdm/numerics.hpp"
#include "uwofdm/rng.hpp"
#include "uwofdm/sysmodel.hpp"

namespace uwofdm {

enum class UwKind { zero, cazac, barker, custom };

UwKind parse_uw_kind(const std::string& name);
std::string uw_kind_name(UwKind kind);

// A unique word with its frequency-domain image and the restrictions the
// receive models need.
struct UniqueWord {
  UwKind kind = UwKind::zero;
  cxvec x_u;     // time samples, length n_u
  cxvec xt;      // frequency image of [0; x_u], length n
  cxvec xt_nz;   // entries at the populated subcarriers
  cxvec xt_z;    // entries at the zero subcarriers (ascending)
  cxvec xt_p;    // entries at the pilot subcarriers (ascending)
};

// Builds a unique word.  Non-zero kinds are scaled to the given total
// energy; energy < 0 selects the default ||x_u||^2 = n_u (unit average
// sample power).  The barker kind is the length-13 sequence placed in the
// first entries with a zero tail and needs n_u >= 13.
UniqueWord make_uw(UwKind kind, const CarrierMaps& maps,
                   const SystemConfig& cfg, double energy = -1.0);

// Custom unique word from caller-supplied samples (length n_u); scaled to
// the requested energy like the built-in kinds.  Zero-energy samples are
// rejected (use UwKind::zero for an absent unique word).
UniqueWord make_custom_uw(const cxvec& samples, const CarrierMaps& maps,
                          const SystemConfig& cfg, double energy = -1.0);

// Parses a custom unique-word file: text, one sample per line as "re,im".
// Blank lines and lines starting with '#' are skipped.
cxvec read_uw_file(const std::string& path, int n_u);

// One multipath draw with its frequency-domain restrictions.
struct ChannelRealization {
  cxvec taps;    // impulse response, length cfg.n_taps
  cxvec h_full;  // DFT of zero-padded taps, length n
  cxvec h_nz;    // response at the populated subcarriers
  cxvec h_z;     // response at the zero subcarriers (ascending)
  cxvec h_p;     // response at the pilot subcarriers (ascending)
};

// Unnormalized profile draw: tap m ~ CN(0, exp(-m*t_s/tau_rms)).
// draw_channel scales the result; this stays public so statistics of the
// raw profile can be checked without the per-draw normalization bias.
cxvec draw_taps_raw(Rng& rng, double tau_rms, const SystemConfig& cfg);

// Exponentially decaying multipath channel, normalized to unit energy.
ChannelRealization draw_channel(Rng& rng, double tau_rms,
                                const CarrierMaps& maps,
                                const SystemConfig& cfg);

// Wraps existing taps (no normalization), deriving frequency responses.
ChannelRealization channel_from_taps(const cxvec& taps,
                                     const CarrierMaps& maps,
                                     const SystemConfig& cfg);

// Flat (AWGN) channel: single unit tap.
ChannelRealization awgn_channel(const CarrierMaps& maps,
                                const SystemConfig& cfg);

// Accumulated phase at the start of symbol l's DFT window.  uw-ofdm
// symbols sit behind the burst-leading unique word; cp-ofdm symbols each
// carry a discarded prefix of length n_u.
double cfo_psi(double eps, int l, const SystemConfig& cfg);

// Common phase error of symbol l: psi_l plus half a window of rotation.
double cfo_phi(double eps, int l, const SystemConfig& cfg);

// Time-domain CFO rotation for symbol l.
struct TimeCfo {
  cxvec diag;    // entries e^{j psi_l} e^{j 2 pi eps n / n}, n = 0..N-1
  double psi_l = 0.0;
};
TimeCfo cfo_time_matrix(double eps, int l, const SystemConfig& cfg);

// Frequency-domain CFO state.  lam_freq_full is the symbol-independent
// inter-carrier mixing matrix (the full rotation for symbol l is
// e^{j psi_l} times it); lam_stat_full additionally strips the common
// phase e^{j pi eps (n-1)/n}.  lambda and lambda_zn are the restrictions
// the receive models use and include the e^{j psi_l} factor.
struct CfoState {
  double eps = 0.0;
  int l = 0;
  double psi_l = 0.0;
  double phi_l = 0.0;
  cxvec lambda_time_diag;
  cxmat lam_freq_full;   // n x n
  cxmat lam_stat_full;   // n x n
  cxmat lambda;          // populated rows x populated cols, incl. e^{j psi}
  cxmat lambda_zn;       // populated rows x zero cols, incl. e^{j psi}
};
CfoState cfo_freq_matrix(double eps, int l, const CarrierMaps& maps,
                         const SystemConfig& cfg);

// Transmit symbol: idft(n) * (B (G_d d + G_p p)) plus the unique word in
// the tail.  The zero-word property of the generators makes the last n_u
// samples equal x_u.
cxvec assemble_tx_symbol(const cxvec& d, const GeneratorSet& gens,
                         const UniqueWord& uw, const CarrierMaps& maps,
                         const SystemConfig& cfg);

// Down-selected receive vectors (populated subcarriers) for a burst of
// per-symbol data vectors, exact model: channel and CFO mixing applied to
// both the populated carriers and the unique-word content parked on the
// zero carriers.  Noise ~ CN(0, n*noise_var I) is added when
// noise_var > 0 (rng is untouched otherwise).
std::vector<cxvec> receive_exact(const std::vector<cxvec>& data,
                                 const GeneratorSet& gens,
                                 const UniqueWord& uw,
                                 const ChannelRealization& chan, double eps,
                                 double noise_var, Rng& rng,
                                 const CarrierMaps& maps,
                                 const SystemConfig& cfg);

// Same model with the zero-carrier leakage term dropped.
std::vector<cxvec> receive_approx(const std::vector<cxvec>& data,
                                  const GeneratorSet& gens,
                                  const UniqueWord& uw,
                                  const ChannelRealization& chan, double eps,
                                  double noise_var, Rng& rng,
                                  const CarrierMaps& maps,
                                  const SystemConfig& cfg);

// Per-subcarrier signal power and neglected-term power of the exact
// receive model, noiseless, expectation over unit-variance data.
struct ApproxErrorRow {
  int subcarrier = 0;        // absolute index
  double sigma2 = 0.0;       // E|y_k|^2
  double sigma2_delta = 0.0; // |(Lambda_zn H_z x_uz)_k|^2
};
std::vector<ApproxErrorRow> approx_error_powers(const GeneratorSet& gens,
                                                const UniqueWord& uw,
                                                const ChannelRealization& chan,
                                                double eps,
                                                const CarrierMaps& maps,
                                                const SystemConfig& cfg);

}  // namespace uwofdm
