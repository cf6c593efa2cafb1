// Generator matrices: the linear maps that place data, redundancy and
// pilots on the subcarriers so every OFDM symbol ends in a zero word.
// Also the archive format used to persist an optimized set to disk.
#pragma once

#include <cstdint>
#include <string>

#include "uwofdm/numerics.hpp"
#include "uwofdm/sysmodel.hpp"

namespace uwofdm {

// Tail-cancelling completion: for M = idft(n) * maps.b * a partitioned at
// row n - n_u and column a.cols() - n_u, returns T = -M22^-1 * M21, the
// unique bottom block making the last n_u time samples of
// idft * b * a * [I; T] * x vanish for every x.
// Throws std::invalid_argument on shape mismatch and std::runtime_error
// when the tail system M22 is singular.
cxmat compute_T(const cxmat& a, const CarrierMaps& maps,
                const SystemConfig& cfg);

// Data generator G_d = B_p * A_d * [I; T_d], shape (n - n_z) x n_d.
// Rows at the pilot positions are structurally zero.
cxmat build_G_d(const cxmat& a_d, const CarrierMaps& maps,
                const SystemConfig& cfg);

// Pilot generator G_p = P_p * [I; T_p] with the minimum-norm tail
// completion T_p (the tail system is wide, solved by pseudoinverse).
cxmat build_G_p(const CarrierMaps& maps, const SystemConfig& cfg);

// Transmit energy of the pilot layer, ||G_p * p||^2.
double pilot_energy(const cxmat& g_p, const cxvec& p);

// Rescales g_d so trace(G_d^H G_d) == alpha * n_d.
cxmat scale_G_d(const cxmat& g_d, const SystemConfig& cfg);

// A ready-to-use generator pair plus the pilot vector they carry.
struct GeneratorSet {
  cxmat g_d;
  cxmat g_p;
  cxvec p;
  double alpha = 0.0;
  std::string mode;
};

// On-disk snapshot of an optimization result.  The header is plain text
// (magic, cfg hash, mode, alpha, matrix dimensions); payload is each
// matrix in header order, row-major, as little-endian complex128 with
// real/imaginary parts interleaved.
struct GeneratorArchive {
  std::uint64_t cfg_hash = 0;
  std::string mode;
  double alpha = 0.0;
  cxmat a_d;
  cxmat g_d;
  cxmat g_p;
  cxvec p;
};

void write_generator_archive(const std::string& path,
                             const GeneratorArchive& archive);

// Throws std::runtime_error on bad magic, truncated payload or
// header/payload disagreement.
GeneratorArchive read_generator_archive(const std::string& path);

}  // namespace uwofdm
