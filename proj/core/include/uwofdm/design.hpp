// Offline design: numerical optimization of the data generator A_d and
// exhaustive search for the pilot vector of minimum transmit energy.
#pragma once

#include <cstdint>
#include <vector>

#include "uwofdm/numerics.hpp"
#include "uwofdm/sysmodel.hpp"

namespace uwofdm {

struct DescentOptions {
  int max_iters = 5000;
  double tol_rel = 1e-8;     // relative decrease counted as "no progress"
  double step_init = 1.0;
  double backtrack_factor = 0.5;
  std::uint64_t seed = 1;    // consumed by callers that draw a random start
};

struct DescentResult {
  cxmat a_d;
  std::vector<double> costs;  // cost at the start plus each accepted iterate
  bool converged = false;
};

// Sum of the LMMSE error variances over the data symbols at the design
// SNR, for the energy-normalized generator built from a_d.
// Throws std::runtime_error when the zero-word completion of a_d is
// infeasible (singular tail system).
double cost_Jd(const cxmat& a_d, const CarrierMaps& maps,
               const SystemConfig& cfg);

// Exact gradient of cost_Jd at a_d.  Entries are d/dRe + j*d/dIm of the
// cost; with complex_params = false the imaginary part is dropped so the
// direction stays inside the real matrices.
cxmat cost_gradient(const cxmat& a_d, const CarrierMaps& maps,
                    const SystemConfig& cfg, bool complex_params);

// Classical starting point: a permutation that routes the first n_d
// inputs to the non-redundant carriers (ascending) and the rest to the
// redundant ones.
cxmat permutation_init(const CarrierMaps& maps, const SystemConfig& cfg);

// n x n start with standard-normal entries; complex_entries adds an
// independent standard-normal imaginary part.
cxmat random_init(int n, std::uint64_t seed, bool complex_entries);

// Steepest descent on cost_Jd with exact gradients and a grow/backtrack
// step rule.  The parameterization follows the start: a real a0 is kept
// real, a complex a0 is optimized over complex entries.
DescentResult optimize_Ad(const cxmat& a0, const CarrierMaps& maps,
                          const SystemConfig& cfg, const DescentOptions& opts);

struct PilotSearchResult {
  cxvec p;                     // the minimizing pilot vector
  std::vector<int> exponents;  // p_k = exp(j*2*pi*exponents[k]/cardinality)
  double energy = 0.0;         // ||G_p p||^2 at the minimum
  int cardinality = 0;
};

// Exhaustive minimization of ||G_p p||^2 over unit-magnitude pilots drawn
// from the given root-of-unity alphabet.  Ties within 1e-9 resolve to the
// lexicographically smallest exponent tuple.  Throws std::invalid_argument
// when cardinality^n_p exceeds 1e7.
PilotSearchResult optimize_pilots(const cxmat& g_p, int cardinality);

}  // namespace uwofdm
