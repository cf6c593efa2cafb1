#include "uwofdm/design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <stdexcept>

#include "uwofdm/rng.hpp"

namespace uwofdm {

namespace {

// Shared state for repeated cost evaluations at fixed cfg.  The cost
// depends on a_d only through W = C_low * a_d (the tail rows of the
// time-domain image) and the resulting normalized Gram matrix, so the
// constant factor C_low is computed once.
struct CostContext {
  int n_d, n_r, n_u;
  double rho;          // N*sigma_n^2 / sigma_d^2 at the design SNR
  double noise_pow;    // N*sigma_n^2
  double energy_ref;   // alpha * n_d
  cxmat c_low;         // n_u x (n_d + n_r)

  explicit CostContext(const CarrierMaps& maps, const SystemConfig& cfg)
      : n_d(cfg.n_d),
        n_r(cfg.n_r),
        n_u(cfg.n_u),
        rho(1.0 / cfg.snr_design),
        noise_pow(cfg.sigma_d2 / cfg.snr_design),
        energy_ref(cfg.alpha() * cfg.n_d) {
    const cxmat full = idft_matrix(cfg.n) * maps.b * maps.b_p;
    c_low = full.bottomRows(cfg.n_u);
  }

  double cost_from_gram(const cxmat& gram, double trace_re) const {
    const double c2 = energy_ref / trace_re;
    cxmat s = c2 * gram;
    s.diagonal().array() += rho;
    Eigen::LLT<cxmat> llt(s);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("cost_Jd: error covariance not positive");
    const cxmat linv =
        llt.matrixL().solve(cxmat::Identity(gram.rows(), gram.cols()));
    return noise_pow * linv.squaredNorm();  // trace of s^-1
  }

  // Everything derived from one iterate that the gradient reuses.
  struct Base {
    cxmat stack;  // (n_d+n_r) x n_d, [I; T]
    cxmat gc;     // (n_d+n_r) x n_d, a_d * [I; T]
    cxmat gram;   // n_d x n_d
    cxmat z;      // (n_d+n_r) square, I - a_d_right * w22^-1 * c_low
    double trace_re = 0.0;
    double cost = 0.0;
  };

  Base eval_base(const cxmat& a) const {
    Base b;
    const cxmat w = c_low * a;
    Eigen::FullPivLU<cxmat> lu(w.rightCols(n_r));
    if (!lu.isInvertible())
      throw std::runtime_error(
          "cost_Jd: tail system is singular, zero word unreachable");
    b.stack.resize(n_d + n_r, n_d);
    b.stack.topRows(n_d) = cxmat::Identity(n_d, n_d);
    b.stack.bottomRows(n_r) = -lu.solve(w.leftCols(n_d));
    b.gc = a * b.stack;
    b.gram = b.gc.adjoint() * b.gc;
    b.trace_re = b.gram.real().trace();
    b.cost = cost_from_gram(b.gram, b.trace_re);
    b.z = -(a.rightCols(n_r) * lu.solve(c_low));
    b.z.diagonal().array() += 1.0;
    return b;
  }

  double cost_plain(const cxmat& a) const {
    const cxmat w = c_low * a;
    Eigen::FullPivLU<cxmat> lu(w.rightCols(n_r));
    if (!lu.isInvertible())
      throw std::runtime_error(
          "cost_Jd: tail system is singular, zero word unreachable");
    const cxmat t = -lu.solve(w.leftCols(n_d));
    cxmat stack(n_d + n_r, n_d);
    stack.topRows(n_d) = cxmat::Identity(n_d, n_d);
    stack.bottomRows(n_r) = t;
    const cxmat gc = a * stack;
    const cxmat gram = gc.adjoint() * gc;
    return cost_from_gram(gram, gram.real().trace());
  }

  // Exact gradient at the iterate described by b.  A perturbation da maps
  // to the candidate as dGc = Z * da * K with K = [I; T]: the zero-word
  // completion reacts to da through T, and Z folds that feedback in.  With
  // S = c2 * Gram + rho*I, M = S^-2 and the trace-renormalization term
  // kappa = tr(M*Gram)/tr(Gram), the differential of the cost is
  //   dJ = 2 * noise_pow * c2 * Re tr((K * Psi^H * Z) da),
  //   Psi = Gc * (kappa*I - M),
  // so the (d/dRe + j*d/dIm) gradient matrix is its conjugate transpose.
  cxmat gradient_at(const Base& b, const cxmat& a, bool complex_params) const {
    const double c2 = energy_ref / b.trace_re;
    cxmat s = c2 * b.gram;
    s.diagonal().array() += rho;
    Eigen::LLT<cxmat> llt(s);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("cost_Jd: error covariance not positive");
    const cxmat sinv = llt.solve(cxmat::Identity(n_d, n_d));
    const cxmat m = llt.solve(sinv);
    const double kappa =
        m.cwiseProduct(b.gram.conjugate()).sum().real() / b.trace_re;
    cxmat weight = -m;
    weight.diagonal().array() += kappa;
    cxmat grad = (2.0 * noise_pow * c2) *
                 (b.z.adjoint() * (b.gc * weight) * b.stack.adjoint());
    if (!complex_params) grad = grad.real().cast<cxd>();
    return grad;
  }
};

}  // namespace

double cost_Jd(const cxmat& a_d, const CarrierMaps& maps,
               const SystemConfig& cfg) {
  const int n_dr = cfg.n_d + cfg.n_r;
  if (a_d.rows() != n_dr || a_d.cols() != n_dr)
    throw std::invalid_argument("cost_Jd: a_d must be (n_d+n_r) square");
  if (!a_d.allFinite())
    throw std::invalid_argument("cost_Jd: a_d has non-finite entries");
  const CostContext ctx(maps, cfg);
  return ctx.cost_plain(a_d);
}

cxmat cost_gradient(const cxmat& a_d, const CarrierMaps& maps,
                    const SystemConfig& cfg, bool complex_params) {
  const int n_dr = cfg.n_d + cfg.n_r;
  if (a_d.rows() != n_dr || a_d.cols() != n_dr)
    throw std::invalid_argument("cost_gradient: a_d must be (n_d+n_r) square");
  if (!a_d.allFinite())
    throw std::invalid_argument("cost_gradient: a_d has non-finite entries");
  const CostContext ctx(maps, cfg);
  return ctx.gradient_at(ctx.eval_base(a_d), a_d, complex_params);
}

cxmat permutation_init(const CarrierMaps& maps, const SystemConfig& cfg) {
  const int n_dr = cfg.n_d + cfg.n_r;
  std::set<int> red(cfg.i_r.begin(), cfg.i_r.end());
  std::vector<int> data_slots, red_slots;
  for (int j = 0; j < n_dr; ++j) {
    const int abs_idx = maps.nonzero[maps.nonpilot_rel[j]];
    (red.count(abs_idx) ? red_slots : data_slots).push_back(j);
  }
  if (static_cast<int>(data_slots.size()) != cfg.n_d)
    throw std::invalid_argument(
        "permutation_init: i_r does not split the non-pilot carriers");
  cxmat p0 = cxmat::Zero(n_dr, n_dr);
  for (int k = 0; k < cfg.n_d; ++k) p0(data_slots[k], k) = 1.0;
  for (int m = 0; m < cfg.n_r; ++m) p0(red_slots[m], cfg.n_d + m) = 1.0;
  return p0;
}

cxmat random_init(int n, std::uint64_t seed, bool complex_entries) {
  if (n <= 0) throw std::invalid_argument("random_init: n must be positive");
  Rng rng(seed);
  cxmat a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double re = rng.gaussian();
      const double im = complex_entries ? rng.gaussian() : 0.0;
      a(i, j) = cxd(re, im);
    }
  }
  return a;
}

DescentResult optimize_Ad(const cxmat& a0, const CarrierMaps& maps,
                          const SystemConfig& cfg,
                          const DescentOptions& opts) {
  const int n_dr = cfg.n_d + cfg.n_r;
  if (a0.rows() != n_dr || a0.cols() != n_dr)
    throw std::invalid_argument("optimize_Ad: a0 must be (n_d+n_r) square");
  if (!a0.allFinite())
    throw std::invalid_argument("optimize_Ad: a0 has non-finite entries");
  if (opts.max_iters < 0 || opts.tol_rel <= 0.0 || opts.step_init <= 0.0 ||
      opts.backtrack_factor <= 0.0 || opts.backtrack_factor >= 1.0)
    throw std::invalid_argument("optimize_Ad: bad options");

  const bool complex_params = a0.imag().cwiseAbs().maxCoeff() > 0.0;
  const CostContext ctx(maps, cfg);

  DescentResult result;
  result.a_d = a0;
  CostContext::Base base = ctx.eval_base(result.a_d);  // throws if infeasible
  result.costs.push_back(base.cost);

  double step = opts.step_init;
  int stalled = 0;
  for (int iter = 0; iter < opts.max_iters; ++iter) {
    const cxmat grad = ctx.gradient_at(base, result.a_d, complex_params);
    const double gnorm = grad.norm();
    if (gnorm == 0.0) {
      result.converged = true;
      break;
    }

    // simple-decrease search along -grad: shrink until the cost drops,
    // grow the memory step after a success
    bool accepted = false;
    double trial_cost = 0.0;
    cxmat trial;
    while (step > 1e-18 * opts.step_init) {
      trial = result.a_d - step * grad;
      bool feasible = true;
      try {
        trial_cost = ctx.cost_plain(trial);
      } catch (const std::runtime_error&) {
        feasible = false;
      }
      if (feasible && std::isfinite(trial_cost) && trial_cost < base.cost) {
        accepted = true;
        break;
      }
      step *= opts.backtrack_factor;
    }
    if (!accepted) {
      result.converged = true;  // no decrease representable along -grad
      break;
    }

    const double rel =
        (base.cost - trial_cost) / std::max(std::abs(trial_cost), 1e-300);
    result.a_d = trial;
    base = ctx.eval_base(result.a_d);
    result.costs.push_back(base.cost);
    step *= 1.5;

    if (rel < opts.tol_rel) {
      if (++stalled >= 5) {
        result.converged = true;
        break;
      }
    } else {
      stalled = 0;
    }
  }
  return result;
}

PilotSearchResult optimize_pilots(const cxmat& g_p, int cardinality) {
  const int n_p = static_cast<int>(g_p.cols());
  if (n_p < 1) throw std::invalid_argument("optimize_pilots: empty generator");
  if (cardinality < 1)
    throw std::invalid_argument("optimize_pilots: cardinality must be >= 1");
  const double combos = std::pow(static_cast<double>(cardinality), n_p);
  if (combos > 1e7)
    throw std::invalid_argument(
        "optimize_pilots: alphabet too large, cardinality^n_p exceeds 1e7");

  const cxmat gram = g_p.adjoint() * g_p;
  std::vector<cxd> roots(cardinality);
  for (int c = 0; c < cardinality; ++c)
    roots[c] = std::polar(1.0, 2.0 * std::numbers::pi * c / cardinality);

  cxvec p(n_p);
  std::vector<int> expo(n_p, 0);
  auto energy_of = [&]() {
    for (int k = 0; k < n_p; ++k) p(k) = roots[expo[k]];
    return p.dot(gram * p).real();  // dot conjugates the left side
  };
  auto advance = [&]() {
    // odometer in lexicographic order, most significant digit first
    for (int k = n_p - 1; k >= 0; --k) {
      if (++expo[k] < cardinality) return true;
      expo[k] = 0;
    }
    return false;
  };

  // pass 1: the minimum energy
  double best = std::numeric_limits<double>::infinity();
  do {
    best = std::min(best, energy_of());
  } while (advance());

  // pass 2: first tuple in lexicographic order within tolerance of it
  std::fill(expo.begin(), expo.end(), 0);
  PilotSearchResult result;
  result.cardinality = cardinality;
  do {
    const double e = energy_of();
    if (e <= best + 1e-9) {
      result.p = p;
      result.exponents = expo;
      result.energy = e;
      return result;
    }
  } while (advance());
  throw std::runtime_error("optimize_pilots: search inconsistency");
}

}  // namespace uwofdm
