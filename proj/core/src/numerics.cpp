#include "uwofdm/numerics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace uwofdm {

cxmat dft_matrix(int n) {
  if (n <= 0) throw std::invalid_argument("dft_matrix: n must be positive");
  cxmat f(n, n);
  const double base = -2.0 * std::numbers::pi / static_cast<double>(n);
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      // reduce k*l mod n so the argument stays small and the roots of unity
      // are computed identically wherever they repeat
      const long long r = (static_cast<long long>(k) * l) % n;
      f(k, l) = std::polar(1.0, base * static_cast<double>(r));
    }
  }
  return f;
}

cxmat idft_matrix(int n) {
  cxmat f = dft_matrix(n);
  return f.adjoint() / static_cast<double>(n);
}

cxmat pseudo_inverse(const cxmat& m) {
  if (m.size() == 0) throw std::invalid_argument("pseudo_inverse: empty matrix");
  Eigen::JacobiSVD<cxmat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cutoff = sv.size() > 0 ? sv(0) * 1e-12 : 0.0;
  Eigen::VectorXd inv_sv = Eigen::VectorXd::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) inv_sv(i) = 1.0 / sv(i);
  }
  return svd.matrixV() * inv_sv.asDiagonal() * svd.matrixU().adjoint();
}

BlockParts block_partition(const cxmat& m, int row_split, int col_split) {
  if (row_split < 0 || row_split > m.rows() || col_split < 0 ||
      col_split > m.cols()) {
    throw std::invalid_argument("block_partition: split outside matrix");
  }
  BlockParts parts;
  const Eigen::Index rs = row_split, cs = col_split;
  parts.m11 = m.topLeftCorner(rs, cs);
  parts.m12 = m.topRightCorner(rs, m.cols() - cs);
  parts.m21 = m.bottomLeftCorner(m.rows() - rs, cs);
  parts.m22 = m.bottomRightCorner(m.rows() - rs, m.cols() - cs);
  return parts;
}

double wrap_pm_pi(double angle) {
  const double two_pi = 2.0 * std::numbers::pi;
  double a = std::fmod(angle, two_pi);
  if (a > std::numbers::pi) a -= two_pi;
  if (a <= -std::numbers::pi) a += two_pi;
  return a;
}

double wrap_2pi(double angle) {
  const double two_pi = 2.0 * std::numbers::pi;
  double a = std::fmod(angle, two_pi);
  if (a < 0.0) a += two_pi;
  return a;
}

}  // namespace uwofdm
