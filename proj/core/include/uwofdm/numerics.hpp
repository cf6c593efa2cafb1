// Dense complex linear algebra helpers shared by the rest of the library.
#pragma once

#include <Eigen/Dense>
#include <complex>

namespace uwofdm {

using cxd = std::complex<double>;
using cxmat = Eigen::MatrixXcd;
using cxvec = Eigen::VectorXcd;
using rmat = Eigen::MatrixXd;
using rvec = Eigen::VectorXd;

// Forward DFT matrix, entry (k,l) = exp(-j*2*pi*k*l/n).  No 1/n factor.
cxmat dft_matrix(int n);

// Inverse of dft_matrix(n), i.e. (1/n) * dft_matrix(n)^H.
cxmat idft_matrix(int n);

// Moore-Penrose pseudoinverse via SVD; singular values below
// sigma_max * 1e-12 are treated as zero.
cxmat pseudo_inverse(const cxmat& m);

// Four-way split of m at the given row/column boundaries:
//   [ m11 m12 ]   m11 is row_split x col_split.
//   [ m21 m22 ]
struct BlockParts {
  cxmat m11, m12, m21, m22;
};
BlockParts block_partition(const cxmat& m, int row_split, int col_split);

// Wrap an angle to (-pi, pi].
double wrap_pm_pi(double angle);

// Wrap an angle to [0, 2*pi).
double wrap_2pi(double angle);

}  // namespace uwofdm
