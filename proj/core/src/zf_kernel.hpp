#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace asekit::sim {

// Reusable ZF factorization for one M x K channel; buffers are sized once so
// the simulator's inner loop does not allocate.
//
// With X = (H^H H)^-1 H^H the beams are w_k = x_k^H / |x_k|, and X X^H equals
// (H^H H)^-1, so every gain the simulator needs follows from the Cholesky
// factor of the Gram matrix and the diagonal of its inverse. K is small, so
// the factorization is written out instead of going through Eigen's blocked
// kernels.
class ZfKernel {
 public:
  ZfKernel(int antennas, int users);

  // Keeps a reference to `channel`; it must outlive the gain queries.
  void factor(const Eigen::MatrixXcd& channel);

  // Alternative to factor(): the caller writes the lower Cholesky factor L of
  // the Gram matrix (real positive diagonal) through cholesky(i, j) and then
  // calls adopt_cholesky(). Only whitened_projection_gain is valid afterwards.
  std::complex<double>& cholesky(int i, int j) { return l(i, j); }
  void adopt_cholesky();

  // sum_k |probe^H w_k|^2 over the normalized ZF beams.
  double projection_gain(const Eigen::VectorXcd& probe);
  // Same gain when H^H probe is written as L z: the probe enters only through
  // z, which is CN(0, I) whenever the probe is.
  double whitened_projection_gain(const std::complex<double>* z);
  // |h_k^H w_k|^2 for the channel's own column k, i.e. 1 / [(H^H H)^-1]_kk.
  double own_gain(int user) const { return 1.0 / inv_diag_[user]; }

  // (H^H H)^-1 H^H, K x M.
  Eigen::MatrixXcd pseudo() const;

 private:
  using cd = std::complex<double>;
  cd& l(int i, int j) { return chol_[i * users_ + j]; }
  cd l(int i, int j) const { return chol_[i * users_ + j]; }
  // Solves L L^H x = b in place.
  void solve(cd* b) const;
  void solve_upper(cd* b) const;
  void compute_inverse_diagonal();

  int users_;
  const Eigen::MatrixXcd* channel_ = nullptr;
  std::vector<cd> chol_;  // lower triangle, row major
  std::vector<double> inv_diag_;
  std::vector<cd> work_;
};

}  // namespace asekit::sim
