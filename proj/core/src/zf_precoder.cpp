#include <cmath>
#include <string>

#include "asekit/errors.hpp"
#include "asekit/mc_sim.hpp"
#include "zf_kernel.hpp"

namespace asekit::sim {
namespace {

// conj(a) * b accumulated in plain real arithmetic; std::complex products
// carry NaN-recovery branches that dominate these short loops.
inline std::complex<double> conj_dot(const std::complex<double>* a,
                                     const std::complex<double>* b, Eigen::Index n) {
  double re = 0.0;
  double im = 0.0;
  for (Eigen::Index r = 0; r < n; ++r) {
    const double ar = a[r].real(), ai = a[r].imag();
    const double br = b[r].real(), bi = b[r].imag();
    re += ar * br + ai * bi;
    im += ar * bi - ai * br;
  }
  return {re, im};
}

inline std::complex<double> mul(std::complex<double> a, std::complex<double> b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

inline std::complex<double> conj_mul(std::complex<double> a, std::complex<double> b) {
  return {a.real() * b.real() + a.imag() * b.imag(), a.real() * b.imag() - a.imag() * b.real()};
}

}  // namespace

ZfKernel::ZfKernel(int /*antennas*/, int users)
    : users_(users), chol_(users * users), inv_diag_(users), work_(users) {}

void ZfKernel::factor(const Eigen::MatrixXcd& channel) {
  channel_ = &channel;
  const int k = users_;
  const Eigen::Index m = channel.rows();
  // Lower triangle of H^H H.
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j <= i; ++j) {
      l(i, j) = conj_dot(channel.col(i).data(), channel.col(j).data(), m);
    }
  }
  double max_pivot = 0.0;
  for (int j = 0; j < k; ++j) {
    double d = l(j, j).real();
    for (int p = 0; p < j; ++p) d -= std::norm(l(j, p));
    max_pivot = std::max(max_pivot, d);
    // A vanishing pivot relative to the largest means numerically rank deficient.
    if (!(d > 1e-24 * max_pivot) || !(d > 0.0)) {
      throw DomainError("zf_precoder: channel matrix is not full column rank");
    }
    const double root = std::sqrt(d);
    l(j, j) = root;
    for (int i = j + 1; i < k; ++i) {
      cd s = l(i, j);
      for (int p = 0; p < j; ++p) s -= conj_mul(l(j, p), l(i, p));
      l(i, j) = s / root;
    }
  }
  compute_inverse_diagonal();
}

void ZfKernel::adopt_cholesky() {
  channel_ = nullptr;
  for (int j = 0; j < users_; ++j) {
    if (!(l(j, j).real() > 0.0)) throw DomainError("zf kernel: Cholesky pivot must be positive");
  }
  compute_inverse_diagonal();
}

void ZfKernel::compute_inverse_diagonal() {
  const int k = users_;
  // [(H^H H)^-1]_jj is the squared norm of column j of L^-1.
  for (int j = 0; j < k; ++j) {
    double acc = 0.0;
    for (int i = 0; i < k; ++i) work_[i] = 0.0;
    work_[j] = 1.0 / l(j, j).real();
    acc += std::norm(work_[j]);
    for (int i = j + 1; i < k; ++i) {
      cd s{};
      for (int p = j; p < i; ++p) s -= mul(l(i, p), work_[p]);
      work_[i] = s / l(i, i).real();
      acc += std::norm(work_[i]);
    }
    inv_diag_[j] = acc;
  }
}

void ZfKernel::solve(cd* b) const {
  const int k = users_;
  for (int i = 0; i < k; ++i) {
    cd s = b[i];
    for (int p = 0; p < i; ++p) s -= mul(l(i, p), b[p]);
    b[i] = s / l(i, i).real();
  }
  solve_upper(b);
}

void ZfKernel::solve_upper(cd* b) const {
  const int k = users_;
  for (int i = k - 1; i >= 0; --i) {
    cd s = b[i];
    for (int p = i + 1; p < k; ++p) s -= conj_mul(l(p, i), b[p]);
    b[i] = s / l(i, i).real();
  }
}

double ZfKernel::projection_gain(const Eigen::VectorXcd& probe) {
  const Eigen::Index m = probe.size();
  for (int i = 0; i < users_; ++i) {
    work_[i] = conj_dot(channel_->col(i).data(), probe.data(), m);
  }
  solve(work_.data());
  double gain = 0.0;
  for (int i = 0; i < users_; ++i) gain += std::norm(work_[i]) / inv_diag_[i];
  return gain;
}

double ZfKernel::whitened_projection_gain(const std::complex<double>* z) {
  // (H^H H)^-1 H^H probe = L^-H L^-1 L z = L^-H z.
  for (int i = 0; i < users_; ++i) work_[i] = z[i];
  solve_upper(work_.data());
  double gain = 0.0;
  for (int i = 0; i < users_; ++i) gain += std::norm(work_[i]) / inv_diag_[i];
  return gain;
}

Eigen::MatrixXcd ZfKernel::pseudo() const {
  Eigen::MatrixXcd x = channel_->adjoint();
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    Eigen::VectorXcd col = x.col(c);
    solve(col.data());
    x.col(c) = col;
  }
  return x;
}

Eigen::MatrixXcd zf_precoder(const Eigen::MatrixXcd& channel) {
  if (channel.rows() < channel.cols() || channel.cols() < 1) {
    throw DomainError("zf_precoder: need an M x K channel with 1 <= K <= M, got " +
                      std::to_string(channel.rows()) + " x " + std::to_string(channel.cols()));
  }
  ZfKernel kernel(static_cast<int>(channel.rows()), static_cast<int>(channel.cols()));
  kernel.factor(channel);
  Eigen::MatrixXcd w = kernel.pseudo().adjoint();
  w.colwise().normalize();
  return w;
}

}  // namespace asekit::sim
