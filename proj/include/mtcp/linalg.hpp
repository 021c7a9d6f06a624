#ifndef MTCP_LINALG_HPP
#define MTCP_LINALG_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <limits>
#include <numeric>
#include <vector>

namespace mtcp {

using Eigen::Index;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using cplx = std::complex<double>;

namespace linalg {

struct SymmetricSpectrum {
  VectorXd values;   // nonincreasing
  MatrixXd vectors;  // column j pairs with values(j)
};

/// Makes the entry of largest magnitude positive. Ties resolve to the lowest index.
inline void fix_sign(Eigen::Ref<VectorXd> v) {
  Index arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  if (v(arg) < 0.0) v = -v;
}

/// Eigen-decomposition of a symmetric matrix, sorted by eigenvalue descending, with
/// each eigenvector sign-normalised by `fix_sign`.
inline SymmetricSpectrum symmetric_spectrum(const MatrixXd& m) {
  const MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(sym);
  const Index n = sym.rows();
  SymmetricSpectrum out{VectorXd(n), MatrixXd(n, n)};
  // SelfAdjointEigenSolver returns ascending order.
  for (Index j = 0; j < n; ++j) {
    out.values(j) = solver.eigenvalues()(n - 1 - j);
    out.vectors.col(j) = solver.eigenvectors().col(n - 1 - j);
    fix_sign(out.vectors.col(j));
  }
  return out;
}

/// Relative singular-value cutoff max(rows, cols) * eps * sigma_max.
template <typename Derived>
double svd_tolerance(const Eigen::MatrixBase<Derived>& m, double sigma_max) {
  return static_cast<double>(std::max(m.rows(), m.cols())) *
         std::numeric_limits<double>::epsilon() * sigma_max;
}

/// Moore-Penrose inverse via SVD. Works for real and complex dense matrices.
template <typename MatrixT>
MatrixT pinv(const MatrixT& m) {
  using Scalar = typename MatrixT::Scalar;
  Eigen::JacobiSVD<MatrixT> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  const double tol = svd_tolerance(m, smax);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> inv_s(s.size());
  for (Index i = 0; i < s.size(); ++i) inv_s(i) = s(i) > tol ? Scalar(1.0 / s(i)) : Scalar(0.0);
  return svd.matrixV() * inv_s.asDiagonal() * svd.matrixU().adjoint();
}

/// Numerical column rank using the same tolerance as `pinv`.
template <typename MatrixT>
Index numerical_rank(const MatrixT& m) {
  Eigen::JacobiSVD<MatrixT> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  const double tol = svd_tolerance(m, s(0));
  return static_cast<Index>((s.array() > tol).count());
}

/// 2-norm condition number (infinite when singular).
inline double condition_number(const MatrixXd& m) {
  Eigen::JacobiSVD<MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return std::numeric_limits<double>::infinity();
  const double smin = s(s.size() - 1);
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

/// Scales to unit 2-norm and rotates so the entry of largest modulus is real positive.
inline void normalize_phase(Eigen::Ref<VectorXcd> v) {
  const double norm = v.norm();
  if (norm == 0.0) return;
  v /= norm;
  Index arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  const cplx phase = v(arg) / std::abs(v(arg));
  v *= std::conj(phase);
  v(arg) = cplx(v(arg).real(), 0.0);
}

/// Normalises each column to unit 2-norm. Zero columns are left untouched.
template <typename MatrixT>
void normalize_columns(MatrixT& m) {
  for (Index j = 0; j < m.cols(); ++j) {
    const double norm = m.col(j).norm();
    if (norm > 0.0) m.col(j) /= norm;
  }
}

/// Order of complex values by (real, imag) descending.
inline std::vector<Index> lexicographic_descending(const VectorXcd& values) {
  std::vector<Index> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    if (values(a).real() != values(b).real()) return values(a).real() > values(b).real();
    return values(a).imag() > values(b).imag();
  });
  return order;
}

/// Column-major Kronecker product of two vectors: kron(b, a)(i + j*rows(a)) = b(j) * a(i).
template <typename VecA, typename VecB>
auto kron(const VecB& b, const VecA& a) {
  using Scalar = typename VecA::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(a.size() * b.size());
  for (Index j = 0; j < b.size(); ++j) out.segment(j * a.size(), a.size()) = b(j) * a;
  return out;
}

}  // namespace linalg
}  // namespace mtcp

#endif  // MTCP_LINALG_HPP
