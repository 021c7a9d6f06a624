#ifndef MTCP_FACTORS_HPP
#define MTCP_FACTORS_HPP

#include "mtcp/estimate.hpp"

#include <cmath>
#include <vector>

namespace mtcp {

inline constexpr double kPairTolerance = 1e-8;

/// Splits eigenvalue indices into real ones and complex-conjugate pairs.
inline PairMap pair_conjugates(const VectorXcd& eigenvalues, double tol = kPairTolerance) {
  const Index d = eigenvalues.size();
  std::vector<bool> used(static_cast<std::size_t>(d), false);
  PairMap out;
  for (Index l = 0; l < d; ++l) {
    if (used[l]) continue;
    const cplx lambda = eigenvalues(l);
    if (std::abs(lambda.imag()) <= tol * (1.0 + std::abs(lambda))) {
      used[l] = true;
      out.reals.push_back(l);
      continue;
    }
    Index partner = -1;
    double best = tol * (1.0 + std::abs(lambda));
    for (Index k = 0; k < d; ++k) {
      if (k == l || used[k]) continue;
      const double gap = std::abs(lambda - std::conj(eigenvalues(k)));
      if (gap <= best) {
        best = gap;
        partner = k;
      }
    }
    if (partner < 0) {
      throw Error(ErrorKind::UnmatchedComplexEigenvalue,
                  "eigenvalue " + std::to_string(l) + " has no conjugate partner");
    }
    used[l] = used[partner] = true;
    if (lambda.imag() > 0.0) {
      out.pairs.push_back({l, partner, 1});
    } else {
      out.pairs.push_back({partner, l, 1});
    }
  }
  return out;
}

/// Chooses kappa in {-1, 1} minimising |a_second - kappa conj(a_first)|.
inline void assign_kappa(PairMap& map, const MatrixXcd& A) {
  for (auto& pair : map.pairs) {
    const VectorXcd conj_first = A.col(pair.first).conjugate();
    const double plus = (A.col(pair.second) - conj_first).norm();
    const double minus = (A.col(pair.second) + conj_first).norm();
    pair.kappa = minus < plus ? -1 : 1;
  }
}

/// Drops round-off imaginary parts from the loading columns of real eigenvalues.
inline void clean_real_columns(const PairMap& map, MatrixXcd& A, MatrixXcd& B) {
  for (Index l : map.reals) {
    A.col(l) = A.col(l).real().normalized().cast<cplx>();
    B.col(l) = B.col(l).real().normalized().cast<cplx>();
  }
}

/// H = (b_1 (x) a_1, ..., b_d (x) a_d), a (pq) x d matrix.
inline MatrixXcd khatri_rao(const MatrixXcd& A, const MatrixXcd& B) {
  MatrixXcd H(A.rows() * B.rows(), A.cols());
  for (Index l = 0; l < A.cols(); ++l) H.col(l) = linalg::kron(B.col(l), A.col(l));
  return H;
}

/// Factor series x_t = H^+ vec(Y_t), returned as an n x d matrix.
inline MatrixXcd recover_factors(const MatrixSeries& series, const MatrixXcd& A,
                                 const MatrixXcd& B) {
  if (A.rows() != series.p() || B.rows() != series.q() || A.cols() != B.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "loadings do not match the series");
  }
  const MatrixXcd H = khatri_rao(A, B);
  if (linalg::numerical_rank(H) < H.cols()) {
    throw Error(ErrorKind::RankDeficientLoadings, "H = (b (x) a) is rank deficient");
  }
  const MatrixXcd H_pinv = linalg::pinv(H);
  return (H_pinv * series.stacked().cast<cplx>()).transpose();
}

/// Fills `pair_map` (with kappa), tidies real columns and recovers the factors.
inline void finalize_estimate(CPEstimate& est, const MatrixSeries& series,
                              double tol = kPairTolerance) {
  est.pair_map = pair_conjugates(est.eigenvalues, tol);
  clean_real_columns(est.pair_map, est.A, est.B);
  assign_kappa(est.pair_map, est.A);
  est.factors = recover_factors(series, est.A, est.B);
  for (Index l : est.pair_map.reals) {
    const double scale = 1.0 + est.factors.col(l).cwiseAbs().maxCoeff();
    if (est.factors.col(l).imag().cwiseAbs().maxCoeff() <= tol * scale) {
      est.factors.col(l) = est.factors.col(l).real().cast<cplx>();
    }
  }
}

/// sum_l x_l a_l b_l' for a single vector of factor values.
inline MatrixXcd reconstruct(const MatrixXcd& A, const MatrixXcd& B, const VectorXcd& x) {
  return A * x.asDiagonal() * B.transpose();
}

/// Real part of the in-sample fit, with the residual imaginary part checked.
inline MatrixSeries fitted_series(const CPEstimate& est, double tol = 1e-8) {
  const Index p = est.A.rows();
  const Index q = est.B.rows();
  MatrixXd out(p * q, est.factors.rows());
  for (Index t = 0; t < est.factors.rows(); ++t) {
    const MatrixXcd y = reconstruct(est.A, est.B, est.factors.row(t).transpose());
    const double bound = tol * (1.0 + y.real().cwiseAbs().maxCoeff());
    if (y.imag().cwiseAbs().maxCoeff() > bound) {
      throw Error(ErrorKind::ResidualImaginaryPart, "fitted slice is not real");
    }
    out.col(t) = y.real().reshaped();
  }
  return MatrixSeries(p, q, std::move(out), 1);
}

/// How each realified column maps back to the complex factors.
struct RealifiedTerm {
  enum class Kind { Real, Pair };
  Kind kind = Kind::Real;
  Index factor = 0;    // l (or l_j for a pair)
  Index partner = -1;  // l~_j for a pair
  Index column = 0;    // real column (Re part for a pair)
  Index imag_column = -1;
};

struct RealifiedFactors {
  MatrixXd series;  // n x d_hat, columns: reals first, then (Re, Im) per pair
  std::vector<RealifiedTerm> terms;
  Index d_hat = 0;
};

inline constexpr double kRealColumnTolerance = 1e-6;

/// Real factors as-is and each conjugate pair as its (Re, Im) series; s + 2m = d_hat columns.
inline RealifiedFactors realify(const CPEstimate& est) {
  const Index n = est.factors.rows();
  RealifiedFactors out;
  out.d_hat = est.d_hat;
  out.series.resize(n, est.d_hat);
  Index col = 0;
  for (Index l : est.pair_map.reals) {
    const auto x = est.factors.col(l);
    const double scale = 1.0 + x.real().cwiseAbs().maxCoeff();
    if (x.imag().cwiseAbs().maxCoeff() > kRealColumnTolerance * scale) {
      throw Error(ErrorKind::ResidualImaginaryPart,
                  "factor " + std::to_string(l) + " should be real");
    }
    out.series.col(col) = x.real();
    out.terms.push_back({RealifiedTerm::Kind::Real, l, -1, col, -1});
    ++col;
  }
  for (const auto& pair : est.pair_map.pairs) {
    out.series.col(col) = est.factors.col(pair.first).real();
    out.series.col(col + 1) = est.factors.col(pair.first).imag();
    out.terms.push_back({RealifiedTerm::Kind::Pair, pair.first, pair.second, col, col + 1});
    col += 2;
  }
  if (col != est.d_hat) {
    throw Error(ErrorKind::DimensionMismatch, "pair map does not cover every factor");
  }
  return out;
}

/// Rebuilds complex factor rows from realified columns (rows are time points).
inline MatrixXcd unrealify(const RealifiedFactors& meta, const MatrixXd& realified) {
  MatrixXcd out(realified.rows(), meta.d_hat);
  for (const auto& term : meta.terms) {
    if (term.kind == RealifiedTerm::Kind::Real) {
      out.col(term.factor) = realified.col(term.column).cast<cplx>();
    } else {
      for (Index t = 0; t < realified.rows(); ++t) {
        const cplx x(realified(t, term.column), realified(t, term.imag_column));
        out(t, term.factor) = x;
        out(t, term.partner) = std::conj(x);
      }
    }
  }
  return out;
}

}  // namespace mtcp

#endif  // MTCP_FACTORS_HPP
