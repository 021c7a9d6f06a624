#ifndef MTCP_ESTIMATE_HPP
#define MTCP_ESTIMATE_HPP

#include "mtcp/rank.hpp"

#include <string>
#include <vector>

namespace mtcp {

/// Indices (first, second) of a conjugate pair with a_second = kappa * conj(a_first).
/// `first` carries the eigenvalue with positive imaginary part.
struct ConjugatePair {
  Index first = 0;
  Index second = 0;
  int kappa = 1;
};

struct PairMap {
  std::vector<ConjugatePair> pairs;
  std::vector<Index> reals;
};

/// Fitted CP model: Y_t ~ sum_l x_{t,l} a_l b_l'.
struct CPEstimate {
  Method method = Method::Refined;
  Index d_hat = 0;
  MatrixXcd A;          // p x d_hat, unit columns
  MatrixXcd B;          // q x d_hat, unit columns
  MatrixXcd factors;    // n x d_hat
  VectorXcd eigenvalues;
  PairMap pair_map;
  EstimatorConfig config;
  RankDiagnostics rank;
  bool transposed = false;  // direct method ran on the transposed series
  std::vector<std::string> warnings;
};

}  // namespace mtcp

#endif  // MTCP_ESTIMATE_HPP
