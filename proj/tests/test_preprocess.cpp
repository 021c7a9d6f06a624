#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace mtcp;

TEST(Standardize, HandEvaluatedScalarSeries) {
  const StandardizedSeries st = standardize(helpers::scalar_series({1.0, 2.0, 3.0}));
  const double sd = std::sqrt(2.0 / 3.0);  // divisor n
  EXPECT_DOUBLE_EQ(st.means(0, 0), 2.0);
  EXPECT_NEAR(st.sds(0, 0), sd, 1e-15);
  EXPECT_NEAR(st.series(0, 0, 0), -1.0 / sd, 1e-12);
  EXPECT_NEAR(st.series(0, 0, 1), 0.0, 1e-15);
  EXPECT_NEAR(st.series(0, 0, 2), 1.0 / sd, 1e-12);
}

TEST(Standardize, IdempotentOnStandardizedInput) {
  const StandardizedSeries once = standardize(helpers::random_series(3, 4, 50, 3));
  const StandardizedSeries twice = standardize(once.series);
  EXPECT_LE((twice.series.stacked() - once.series.stacked()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE(twice.means.cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((twice.sds.array() - 1.0).abs().maxCoeff(), 1e-12);
}

TEST(Standardize, ConstantComponentIsZeroVariance) {
  MatrixXd data = helpers::random_series(2, 2, 10, 1).stacked();
  data.row(2).setConstant(4.0);
  try {
    standardize(MatrixSeries(2, 2, data));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroVariance);
  }
}

TEST(Standardize, DestandardizeInverts) {
  const MatrixSeries s = helpers::random_series(2, 3, 20, 8);
  const StandardizedSeries st = standardize(s);
  const MatrixXd back = destandardize(MatrixXd(st.series.slice(5)), st.means, st.sds);
  EXPECT_LE((back - MatrixXd(s.slice(5))).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Impute, WeightedPredecessors) {
  const MatrixSeries s = helpers::scalar_series({30.0, 20.0, 10.0, 0.0});
  SeriesMask mask(1, 1, 4);
  mask.set(0, 0, 3);
  EXPECT_DOUBLE_EQ(impute_missing(s, mask)(0, 0, 3), 17.0);
}

TEST(Impute, NoMaskIsIdentity) {
  const MatrixSeries s = helpers::random_series(2, 2, 6, 2);
  EXPECT_EQ(impute_missing(s, SeriesMask(2, 2, 6)).stacked(), s.stacked());
}

TEST(Impute, ConsecutiveGapsUseImputedValues) {
  const MatrixSeries s = helpers::scalar_series({30.0, 20.0, 10.0, 0.0, 0.0});
  SeriesMask mask(1, 1, 5);
  mask.set(0, 0, 3);
  mask.set(0, 0, 4);
  const MatrixSeries out = impute_missing(s, mask);
  EXPECT_DOUBLE_EQ(out(0, 0, 4), 0.5 * 17.0 + 0.3 * 10.0 + 0.2 * 20.0);
}

TEST(Impute, EarlyGapHasInsufficientHistory) {
  const MatrixSeries s = helpers::scalar_series({1.0, 2.0, 3.0, 4.0});
  SeriesMask mask(1, 1, 4);
  mask.set(0, 0, 1);
  try {
    impute_missing(s, mask);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InsufficientHistory);
  }
}
