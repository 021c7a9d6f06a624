#include "test_support.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using namespace mtcp;

namespace {

constexpr const char* kSmallMts =
    "MTS v1 2 2 3\n"
    "1 2\n3 4\n\n"
    "5 6\n7 8\n\n"
    "9 10\n11 12\n";

}  // namespace

TEST(MtsText, ParsesHeaderAndBlocks) {
  std::istringstream in(kSmallMts);
  const MatrixSeries s = read_mts(in);
  EXPECT_EQ(s.p(), 2);
  EXPECT_EQ(s.q(), 2);
  EXPECT_EQ(s.n(), 3);
  EXPECT_DOUBLE_EQ(s(0, 1, 0), 2.0);
  EXPECT_DOUBLE_EQ(s(1, 0, 0), 3.0);
  EXPECT_DOUBLE_EQ(s(1, 1, 2), 12.0);
}

TEST(CsvLong, SameSeriesAsMts) {
  std::istringstream mts(kSmallMts);
  const MatrixSeries expected = read_mts(mts);
  const std::string path = helpers::temp_path("small.csv");
  {
    std::ofstream out(path);
    write_csv_long(out, expected);
  }
  const MatrixSeries loaded = load_series(path, SeriesFormat::CsvLong);
  EXPECT_EQ(loaded.stacked(), expected.stacked());
}

TEST(CsvLong, RowOrderDoesNotMatter) {
  const std::string path = helpers::temp_path("shuffled.csv");
  {
    std::ofstream out(path);
    out << "t,i,j,value\n";
    for (int t = 3; t >= 1; --t) {
      for (int j = 2; j >= 1; --j) {
        for (int i = 2; i >= 1; --i) out << t << ',' << i << ',' << j << ',' << 100 * t + 10 * i + j << '\n';
      }
    }
  }
  const MatrixSeries s = load_series(path, SeriesFormat::CsvLong);
  EXPECT_DOUBLE_EQ(s(1, 0, 2), 321.0);
  EXPECT_DOUBLE_EQ(s(0, 1, 0), 112.0);
}

TEST(CsvLong, EmptyValueIsMissing) {
  const std::string path = helpers::temp_path("missing.csv");
  {
    std::ofstream out(path);
    out << "t,i,j,value\n1,1,1,1\n2,1,1,2\n3,1,1,3\n4,1,1,\n";
  }
  const MaskedSeries m = load_masked_series(path, SeriesFormat::CsvLong);
  EXPECT_EQ(m.mask.count(), 1u);
  EXPECT_TRUE(m.mask(0, 0, 3));
  EXPECT_THROW(load_series(path, SeriesFormat::CsvLong), Error);
}

TEST(MtsText, InfTokenIsRejected) {
  std::istringstream in("MTS v1 1 1 3\n1\n\ninf\n\n3\n");
  try {
    read_mts(in);
    FAIL() << "expected NonFiniteEntry";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonFiniteEntry);
  }
}

TEST(MtsText, BadHeaderAndShortBlocks) {
  std::istringstream bad_header("MTS v2 1 1 3\n1\n2\n3\n");
  EXPECT_THROW(read_mts(bad_header), Error);
  std::istringstream short_block("MTS v1 2 2 3\n1 2\n3 4\n\n5 6\n");
  EXPECT_THROW(read_mts(short_block), Error);
}

TEST(MtsText, RoundTripIsExact) {
  const MatrixSeries s = helpers::random_series(3, 4, 7, 11);
  std::stringstream buf;
  write_mts(buf, s);
  const MatrixSeries back = read_mts(buf);
  EXPECT_EQ(back.stacked(), s.stacked());
}

TEST(MatrixSeries, TransposedSwapsEverySlice) {
  const MatrixSeries s = helpers::random_series(3, 2, 4, 5);
  const MatrixSeries t = s.transposed();
  ASSERT_EQ(t.p(), 2);
  ASSERT_EQ(t.q(), 3);
  for (Index k = 0; k < s.n(); ++k) EXPECT_EQ(MatrixXd(t.slice(k)), MatrixXd(s.slice(k).transpose()));
}

TEST(MatrixSeries, RejectsTooShortAndNonFinite) {
  EXPECT_THROW(MatrixSeries(2, 2, MatrixXd::Zero(4, 2)), Error);
  MatrixXd bad = MatrixXd::Zero(4, 3);
  bad(1, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(MatrixSeries(2, 2, bad), Error);
  EXPECT_THROW(MatrixSeries(2, 3, MatrixXd::Zero(4, 3)), Error);
}
