#include "isocurv/tabulated.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "isocurv/errors.hpp"

namespace isocurv {
namespace {

std::vector<TableSample> sample_sqrt(double a, double b, int n) {
  std::vector<TableSample> out;
  for (int i = 0; i <= n; ++i) {
    const double z = a + (b - a) * i / n;
    out.push_back({z, std::sqrt(z), 0.5 / std::sqrt(z)});
  }
  return out;
}

TEST(Tabulated, ReproducesNodesExactly) {
  const auto rows = sample_sqrt(1, 4, 30);
  const TabulatedFunction fn(rows);
  for (const auto& r : rows) {
    const auto v = fn.evaluate(r.z);
    EXPECT_DOUBLE_EQ(v.g, r.g);
    EXPECT_DOUBLE_EQ(v.dg, r.dg);
  }
  EXPECT_EQ(fn.limited_slopes(), 0u);
}

TEST(Tabulated, ConvergesBetweenNodes) {
  const TabulatedFunction coarse(sample_sqrt(1, 4, 30));
  const TabulatedFunction fine(sample_sqrt(1, 4, 300));
  double coarse_err = 0, fine_err = 0;
  for (double z = 1.013; z < 4; z += 0.0371) {
    coarse_err = std::max(coarse_err, std::abs(coarse.evaluate(z).d2g + 0.25 * std::pow(z, -1.5)));
    fine_err = std::max(fine_err, std::abs(fine.evaluate(z).d2g + 0.25 * std::pow(z, -1.5)));
    EXPECT_NEAR(fine.evaluate(z).g, std::sqrt(z), 1e-10);
  }
  EXPECT_LT(fine_err, coarse_err / 5);
}

TEST(Tabulated, DecreasingInputIsReversed) {
  auto rows = sample_sqrt(1, 2, 10);
  std::reverse(rows.begin(), rows.end());
  const TabulatedFunction fn(rows);
  EXPECT_DOUBLE_EQ(fn.z_min(), 1.0);
  EXPECT_DOUBLE_EQ(fn.z_max(), 2.0);
}

TEST(Tabulated, RejectsBadTables) {
  EXPECT_THROW(TabulatedFunction({{0, 0, 1}}), DomainError);
  EXPECT_THROW(TabulatedFunction({{0, 0, 1}, {1, 1, 1}, {0.5, 0.5, 1}}), DomainError);
  const TabulatedFunction fn(sample_sqrt(1, 2, 4));
  EXPECT_THROW(fn.evaluate(0.99), DomainError);
  EXPECT_THROW(fn.evaluate(2.01), DomainError);
}

TEST(Tabulated, LimiterKeepsMonotoneDataMonotone) {
  // A step: slopes that overshoot are pulled back.
  const TabulatedFunction fn({{0, 0, 0}, {1, 0, 5}, {2, 1, 5}, {3, 1, 0}});
  EXPECT_GT(fn.limited_slopes(), 0u);
  double prev = -1;
  for (double z = 0; z <= 3; z += 0.01) {
    const double g = fn.evaluate(z).g;
    EXPECT_GE(g, prev - 1e-15);
    EXPECT_GE(g, -1e-15);
    EXPECT_LE(g, 1 + 1e-15);
    prev = g;
  }
}

TEST(Tabulated, CsvRoundTripIsExact) {
  const auto rows = sample_sqrt(1, 3, 7);
  std::stringstream buf;
  write_table(buf, rows);
  EXPECT_EQ(buf.str().substr(0, 7), "z,g,dg\n");
  const auto back = read_table(buf);
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(back[i].z, rows[i].z);
    EXPECT_EQ(back[i].g, rows[i].g);
    EXPECT_EQ(back[i].dg, rows[i].dg);
  }
}

}  // namespace
}  // namespace isocurv
