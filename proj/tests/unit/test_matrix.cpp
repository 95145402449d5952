#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "stpc/error.hpp"
#include "stpc/linalg.hpp"
#include "stpc/matrix.hpp"

namespace stpc {
namespace {

TEST(Matrix, ConstructionRejectsNonFinite) {
  EXPECT_THROW(Matrix(1, 2, {1.0, std::numeric_limits<double>::quiet_NaN()}),
               NonFiniteValue);
  EXPECT_THROW(Matrix(1, 2, {1.0, std::numeric_limits<double>::infinity()}),
               NonFiniteValue);
  EXPECT_THROW(Matrix(2, 2, {1.0}), DimensionMismatch);
}

TEST(Matrix, ProductAndTransposeTimes) {
  const Matrix a{{1, 2, 3}, {4, 5, 6}};
  const Matrix b{{1, 0}, {0, 1}, {1, 1}};
  const Matrix ab = a * b;
  EXPECT_EQ(ab, (Matrix{{4, 5}, {10, 11}}));
  EXPECT_EQ(transpose_times(a, a), a.transpose() * a);
  EXPECT_THROW(a * a, DimensionMismatch);
}

TEST(Matrix, BlocksAndSymmetrize) {
  Matrix m(3, 3);
  m.set_block(1, 1, Matrix{{1, 2}, {3, 4}});
  EXPECT_EQ(m.block(1, 1, 2, 2), (Matrix{{1, 2}, {3, 4}}));
  const Matrix s = symmetrized(m);
  EXPECT_DOUBLE_EQ(s(1, 2), 2.5);
  EXPECT_DOUBLE_EQ(s(2, 1), 2.5);
}

TEST(Matrix, HalfQuadraticForm) {
  const Matrix k{{2, 1}, {1, 3}};
  const double x[] = {1.0, -2.0};
  // ½(2 - 4 + 12) = 5
  EXPECT_DOUBLE_EQ(half_quadratic_form(k, x), 5.0);
}

TEST(LogicalMatrix, DenseRoundTripAndValidation) {
  const LogicalMatrix l(3, {2, 1, 3, 3});
  const Matrix d = l.dense();
  EXPECT_EQ(LogicalMatrix::from_dense(d), l);
  Matrix bad = d;
  bad(0, 0) = 1.0;  // column 0 now has two ones
  EXPECT_THROW(LogicalMatrix::from_dense(bad), DimensionMismatch);
  EXPECT_THROW(LogicalMatrix(2, {3}), DimensionMismatch);
  EXPECT_THROW(CanonicalVector(2, 0), DimensionMismatch);
}

TEST(LogicalMatrix, GatherAndScatterMatchDense) {
  const LogicalMatrix l(3, {2, 1, 3, 3});
  const Matrix m{{1, 2, 3}, {4, 5, 6}};
  EXPECT_EQ(m * l, m * l.dense());
  const Matrix r{{1, 2}, {3, 4}, {5, 6}, {7, 8}};
  EXPECT_EQ(l * r, l.dense() * r);
}

TEST(Linalg, SolveSpdAndGuard) {
  const Matrix h{{4, 1}, {1, 3}};
  const Matrix rhs{{1}, {2}};
  const Matrix x = linalg::solve_spd(h, rhs);
  EXPECT_LE(max_abs_diff(h * x, rhs), 1e-14);
  EXPECT_THROW(linalg::solve_spd(Matrix{{1, 2}, {2, 1}}, rhs), NotPositiveDefinite);
  EXPECT_NEAR(linalg::min_symmetric_eigenvalue(Matrix{{2, 0}, {0, 5}}), 2.0, 1e-14);
}

}  // namespace
}  // namespace stpc
