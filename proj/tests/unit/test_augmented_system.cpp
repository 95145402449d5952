#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "stpc/error.hpp"
#include "stpc/stp.hpp"

namespace stpc {
namespace {

using namespace stpc::testing;

TEST(Augmented, DemoDimensions) {
  const auto det = demo_deterministic();
  EXPECT_EQ(det.a.rows(), 12u);
  EXPECT_EQ(det.a.cols(), 24u);
  EXPECT_EQ(det.b.rows(), 12u);
  EXPECT_EQ(det.b.cols(), 16u);
  const auto sto = demo_stochastic();
  EXPECT_EQ(sto.a.cols(), 48u);
  EXPECT_EQ(sto.b.cols(), 32u);
  EXPECT_EQ(sto.f.rows(), 12u);
  EXPECT_EQ(sto.f.cols(), 48u);
}

TEST(Augmented, LiftedMatrixMatchesDenseStpChain) {
  const auto plant = demo_plant();
  const auto sys = demo_deterministic();
  Matrix a_tilde(3, 12);
  for (std::size_t i = 1; i <= 4; ++i) a_tilde.set_block(0, (i - 1) * 3, plant.dynamics(i).a);
  const Matrix expect = stp(stp(demo_l1().dense(), kron(Matrix::identity(8), a_tilde)),
                            kron(Matrix::identity(2), power_reducing(4).dense()));
  EXPECT_LE(max_abs_diff(sys.a, expect), 1e-15);
}

TEST(Augmented, BlocksMatchDirectConstruction) {
  const auto plant = demo_plant();
  const auto sys = demo_stochastic();
  const std::vector<LogicalMatrix> ls{demo_l1(), demo_l2()};
  for (std::size_t s = 1; s <= 2; ++s) {
    for (std::size_t g = 1; g <= 2; ++g) {
      EXPECT_EQ(eig(sys.a_block(s, g)), direct_slice(plant, ls[s - 1], g, Part::A));
      EXPECT_EQ(eig(sys.b_block(s, g)), direct_slice(plant, ls[s - 1], g, Part::B));
      EXPECT_EQ(eig(sys.f_block(s, g)), direct_slice(plant, ls[s - 1], g, Part::F));
    }
  }
  EXPECT_THROW(sys.a_block(3, 1), DimensionMismatch);
}

TEST(Augmented, LiftedStepEqualsModeStep) {
  const auto plant = demo_plant();
  const auto sys = demo_deterministic();
  Rng rng(3);
  for (std::size_t th = 1; th <= 4; ++th) {
    for (std::size_t g = 1; g <= 2; ++g) {
      const HybridState s{CanonicalVector(4, th), {1.0, -2.0, 0.5}};
      const std::vector<double> u{rng.uniform(-1, 1), rng.uniform(-1, 1)};
      // v' = 𝐀γ v + 𝐁γ (θ ⋉ u)
      const Matrix v = Matrix::column(pack(s));
      const Matrix tu = Matrix::column(pack(HybridState{s.theta, u}));
      const Matrix next = sys.a_block(1, g) * v + sys.b_block(1, g) * tu;
      const auto& d = plant.dynamics(th);
      const Matrix x = d.a * Matrix::column(s.x) + d.b * Matrix::column(u);
      const std::size_t to = logic::step_logical(demo_l1(), CanonicalVector(2, g), s.theta).index;
      const Matrix want = Matrix::column(
          pack(HybridState{CanonicalVector(4, to), std::vector<double>(x.data().begin(), x.data().end())}));
      EXPECT_LE(max_abs_diff(next, want), 1e-14);
    }
  }
}

TEST(Augmented, PackUnpack) {
  const HybridState s{CanonicalVector(4, 3), {1.0, 2.0, 3.0}};
  const auto v = pack(s);
  ASSERT_EQ(v.size(), 12u);
  EXPECT_EQ(v[6], 1.0);
  const auto back = unpack(v, 4, 3);
  EXPECT_EQ(back.theta, s.theta);
  EXPECT_EQ(back.x, s.x);

  std::vector<double> zero(12, 0.0);
  EXPECT_EQ(unpack(zero, 4, 3).theta.index, 1u);
  EXPECT_EQ(unpack(zero, 4, 3, 2).theta.index, 2u);
  auto two = v;
  two[0] = 1.0;
  EXPECT_THROW(unpack(two, 4, 3), AmbiguousBlock);
  EXPECT_THROW(unpack(v, 4, 2), DimensionMismatch);
}

TEST(Plant, Validation) {
  const Matrix i2 = Matrix::identity(2);
  auto make = [&](Matrix c, Matrix d, Matrix q) {
    return SwitchedPlant({{i2, Matrix{{1}, {0}}, Matrix()}},
                         {{std::move(c), std::move(d), std::move(q)}});
  };
  EXPECT_NO_THROW(make(Matrix(2, 2), Matrix{{1}}, i2));  // C = 0 is allowed
  EXPECT_THROW(make(i2, Matrix{{0}}, i2), NotPositiveDefinite);
  EXPECT_THROW(make(Matrix{{1, 1}, {0, 1}}, Matrix{{1}}, i2), NotPositiveDefinite);
  EXPECT_THROW(make(i2 * -1.0, Matrix{{1}}, i2), NotPositiveDefinite);
  EXPECT_THROW(make(i2, Matrix{{1}}, Matrix(2, 2)), NotPositiveDefinite);
  EXPECT_THROW(make(Matrix::identity(3), Matrix{{1}}, i2), DimensionMismatch);
}

TEST(Plant, StochasticBuildPreconditions) {
  const auto plant = demo_plant();
  const std::vector<LogicalMatrix> ls{demo_l1(), demo_l2()};
  EXPECT_THROW(build_stochastic(ls, std::vector<double>{0.7, 0.4}, plant), BadDistribution);
  EXPECT_THROW(build_stochastic(ls, std::vector<double>{0.7, 0.3}, plant.without_noise()),
               DimensionMismatch);
  const std::vector<LogicalMatrix> wrong{LogicalMatrix(3, {1, 2, 3, 1, 2, 3})};
  EXPECT_THROW(build_deterministic(wrong.front(), plant), DimensionMismatch);
}

}  // namespace
}  // namespace stpc
