#include "stpc/augmented_system.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stpc/error.hpp"
#include "stpc/linalg.hpp"
#include "stpc/logic_network.hpp"
#include "stpc/stp.hpp"

namespace stpc {

namespace {

void require_shape(const Matrix& m, std::size_t rows, std::size_t cols,
                   const std::string& what) {
  if (m.rows() != rows || m.cols() != cols) {
    throw DimensionMismatch(what + " is " + std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()) + ", expected " +
                            std::to_string(rows) + "x" + std::to_string(cols));
  }
}

void require_symmetric(const Matrix& m, const std::string& what) {
  const double tol = 1e-10 * std::max(1.0, max_abs(m));
  if (max_abs_diff(m, m.transpose()) > tol) {
    throw NotPositiveDefinite(what + " is not symmetric");
  }
}

void require_definite(const Matrix& m, bool strict, const std::string& what) {
  require_symmetric(m, what);
  const double lo = linalg::min_symmetric_eigenvalue(m);
  const double bound = strict ? linalg::kDefinitenessGuard
                              : -linalg::kDefinitenessGuard;
  if (!(lo >= bound)) {
    throw NotPositiveDefinite(what + " must be positive " +
                              (strict ? "definite" : "semidefinite") +
                              " (min eigenvalue " + std::to_string(lo) + ")");
  }
}

Matrix block_diagonal(const std::vector<const Matrix*>& blocks) {
  std::size_t rows = 0;
  std::size_t cols = 0;
  for (const auto* b : blocks) {
    rows += b->rows();
    cols += b->cols();
  }
  Matrix out(rows, cols);
  std::size_t r = 0;
  std::size_t c = 0;
  for (const auto* b : blocks) {
    out.set_block(r, c, *b);
    r += b->rows();
    c += b->cols();
  }
  return out;
}

// [X_1 X_2 ... X_N]
Matrix hstack(const std::vector<const Matrix*>& blocks) {
  const std::size_t rows = blocks.front()->rows();
  const std::size_t w = blocks.front()->cols();
  Matrix out(rows, w * blocks.size());
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    out.set_block(0, i * w, *blocks[i]);
  }
  return out;
}

// L̃ (I_{ℓMN} ⊗ X̃)(I_{ℓM} ⊗ Φ_N)
Matrix lift(const LogicalMatrix& l_tilde, const Matrix& x_tilde,
            std::size_t ell_m, std::size_t N) {
  const Matrix expanded = kron(Matrix::identity(ell_m * N), x_tilde);
  const LogicalMatrix reducer = identity_kron(ell_m, power_reducing(N));
  return stp(stp(l_tilde, expanded), reducer);
}

void fill_weights(AugmentedSystem& sys, const SwitchedPlant& plant) {
  std::vector<const Matrix*> cs, ds, qs;
  for (std::size_t i = 1; i <= plant.mode_count(); ++i) {
    cs.push_back(&plant.weights(i).c);
    ds.push_back(&plant.weights(i).d);
    qs.push_back(&plant.weights(i).q);
  }
  sys.c = block_diagonal(cs);
  sys.d = block_diagonal(ds);
  sys.q = block_diagonal(qs);
}

AugmentedSystem build(std::span<const LogicalMatrix> ls,
                      std::span<const double> probabilities,
                      const SwitchedPlant& plant, bool stochastic) {
  if (ls.empty()) throw DimensionMismatch("no structure matrices");
  if (ls.size() != probabilities.size()) {
    throw DimensionMismatch("structure matrix count differs from probability "
                            "count");
  }
  logic::validate_distribution(probabilities);
  const std::size_t N = ls.front().rows();
  if (plant.mode_count() != N) {
    throw DimensionMismatch("plant has " + std::to_string(plant.mode_count()) +
                            " modes but the logical network has N = " +
                            std::to_string(N));
  }
  if (ls.front().cols() % N != 0) {
    throw DimensionMismatch("structure matrix column count is not a multiple "
                            "of N");
  }
  const std::size_t M = ls.front().cols() / N;
  for (const auto& l : ls) {
    if (l.rows() != N || l.cols() != M * N) {
      throw DimensionMismatch("structure matrices disagree in shape");
    }
  }

  AugmentedSystem sys;
  sys.N = N;
  sys.M = M;
  sys.ell = ls.size();
  sys.n = plant.n();
  sys.m = plant.m();
  sys.stochastic = stochastic;
  sys.probabilities.assign(probabilities.begin(), probabilities.end());
  sys.structures.assign(ls.begin(), ls.end());

  const LogicalMatrix l_tilde = hconcat(ls);
  std::vector<const Matrix*> as, bs, fs;
  for (std::size_t i = 1; i <= N; ++i) {
    as.push_back(&plant.dynamics(i).a);
    bs.push_back(&plant.dynamics(i).b);
    fs.push_back(&plant.dynamics(i).f);
  }
  sys.a = lift(l_tilde, hstack(as), sys.ell * M, N);
  sys.b = lift(l_tilde, hstack(bs), sys.ell * M, N);
  if (stochastic) {
    sys.r = plant.r();
    sys.f = lift(l_tilde, hstack(fs), sys.ell * M, N);
  }
  fill_weights(sys, plant);
  return sys;
}

Matrix column_block(const Matrix& lifted, std::size_t block,
                    std::size_t width) {
  // lifted · (δ_K^block ⊗ I_width), as a logical column selection.
  const std::size_t count = lifted.cols() / width;
  if (block < 1 || block > count) {
    throw DimensionMismatch("block index " + std::to_string(block) +
                            " outside [1, " + std::to_string(count) + "]");
  }
  return lifted * kron_identity(LogicalMatrix(count, {block}), width);
}

}  // namespace

SwitchedPlant::SwitchedPlant(std::vector<ModeDynamics> dynamics,
                             std::vector<ModeWeights> weights)
    : dynamics_(std::move(dynamics)), weights_(std::move(weights)) {
  if (dynamics_.empty()) throw DimensionMismatch("plant has no modes");
  if (dynamics_.size() != weights_.size()) {
    throw DimensionMismatch("mode dynamics and weights counts differ");
  }
  n_ = dynamics_.front().a.rows();
  m_ = dynamics_.front().b.cols();
  r_ = dynamics_.front().f.cols();
  if (n_ == 0 || m_ == 0) throw DimensionMismatch("empty state or input");
  for (std::size_t i = 0; i < dynamics_.size(); ++i) {
    const std::string tag = " of mode " + std::to_string(i + 1);
    require_shape(dynamics_[i].a, n_, n_, "A" + tag);
    require_shape(dynamics_[i].b, n_, m_, "B" + tag);
    if (r_ > 0) {
      require_shape(dynamics_[i].f, n_, r_, "F" + tag);
    } else if (!dynamics_[i].f.empty()) {
      throw DimensionMismatch("F given for some modes only");
    }
    require_shape(weights_[i].c, n_, n_, "C" + tag);
    require_shape(weights_[i].d, m_, m_, "D" + tag);
    require_shape(weights_[i].q, n_, n_, "Q" + tag);
    require_definite(weights_[i].c, false, "C" + tag);
    require_definite(weights_[i].d, true, "D" + tag);
    require_definite(weights_[i].q, true, "Q" + tag);
  }
}

SwitchedPlant SwitchedPlant::with_noise_scale(double factor) const {
  SwitchedPlant copy = *this;
  for (auto& d : copy.dynamics_) d.f *= factor;
  return copy;
}

SwitchedPlant SwitchedPlant::without_noise() const {
  SwitchedPlant copy = *this;
  for (auto& d : copy.dynamics_) d.f = Matrix();
  copy.r_ = 0;
  return copy;
}

Matrix AugmentedSystem::a_block(std::size_t sigma, std::size_t gamma) const {
  return column_block(a, (sigma - 1) * M + gamma, N * n);
}

Matrix AugmentedSystem::b_block(std::size_t sigma, std::size_t gamma) const {
  return column_block(b, (sigma - 1) * M + gamma, N * m);
}

Matrix AugmentedSystem::f_block(std::size_t sigma, std::size_t gamma) const {
  if (f.empty()) throw DimensionMismatch("system has no noise matrix");
  return column_block(f, (sigma - 1) * M + gamma, N * r);
}

AugmentedSystem build_deterministic(const LogicalMatrix& l,
                                    const SwitchedPlant& plant) {
  const double one = 1.0;
  return build(std::span<const LogicalMatrix>(&l, 1),
               std::span<const double>(&one, 1), plant, false);
}

AugmentedSystem build_stochastic(std::span<const LogicalMatrix> ls,
                                 std::span<const double> probabilities,
                                 const SwitchedPlant& plant) {
  if (!plant.has_noise()) {
    throw DimensionMismatch("stochastic build needs noise matrices F_i");
  }
  return build(ls, probabilities, plant, true);
}

std::vector<double> pack(const HybridState& state) {
  const std::size_t n = state.x.size();
  std::vector<double> v(state.theta.dim * n, 0.0);
  std::copy(state.x.begin(), state.x.end(),
            v.begin() + static_cast<std::ptrdiff_t>((state.theta.index - 1) * n));
  return v;
}

HybridState unpack(std::span<const double> v, std::size_t N, std::size_t n,
                   std::optional<std::size_t> theta_hint) {
  if (v.size() != N * n) {
    throw DimensionMismatch("augmented vector has length " +
                            std::to_string(v.size()) + ", expected " +
                            std::to_string(N * n));
  }
  std::optional<std::size_t> found;
  for (std::size_t blk = 0; blk < N; ++blk) {
    bool nonzero = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(v[blk * n + i]) > 1e-12) nonzero = true;
    }
    if (!nonzero) continue;
    if (found) {
      throw AmbiguousBlock("augmented vector has nonzero blocks " +
                           std::to_string(*found + 1) + " and " +
                           std::to_string(blk + 1));
    }
    found = blk;
  }
  const std::size_t idx = found ? *found + 1 : theta_hint.value_or(1);
  HybridState s{CanonicalVector(N, idx), std::vector<double>(n)};
  std::copy_n(v.begin() + static_cast<std::ptrdiff_t>((idx - 1) * n), n,
              s.x.begin());
  return s;
}

}  // namespace stpc
