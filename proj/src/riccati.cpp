#include "stpc/riccati.hpp"

#include "stpc/error.hpp"
#include "stpc/linalg.hpp"
#include "stpc/logic_network.hpp"

namespace stpc {

namespace {

Matrix slice(const AugmentedSystem& sys, Lifted which, std::size_t sigma,
             std::size_t gamma) {
  switch (which) {
    case Lifted::A:
      return sys.a_block(sigma, gamma);
    case Lifted::B:
      return sys.b_block(sigma, gamma);
    case Lifted::F:
      return sys.f_block(sigma, gamma);
  }
  return {};
}

void check_inputs(const Matrix& k_next, std::size_t gamma,
                  const AugmentedSystem& sys) {
  const std::size_t nn = sys.state_size();
  if (k_next.rows() != nn || k_next.cols() != nn) {
    throw DimensionMismatch("cost-to-go matrix must be " +
                            std::to_string(nn) + "x" + std::to_string(nn));
  }
  if (gamma < 1 || gamma > sys.M) {
    throw DimensionMismatch("logical control " + std::to_string(gamma) +
                            " outside [1, " + std::to_string(sys.M) + "]");
  }
}

}  // namespace

Matrix expected_quadratic(const Matrix& k_next, Lifted x, Lifted y,
                          std::size_t gamma, const AugmentedSystem& sys) {
  check_inputs(k_next, gamma, sys);
  Matrix acc;
  for (std::size_t sigma = 1; sigma <= sys.ell; ++sigma) {
    const Matrix xs = slice(sys, x, sigma, gamma);
    const Matrix ys = x == y ? xs : slice(sys, y, sigma, gamma);
    Matrix term = transpose_times(xs, k_next * ys);
    term *= sys.probabilities[sigma - 1];
    if (acc.empty()) {
      acc = std::move(term);
    } else {
      acc += term;
    }
  }
  return acc;
}

Matrix stage_gain(const Matrix& k_next, std::size_t gamma,
                  const AugmentedSystem& sys) {
  const Matrix h = sys.d + expected_quadratic(k_next, Lifted::B, Lifted::B,
                                              gamma, sys);
  const Matrix r = expected_quadratic(k_next, Lifted::B, Lifted::A, gamma, sys);
  const std::size_t n = sys.n;
  const std::size_t m = sys.m;
  Matrix g(sys.N * m, sys.N * n);
  for (std::size_t th = 0; th < sys.N; ++th) {
    const Matrix h_tt = h.block(th * m, th * m, m, m);
    const Matrix r_tt = r.block(th * m, th * n, m, n);
    Matrix blk = linalg::solve_spd(h_tt, r_tt);
    blk *= -1.0;
    g.set_block(th * m, th * n, blk);
  }
  return g;
}

Matrix stage_cost(const Matrix& k_next, std::size_t gamma, const Matrix& g,
                  const AugmentedSystem& sys) {
  check_inputs(k_next, gamma, sys);
  if (g.rows() != sys.input_size() || g.cols() != sys.state_size()) {
    throw DimensionMismatch("gain has the wrong shape");
  }
  Matrix k = sys.c + transpose_times(g, sys.d * g);
  for (std::size_t sigma = 1; sigma <= sys.ell; ++sigma) {
    const Matrix closed = sys.a_block(sigma, gamma) + sys.b_block(sigma, gamma) * g;
    Matrix term = transpose_times(closed, k_next * closed);
    term *= sys.probabilities[sigma - 1];
    k += term;
  }
  return symmetrized(k);
}

std::vector<double> stage_noise_constants(const Matrix& k_next,
                                          const std::vector<double>& c_next,
                                          std::size_t gamma,
                                          const AugmentedSystem& sys) {
  check_inputs(k_next, gamma, sys);
  if (c_next.size() != sys.N) {
    throw DimensionMismatch("noise constant vector must have N entries");
  }
  std::vector<double> c(sys.N, 0.0);
  for (std::size_t sigma = 1; sigma <= sys.ell; ++sigma) {
    const double p = sys.probabilities[sigma - 1];
    const Matrix fk = sys.f.empty() ? Matrix() : sys.f_block(sigma, gamma);
    const LogicalMatrix& l = sys.structures[sigma - 1];
    for (std::size_t th = 1; th <= sys.N; ++th) {
      double trace = 0.0;
      if (!fk.empty() && sys.r > 0) {
        const Matrix fsel = fk.block(0, (th - 1) * sys.r, fk.rows(), sys.r);
        const Matrix kf = k_next * fsel;
        for (std::size_t j = 0; j < sys.r; ++j) {
          for (std::size_t i = 0; i < fsel.rows(); ++i) {
            trace += fsel(i, j) * kf(i, j);
          }
        }
      }
      const std::size_t next =
          logic::step_logical(l, CanonicalVector(sys.M, gamma),
                              CanonicalVector(sys.N, th))
              .index;
      c[th - 1] += p * (0.5 * trace + c_next[next - 1]);
    }
  }
  return c;
}

Matrix reduce_gain(const Matrix& g, std::size_t N, std::size_t m) {
  if (g.rows() != N * m) throw DimensionMismatch("gain row count is not Nm");
  Matrix out(m, g.cols());
  for (std::size_t th = 0; th < N; ++th) {
    out += g.block(th * m, 0, m, g.cols());
  }
  return out;
}

}  // namespace stpc
