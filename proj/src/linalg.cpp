#include "stpc/linalg.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <sstream>

#include "stpc/error.hpp"

namespace stpc::linalg {

namespace {

using RowMajor =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMajor> view(const Matrix& m) {
  return {m.data().data(), static_cast<Eigen::Index>(m.rows()),
          static_cast<Eigen::Index>(m.cols())};
}

}  // namespace

double min_symmetric_eigenvalue(const Matrix& s) {
  if (s.rows() != s.cols() || s.rows() == 0) {
    throw DimensionMismatch("eigenvalues of a non-square matrix");
  }
  const Eigen::MatrixXd sym = view(s);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      sym, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

Matrix solve_spd(const Matrix& h, const Matrix& rhs, double guard) {
  if (h.rows() != h.cols() || h.rows() != rhs.rows()) {
    throw DimensionMismatch("solve_spd shape mismatch");
  }
  const double lo = min_symmetric_eigenvalue(h);
  if (!(lo >= guard)) {
    std::ostringstream msg;
    msg << "matrix is not positive definite (min eigenvalue " << lo
        << " < " << guard << "); check that every D_i and Q_i is positive "
        << "definite and every C_i positive semidefinite";
    throw NotPositiveDefinite(msg.str());
  }
  const Eigen::MatrixXd hm = view(h);
  Eigen::LLT<Eigen::MatrixXd> llt(hm);
  RowMajor x = llt.solve(Eigen::MatrixXd(view(rhs)));
  return Matrix(rhs.rows(), rhs.cols(),
                std::vector<double>(x.data(), x.data() + x.size()));
}

}  // namespace stpc::linalg
