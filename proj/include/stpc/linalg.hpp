#pragma once

#include "stpc/matrix.hpp"

namespace stpc::linalg {

// Eigenvalues below this are treated as a violated definiteness assumption.
inline constexpr double kDefinitenessGuard = 1e-10;

double min_symmetric_eigenvalue(const Matrix& s);

// Solves h·X = rhs for symmetric positive-definite h. Throws
// NotPositiveDefinite when the smallest eigenvalue of h is below `guard`.
Matrix solve_spd(const Matrix& h, const Matrix& rhs,
                 double guard = kDefinitenessGuard);

}  // namespace stpc::linalg
