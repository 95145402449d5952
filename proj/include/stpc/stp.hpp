#pragma once

#include <cstddef>
#include <initializer_list>

#include "stpc/matrix.hpp"

// Semi-tensor product kernel and the Kronecker-family constructors built on
// it. All functions are pure.
namespace stpc {

// A ⋉ B = (A ⊗ I_{l/n})(B ⊗ I_{l/p}), l = lcm(cols(A), rows(B)). Reduces to
// the ordinary product when the inner dimensions agree.
Matrix stp(const Matrix& a, const Matrix& b);

// Index-arithmetic fast paths. The logical/logical product is again logical.
LogicalMatrix stp(const LogicalMatrix& a, const LogicalMatrix& b);
Matrix stp(const LogicalMatrix& a, const Matrix& b);
Matrix stp(const Matrix& a, const LogicalMatrix& b);

// Left-to-right STP of a chain of dense factors.
Matrix stp_chain(std::initializer_list<Matrix> factors);

Matrix kron(const Matrix& a, const Matrix& b);
LogicalMatrix kron(const LogicalMatrix& a, const LogicalMatrix& b);
// a ⊗ I_k without densifying.
LogicalMatrix kron_identity(const LogicalMatrix& a, std::size_t k);
// I_k ⊗ a without densifying.
LogicalMatrix identity_kron(std::size_t k, const LogicalMatrix& a);

// Column-wise Kronecker product; throws ColumnMismatch when the column
// counts differ.
Matrix khatri_rao(const Matrix& a, const Matrix& b);
LogicalMatrix khatri_rao(const LogicalMatrix& a, const LogicalMatrix& b);

// Φ_k ∈ L_{k²×k}: x ⋉ x = Φ_k x for every x ∈ Δ_k.
LogicalMatrix power_reducing(std::size_t k);

// I_r ⊗ a, so that z ⋉ a = (I_r ⊗ a) ⋉ z for every z ∈ ℝ^r.
Matrix swap_matrix(std::size_t r, const Matrix& a);

// Derivative of x ↦ a ⋉ x: a ⊗ I_{l/q}, l = lcm(cols(a), x_dim). Column
// block i (width l/x_dim) is ∂(a ⋉ x)/∂x_i.
Matrix stp_linear_grad(const Matrix& a, std::size_t x_dim);

// Derivative of x ↦ xᵀ ⋉ a ⋉ x for a column x ∈ ℝⁿ. Column block i is
// (δ_n^i)ᵀ ⋉ a ⋉ x + xᵀ ⋉ Â_i with Â = a ⊗ I_{l/q} and Â_i its i-th column
// block; for a scalar-valued form this is the usual row gradient.
Matrix stp_quadratic_grad(const Matrix& a, const Matrix& x);

}  // namespace stpc
