// Copyright (c) 2026 the nlora-lab authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlora {

class Rng;

/// Dense row-major matrix of 64-bit reals. The single carrier type for base
/// weights, adapter factors, gradients, deltas and masks. Values are plain
/// data: copying, moving and sharing across threads are all safe; nothing
/// mutates through a const reference.
class Matrix {
public:
    Matrix() = default;  // empty 0x0 placeholder, only valid as an assignment target
    Matrix(int rows, int cols);
    Matrix(int rows, int cols, std::vector<double> values);

    static Matrix zeros(int rows, int cols) { return Matrix(rows, cols); }
    static Matrix identity(int n);
    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
    static Matrix gaussian(int rows, int cols, double stddev, Rng& rng);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }

    double& at(int r, int c) { return values_[flat(r, c)]; }
    const double& at(int r, int c) const { return values_[flat(r, c)]; }
    double& operator[](std::size_t i) { return values_[i]; }
    const double& operator[](std::size_t i) const { return values_[i]; }

    std::span<const double> values() const { return values_; }
    std::vector<double>& raw() { return values_; }

    bool same_shape(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }
    /// Exact elementwise equality, including shape. No tolerance.
    bool bit_equal(const Matrix& other) const;
    bool all_finite() const;

    std::string shape_str() const;  // e.g. "3x4"

private:
    std::size_t flat(int r, int c) const {
        return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) +
               static_cast<std::size_t>(c);
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> values_;
};

Matrix matmul(const Matrix& lhs, const Matrix& rhs);
Matrix transpose(const Matrix& m);

double l1_norm(const Matrix& m);
double fro_norm(const Matrix& m);
double max_abs(const Matrix& m);

/// Entrywise sign with sign(0) = 0, the canonical l1 subgradient choice.
Matrix elementwise_sign(const Matrix& m);

Matrix add(const Matrix& a, const Matrix& b);
Matrix sub(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& m, double factor);
void add_in_place(Matrix& target, const Matrix& other);
/// target += alpha * other
void axpy_in_place(Matrix& target, double alpha, const Matrix& other);

/// Thrown when the Jacobi sweep cap is hit before the off-diagonal mass
/// drops below threshold. `residual` is max |g_p . g_q| / ||m||_F^2.
class SvdConvergenceError : public std::runtime_error {
public:
    SvdConvergenceError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

/// Thin SVD, m = U diag(sigma) V^T with sigma sorted descending.
/// U is rows x s and V is cols x s, s = min(rows, cols).
struct SvdResult {
    Matrix u;
    std::vector<double> sigma;
    Matrix v;
};

/// One-sided Jacobi SVD. Accurate and simple at desk scale; capped at 100
/// sweeps with off-diagonal threshold 1e-12 x initial Frobenius norm.
SvdResult svd(const Matrix& m);

/// Sum of singular values. Requires min(rows, cols) <= 64.
double nuclear_norm(const Matrix& m);

/// Q factor of a thin QR via modified Gram-Schmidt with one
/// re-orthogonalization pass. Requires rows >= cols and full column rank.
Matrix orthonormal_columns(const Matrix& m);

}  // namespace nlora
