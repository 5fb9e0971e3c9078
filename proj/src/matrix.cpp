// Copyright (c) 2026 the nlora-lab authors
// SPDX-License-Identifier: Apache-2.0

#include "nlora/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nlora/rng.hpp"

namespace nlora {

namespace {

[[noreturn]] void throw_shape_mismatch(const char* op, const Matrix& a, const Matrix& b) {
    throw std::invalid_argument(std::string(op) + ": dimension mismatch " + a.shape_str() +
                                " vs " + b.shape_str());
}

}  // namespace

Matrix::Matrix(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows < 1 || cols < 1) {
        throw std::invalid_argument("Matrix: dimensions must be >= 1, got " +
                                    std::to_string(rows) + "x" + std::to_string(cols));
    }
    values_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0.0);
}

Matrix::Matrix(int rows, int cols, std::vector<double> values) : Matrix(rows, cols) {
    if (values.size() != values_.size()) {
        throw std::invalid_argument("Matrix: " + shape_str() + " needs " +
                                    std::to_string(values_.size()) + " values, got " +
                                    std::to_string(values.size()));
    }
    values_ = std::move(values);
}

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const int r = static_cast<int>(rows.size());
    if (r == 0) throw std::invalid_argument("Matrix::from_rows: no rows");
    const int c = static_cast<int>(rows.begin()->size());
    Matrix m(r, c);
    int i = 0;
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != c) {
            throw std::invalid_argument("Matrix::from_rows: ragged rows");
        }
        int j = 0;
        for (double v : row) m.at(i, j++) = v;
        ++i;
    }
    return m;
}

Matrix Matrix::gaussian(int rows, int cols, double stddev, Rng& rng) {
    Matrix m(rows, cols);
    for (auto& v : m.raw()) v = stddev * rng.next_gaussian();
    return m;
}

bool Matrix::bit_equal(const Matrix& other) const {
    return same_shape(other) && values_ == other.values_;
}

bool Matrix::all_finite() const {
    return std::all_of(values_.begin(), values_.end(),
                       [](double v) { return std::isfinite(v); });
}

std::string Matrix::shape_str() const {
    return std::to_string(rows_) + "x" + std::to_string(cols_);
}

Matrix matmul(const Matrix& lhs, const Matrix& rhs) {
    if (lhs.cols() != rhs.rows()) throw_shape_mismatch("matmul", lhs, rhs);
    Matrix out(lhs.rows(), rhs.cols());
    for (int i = 0; i < lhs.rows(); ++i) {
        for (int t = 0; t < lhs.cols(); ++t) {
            const double a = lhs.at(i, t);
            if (a == 0.0) continue;
            for (int j = 0; j < rhs.cols(); ++j) {
                out.at(i, j) += a * rhs.at(t, j);
            }
        }
    }
    return out;
}

Matrix transpose(const Matrix& m) {
    Matrix out(m.cols(), m.rows());
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) out.at(j, i) = m.at(i, j);
    }
    return out;
}

double l1_norm(const Matrix& m) {
    double sum = 0.0;
    for (double v : m.values()) sum += std::abs(v);
    return sum;
}

double fro_norm(const Matrix& m) {
    // Squares are summed in ascending order so the result depends only on the
    // multiset of entries; ||A^T||_F then matches ||A||_F bit for bit.
    std::vector<double> squares;
    squares.reserve(m.size());
    for (double v : m.values()) squares.push_back(v * v);
    std::sort(squares.begin(), squares.end());
    double sum = 0.0;
    for (double s : squares) sum += s;
    return std::sqrt(sum);
}

double max_abs(const Matrix& m) {
    double best = 0.0;
    for (double v : m.values()) best = std::max(best, std::abs(v));
    return best;
}

Matrix elementwise_sign(const Matrix& m) {
    Matrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.size(); ++i) {
        const double v = m[i];
        out[i] = v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
    }
    return out;
}

Matrix add(const Matrix& a, const Matrix& b) {
    if (!a.same_shape(b)) throw_shape_mismatch("add", a, b);
    Matrix out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
    return out;
}

Matrix sub(const Matrix& a, const Matrix& b) {
    if (!a.same_shape(b)) throw_shape_mismatch("sub", a, b);
    Matrix out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
    return out;
}

Matrix scale(const Matrix& m, double factor) {
    Matrix out = m;
    for (auto& v : out.raw()) v *= factor;
    return out;
}

void add_in_place(Matrix& target, const Matrix& other) {
    if (!target.same_shape(other)) throw_shape_mismatch("add_in_place", target, other);
    for (std::size_t i = 0; i < target.size(); ++i) target[i] += other[i];
}

void axpy_in_place(Matrix& target, double alpha, const Matrix& other) {
    if (!target.same_shape(other)) throw_shape_mismatch("axpy_in_place", target, other);
    for (std::size_t i = 0; i < target.size(); ++i) target[i] += alpha * other[i];
}

namespace {

// One-sided Jacobi on the columns of g (rows x n, rows >= n). Rotations
// accumulate into v. Returns max remaining |g_p . g_q|, measured after the
// final sweep.
double jacobi_orthogonalize(std::vector<std::vector<double>>& g, Matrix& v, double off_tol,
                            int max_sweeps) {
    const int n = static_cast<int>(g.size());
    const int rows = n > 0 ? static_cast<int>(g[0].size()) : 0;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double apq = 0.0;
                for (int i = 0; i < rows; ++i) apq += g[p][i] * g[q][i];
                if (std::abs(apq) <= off_tol) continue;
                double app = 0.0, aqq = 0.0;
                for (int i = 0; i < rows; ++i) {
                    app += g[p][i] * g[p][i];
                    aqq += g[q][i] * g[q][i];
                }
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double cs = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = cs * t;
                for (int i = 0; i < rows; ++i) {
                    const double gp = g[p][i];
                    const double gq = g[q][i];
                    g[p][i] = cs * gp - sn * gq;
                    g[q][i] = sn * gp + cs * gq;
                }
                for (int i = 0; i < n; ++i) {
                    const double vp = v.at(i, p);
                    const double vq = v.at(i, q);
                    v.at(i, p) = cs * vp - sn * vq;
                    v.at(i, q) = sn * vp + cs * vq;
                }
                rotated = true;
            }
        }
        if (!rotated) break;
    }
    double worst = 0.0;
    for (int p = 0; p < n - 1; ++p) {
        for (int q = p + 1; q < n; ++q) {
            double apq = 0.0;
            for (int i = 0; i < rows; ++i) apq += g[p][i] * g[q][i];
            worst = std::max(worst, std::abs(apq));
        }
    }
    return worst;
}

}  // namespace

SvdResult svd(const Matrix& m) {
    if (m.rows() < m.cols()) {
        SvdResult flipped = svd(transpose(m));
        return SvdResult{std::move(flipped.v), std::move(flipped.sigma), std::move(flipped.u)};
    }
    const int rows = m.rows();
    const int n = m.cols();
    const double fro0 = fro_norm(m);

    // Column-major working copy.
    std::vector<std::vector<double>> g(n, std::vector<double>(rows));
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < rows; ++i) g[j][i] = m.at(i, j);
    }
    Matrix v = Matrix::identity(n);

    if (fro0 > 0.0) {
        const double off_tol = 1e-12 * fro0 * fro0;
        const int max_sweeps = 100;
        const double worst = jacobi_orthogonalize(g, v, off_tol, max_sweeps);
        if (worst > off_tol) {
            throw SvdConvergenceError("svd: Jacobi sweeps did not converge for " + m.shape_str() +
                                          " matrix, residual " +
                                          std::to_string(worst / (fro0 * fro0)),
                                      worst / (fro0 * fro0));
        }
    }

    std::vector<double> sigma(n);
    for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int i = 0; i < rows; ++i) s += g[j][i] * g[j][i];
        sigma[j] = std::sqrt(s);
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return sigma[a] > sigma[b]; });

    SvdResult out;
    out.sigma.resize(n);
    out.u = Matrix(rows, n);
    out.v = Matrix(n, n);
    for (int j = 0; j < n; ++j) {
        const int src = order[j];
        out.sigma[j] = sigma[src];
        if (sigma[src] > 0.0) {
            for (int i = 0; i < rows; ++i) out.u.at(i, j) = g[src][i] / sigma[src];
        }
        for (int i = 0; i < n; ++i) out.v.at(i, j) = v.at(i, src);
    }
    return out;
}

double nuclear_norm(const Matrix& m) {
    if (std::min(m.rows(), m.cols()) > 64) {
        throw std::invalid_argument("nuclear_norm: min dimension of " + m.shape_str() +
                                    " exceeds the desk-scale cap of 64");
    }
    const SvdResult dec = svd(m);
    double sum = 0.0;
    for (double s : dec.sigma) sum += s;
    return sum;
}

Matrix orthonormal_columns(const Matrix& m) {
    if (m.rows() < m.cols()) {
        throw std::invalid_argument("orthonormal_columns: need rows >= cols, got " +
                                    m.shape_str());
    }
    const int rows = m.rows();
    const int n = m.cols();
    std::vector<std::vector<double>> q(n, std::vector<double>(rows));
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < rows; ++i) q[j][i] = m.at(i, j);
    }
    for (int pass = 0; pass < 2; ++pass) {
        for (int j = 0; j < n; ++j) {
            for (int p = 0; p < j; ++p) {
                double dot = 0.0;
                for (int i = 0; i < rows; ++i) dot += q[p][i] * q[j][i];
                for (int i = 0; i < rows; ++i) q[j][i] -= dot * q[p][i];
            }
            double norm = 0.0;
            for (int i = 0; i < rows; ++i) norm += q[j][i] * q[j][i];
            norm = std::sqrt(norm);
            if (norm < 1e-12) {
                throw std::invalid_argument("orthonormal_columns: rank-deficient input");
            }
            for (int i = 0; i < rows; ++i) q[j][i] /= norm;
        }
    }
    Matrix out(rows, n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < rows; ++i) out.at(i, j) = q[j][i];
    }
    return out;
}

}  // namespace nlora
