// Copyright (c) 2026 the nlora-lab authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "nlora/matrix.hpp"
#include "nlora/rng.hpp"

using namespace nlora;

namespace {

Matrix random_matrix(int rows, int cols, Rng& rng, double scale = 1.0) {
    return Matrix::gaussian(rows, cols, scale, rng);
}

double rel_fro_diff(const Matrix& a, const Matrix& b) {
    const double denom = std::max(fro_norm(a), 1e-300);
    return fro_norm(sub(a, b)) / denom;
}

Matrix reconstruct(const SvdResult& dec) {
    Matrix us = dec.u;
    for (int j = 0; j < us.cols(); ++j) {
        for (int i = 0; i < us.rows(); ++i) us.at(i, j) *= dec.sigma[j];
    }
    return matmul(us, transpose(dec.v));
}

}  // namespace

TEST_CASE("matmul: identity, hand values, annihilation") {
    const Matrix i2 = Matrix::identity(2);
    CHECK(matmul(i2, i2).bit_equal(i2));

    const Matrix a = Matrix::from_rows({{1, 2}, {3, 4}});
    const Matrix b = Matrix::from_rows({{0}, {1}});
    CHECK(matmul(a, b).bit_equal(Matrix::from_rows({{2}, {4}})));

    const Matrix zero_row = Matrix::zeros(1, 5);
    const Matrix col = Matrix::from_rows({{1}, {2}, {3}, {4}, {5}});
    CHECK(matmul(zero_row, col).bit_equal(Matrix::from_rows({{0}})));
}

TEST_CASE("matmul: dimension mismatch names both shapes") {
    const Matrix a = Matrix::zeros(3, 4);
    const Matrix b = Matrix::zeros(5, 2);
    CHECK_THROWS_WITH_AS(matmul(a, b), doctest::Contains("3x4"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(matmul(a, b), doctest::Contains("5x2"), std::invalid_argument);
}

TEST_CASE("transpose: hand value, symmetric fixed point, involution") {
    CHECK(transpose(Matrix::from_rows({{1, 2}})).bit_equal(Matrix::from_rows({{1}, {2}})));
    CHECK(transpose(Matrix::identity(3)).bit_equal(Matrix::identity(3)));

    Rng rng(41);
    const Matrix m = random_matrix(5, 7, rng);
    CHECK(transpose(transpose(m)).bit_equal(m));
}

TEST_CASE("l1_norm: zero, hand values") {
    CHECK(l1_norm(Matrix::zeros(3, 3)) == 0.0);
    CHECK(l1_norm(Matrix::from_rows({{3, -4}})) == 7.0);
    CHECK(l1_norm(Matrix::from_rows({{1, 1}, {1, 1}})) == 4.0);
}

TEST_CASE("l1_norm: zero only for the zero matrix") {
    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        Matrix m = Matrix::zeros(3, 4);
        m.at(rng.next_int(3), rng.next_int(4)) = 1e-12;
        CHECK(l1_norm(m) > 0.0);
    }
}

TEST_CASE("fro_norm: hand values") {
    CHECK(fro_norm(Matrix::from_rows({{3, 4}})) == 5.0);
    CHECK(fro_norm(Matrix::identity(2)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(fro_norm(Matrix::zeros(4, 2)) == 0.0);
}

TEST_CASE("fro_norm of transpose is bit-exact") {
    Rng rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        const int r = 1 + rng.next_int(12);
        const int c = 1 + rng.next_int(12);
        const Matrix m = random_matrix(r, c, rng, 2.0);
        CHECK(fro_norm(transpose(m)) == fro_norm(m));
    }
}

TEST_CASE("nuclear_norm: identity, diagonal, rank-1 outer product") {
    CHECK(nuclear_norm(Matrix::identity(3)) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(nuclear_norm(Matrix::from_rows({{3, 0}, {0, 4}})) ==
          doctest::Approx(7.0).epsilon(1e-12));
    // outer([1,2],[2,1]) is rank one with nuclear norm sqrt(5)*sqrt(5) = 5.
    const Matrix outer = Matrix::from_rows({{2, 1}, {4, 2}});
    CHECK(nuclear_norm(outer) == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("nuclear_norm: desk-scale guard") {
    CHECK_THROWS_AS(nuclear_norm(Matrix::zeros(65, 65)), std::invalid_argument);
    CHECK_NOTHROW(nuclear_norm(Matrix::zeros(65, 64)));
}

TEST_CASE("elementwise_sign: hand value, zero convention, idempotence") {
    CHECK(elementwise_sign(Matrix::from_rows({{2, -3, 0}}))
              .bit_equal(Matrix::from_rows({{1, -1, 0}})));
    CHECK(elementwise_sign(Matrix::zeros(2, 2)).bit_equal(Matrix::zeros(2, 2)));

    Rng rng(5);
    const Matrix m = random_matrix(4, 4, rng);
    const Matrix s = elementwise_sign(m);
    CHECK(elementwise_sign(s).bit_equal(s));
}

TEST_CASE("matmul associativity within 1e-12 relative error") {
    Rng rng(1234);
    for (int trial = 0; trial < 30; ++trial) {
        const int a = 1 + rng.next_int(6);
        const int b = 1 + rng.next_int(6);
        const int c = 1 + rng.next_int(6);
        const int d = 1 + rng.next_int(6);
        const Matrix x = random_matrix(a, b, rng);
        const Matrix y = random_matrix(b, c, rng);
        const Matrix z = random_matrix(c, d, rng);
        const Matrix left = matmul(matmul(x, y), z);
        const Matrix right = matmul(x, matmul(y, z));
        CHECK(rel_fro_diff(left, right) <= 1e-12);
    }
}

TEST_CASE("norm ordering: nuclear >= frobenius >= max entry magnitude") {
    Rng rng(77);
    for (int trial = 0; trial < 30; ++trial) {
        const int r = 1 + rng.next_int(10);
        const int c = 1 + rng.next_int(10);
        const Matrix m = random_matrix(r, c, rng, 3.0);
        const double nuc = nuclear_norm(m);
        const double fro = fro_norm(m);
        const double inf = max_abs(m);
        CHECK(nuc >= fro * (1.0 - 1e-12));
        CHECK(fro >= inf * (1.0 - 1e-12));
    }
}

TEST_CASE("nuclear norm is invariant under orthogonal factors") {
    Rng rng(2024);
    for (int trial = 0; trial < 15; ++trial) {
        const int r = 2 + rng.next_int(7);
        const int c = 2 + rng.next_int(7);
        const Matrix m = random_matrix(r, c, rng);
        const Matrix u = orthonormal_columns(random_matrix(r, r, rng));
        const Matrix v = orthonormal_columns(random_matrix(c, c, rng));
        const Matrix rotated = matmul(u, matmul(m, transpose(v)));
        CHECK(std::abs(nuclear_norm(rotated) - nuclear_norm(m)) <= 1e-9);
    }
}

TEST_CASE("svd reconstruction up to 64x64") {
    Rng rng(314159);
    for (int trial = 0; trial < 8; ++trial) {
        const int r = 1 + rng.next_int(64);
        const int c = 1 + rng.next_int(64);
        const Matrix m = random_matrix(r, c, rng);
        const SvdResult dec = svd(m);
        CHECK(fro_norm(sub(m, reconstruct(dec))) <= 1e-10 * fro_norm(m));
    }
    // The exact 64x64 corner.
    const Matrix big = random_matrix(64, 64, rng);
    const SvdResult dec = svd(big);
    CHECK(fro_norm(sub(big, reconstruct(dec))) <= 1e-10 * fro_norm(big));
}

TEST_CASE("svd of the zero matrix and of rank-deficient input") {
    const SvdResult zero = svd(Matrix::zeros(4, 3));
    for (double s : zero.sigma) CHECK(s == 0.0);

    Rng rng(8);
    const Matrix col = random_matrix(5, 1, rng);
    const Matrix row = random_matrix(1, 4, rng);
    const Matrix rank1 = matmul(col, row);
    const SvdResult dec = svd(rank1);
    CHECK(dec.sigma[0] == doctest::Approx(fro_norm(rank1)).epsilon(1e-12));
    for (std::size_t i = 1; i < dec.sigma.size(); ++i) CHECK(dec.sigma[i] <= 1e-12 * dec.sigma[0]);
    CHECK(fro_norm(sub(rank1, reconstruct(dec))) <= 1e-10 * fro_norm(rank1));
}

TEST_CASE("orthonormal_columns produces orthonormal columns") {
    Rng rng(10);
    const Matrix q = orthonormal_columns(random_matrix(12, 5, rng));
    const Matrix gram = matmul(transpose(q), q);
    CHECK(rel_fro_diff(gram, Matrix::identity(5)) <= 1e-12);
}

TEST_CASE("matrix constructor rejects degenerate shapes") {
    CHECK_THROWS_AS(Matrix(0, 3), std::invalid_argument);
    CHECK_THROWS_AS(Matrix(3, 0), std::invalid_argument);
    CHECK_THROWS_AS(Matrix(2, 2, {1.0, 2.0, 3.0}), std::invalid_argument);
}
