// Copyright (c) 2026 the nlora-lab authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "nlora/adapter.hpp"
#include "nlora/matrix.hpp"

namespace nlora {

/// Which regularizer shapes the active adapter. The l1 variants differ only
/// in where the penalty lands: the product a*b, one factor, or both factors
/// independently. Orth penalizes overlap with earlier tasks' a-subspaces,
/// and OrthPlusL1Dw stacks both penalties.
enum class RegularizerMode {
    None,
    L1Dw,
    L1A,
    L1B,
    L1Ab,
    Orth,
    OrthPlusL1Dw,
};

std::string to_string(RegularizerMode mode);
RegularizerMode regularizer_mode_from_string(const std::string& name);

struct CrossEntropyResult {
    double loss = 0.0;
    Matrix grad_a;
    Matrix grad_b;
};

/// Mean negative log-softmax of the true class for a batch. Rows of `xs` are
/// examples, labels index columns of the effective weight matrix. Gradients
/// are with respect to the active adapter's factors:
///   G = X^T (softmax(Z) - onehot(Y)) / n,  grad_a = G b^T,  grad_b = a^T G.
CrossEntropyResult cross_entropy(const AdapterChain& chain, const Matrix& xs,
                                 const std::vector<int>& ys);

struct SparseLossResult {
    double loss = 0.0;
    Matrix grad_a;
    Matrix grad_b;
};

/// l1 penalty for the selected mode, with subgradient sign(0) = 0:
///   L1Dw: lambda * ||a b||_1, grad_a = lambda sign(ab) b^T, grad_b = lambda a^T sign(ab)
///   L1A:  lambda * ||a||_1 (gradient only on a); L1B symmetric
///   L1Ab: lambda * (||a||_1 + ||b||_1)
/// None/Orth contribute nothing here; OrthPlusL1Dw contributes its L1Dw part.
SparseLossResult sparse_loss(const LoraAdapter& ad, double lambda, RegularizerMode mode);

struct OrthLossResult {
    double loss = 0.0;
    Matrix grad_a;
};

/// lambda_orth * sum_i ||a_i^T a_t||_F^2 over history adapters, with
/// grad_a = 2 lambda_orth * sum_i a_i a_i^T a_t.
OrthLossResult orth_loss(const LoraAdapter& active, const std::vector<LoraAdapter>& history,
                         double lambda_orth);

struct LossBreakdown {
    double task_loss = 0.0;
    double reg_loss = 0.0;
    double total = 0.0;
    Matrix grad_a;
    Matrix grad_b;
};

/// Task loss plus the selected regularizer; gradients are the sums of the
/// constituents' gradients.
LossBreakdown total_objective(const AdapterChain& chain, const Matrix& xs,
                              const std::vector<int>& ys, double lambda, RegularizerMode mode,
                              double lambda_orth = 0.5);

}  // namespace nlora
