// Copyright (c) 2026 the nlora-lab authors
// SPDX-License-Identifier: Apache-2.0

#include "nlora/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nlora {

std::string to_string(RegularizerMode mode) {
    switch (mode) {
        case RegularizerMode::None: return "none";
        case RegularizerMode::L1Dw: return "l1_dw";
        case RegularizerMode::L1A: return "l1_a";
        case RegularizerMode::L1B: return "l1_b";
        case RegularizerMode::L1Ab: return "l1_ab";
        case RegularizerMode::Orth: return "orth";
        case RegularizerMode::OrthPlusL1Dw: return "orth_plus_l1_dw";
    }
    return "none";
}

RegularizerMode regularizer_mode_from_string(const std::string& name) {
    if (name == "none") return RegularizerMode::None;
    if (name == "l1_dw") return RegularizerMode::L1Dw;
    if (name == "l1_a") return RegularizerMode::L1A;
    if (name == "l1_b") return RegularizerMode::L1B;
    if (name == "l1_ab") return RegularizerMode::L1Ab;
    if (name == "orth") return RegularizerMode::Orth;
    if (name == "orth_plus_l1_dw") return RegularizerMode::OrthPlusL1Dw;
    throw std::invalid_argument("unknown regularizer mode \"" + name + "\"");
}

CrossEntropyResult cross_entropy(const AdapterChain& chain, const Matrix& xs,
                                 const std::vector<int>& ys) {
    if (!chain.active) {
        throw std::logic_error("cross_entropy: chain has no active adapter");
    }
    const int n = xs.rows();
    if (n == 0 || ys.empty()) {
        throw std::invalid_argument("cross_entropy: empty batch");
    }
    if (static_cast<int>(ys.size()) != n) {
        throw std::invalid_argument("cross_entropy: " + std::to_string(n) + " examples but " +
                                    std::to_string(ys.size()) + " labels");
    }
    if (xs.cols() != chain.d()) {
        throw std::invalid_argument("cross_entropy: feature dim " + std::to_string(xs.cols()) +
                                    " does not match model dim " + std::to_string(chain.d()));
    }
    const int k = chain.k();
    for (int label : ys) {
        if (label < 0 || label >= k) {
            throw std::invalid_argument("cross_entropy: label " + std::to_string(label) +
                                        " outside [0, " + std::to_string(k) + ")");
        }
    }

    const Matrix weights = chain.effective_weights();
    Matrix logits = matmul(xs, weights);  // n x k

    // Stable row softmax; `logits` becomes the probability matrix, and after
    // subtracting the one-hot labels, the scaled logit gradient.
    double loss = 0.0;
    for (int i = 0; i < n; ++i) {
        double zmax = logits.at(i, 0);
        for (int j = 1; j < k; ++j) zmax = std::max(zmax, logits.at(i, j));
        double denom = 0.0;
        for (int j = 0; j < k; ++j) denom += std::exp(logits.at(i, j) - zmax);
        const double log_denom = std::log(denom);
        loss += -(logits.at(i, ys[static_cast<std::size_t>(i)]) - zmax - log_denom);
        for (int j = 0; j < k; ++j) {
            logits.at(i, j) = std::exp(logits.at(i, j) - zmax - log_denom);
        }
        logits.at(i, ys[static_cast<std::size_t>(i)]) -= 1.0;
    }
    loss /= n;
    const double inv_n = 1.0 / n;
    for (auto& v : logits.raw()) v *= inv_n;

    const Matrix g = matmul(transpose(xs), logits);  // d x k

    CrossEntropyResult out;
    out.loss = loss;
    out.grad_a = matmul(g, transpose(chain.active->b));
    out.grad_b = matmul(transpose(chain.active->a), g);
    return out;
}

SparseLossResult sparse_loss(const LoraAdapter& ad, double lambda, RegularizerMode mode) {
    if (lambda < 0.0) {
        throw std::invalid_argument("sparse_loss: negative lambda " + std::to_string(lambda));
    }
    SparseLossResult out;
    out.grad_a = Matrix::zeros(ad.a.rows(), ad.a.cols());
    out.grad_b = Matrix::zeros(ad.b.rows(), ad.b.cols());
    if (lambda == 0.0) return out;

    switch (mode) {
        case RegularizerMode::None:
        case RegularizerMode::Orth:
            break;
        case RegularizerMode::L1Dw:
        case RegularizerMode::OrthPlusL1Dw: {
            const Matrix dw = delta_w(ad);
            const Matrix sgn = elementwise_sign(dw);
            out.loss = lambda * l1_norm(dw);
            out.grad_a = scale(matmul(sgn, transpose(ad.b)), lambda);
            out.grad_b = scale(matmul(transpose(ad.a), sgn), lambda);
            break;
        }
        case RegularizerMode::L1A:
            out.loss = lambda * l1_norm(ad.a);
            out.grad_a = scale(elementwise_sign(ad.a), lambda);
            break;
        case RegularizerMode::L1B:
            out.loss = lambda * l1_norm(ad.b);
            out.grad_b = scale(elementwise_sign(ad.b), lambda);
            break;
        case RegularizerMode::L1Ab:
            out.loss = lambda * (l1_norm(ad.a) + l1_norm(ad.b));
            out.grad_a = scale(elementwise_sign(ad.a), lambda);
            out.grad_b = scale(elementwise_sign(ad.b), lambda);
            break;
    }
    return out;
}

OrthLossResult orth_loss(const LoraAdapter& active, const std::vector<LoraAdapter>& history,
                         double lambda_orth) {
    OrthLossResult out;
    out.grad_a = Matrix::zeros(active.a.rows(), active.a.cols());
    for (const LoraAdapter& past : history) {
        if (past.a.rows() != active.a.rows()) {
            throw std::invalid_argument("orth_loss: adapter " + std::to_string(past.task_id) +
                                        " has dim " + past.a.shape_str() +
                                        ", active adapter has " + active.a.shape_str());
        }
        const Matrix cross = matmul(transpose(past.a), active.a);
        for (double v : cross.values()) out.loss += v * v;
        // d/dA_t ||A_i^T A_t||_F^2 = 2 A_i A_i^T A_t
        axpy_in_place(out.grad_a, 2.0 * lambda_orth, matmul(past.a, cross));
    }
    out.loss *= lambda_orth;
    return out;
}

LossBreakdown total_objective(const AdapterChain& chain, const Matrix& xs,
                              const std::vector<int>& ys, double lambda, RegularizerMode mode,
                              double lambda_orth) {
    CrossEntropyResult task = cross_entropy(chain, xs, ys);

    LossBreakdown out;
    out.task_loss = task.loss;
    out.grad_a = std::move(task.grad_a);
    out.grad_b = std::move(task.grad_b);

    const SparseLossResult sparse = sparse_loss(*chain.active, lambda, mode);
    out.reg_loss = sparse.loss;
    add_in_place(out.grad_a, sparse.grad_a);
    add_in_place(out.grad_b, sparse.grad_b);

    if (mode == RegularizerMode::Orth || mode == RegularizerMode::OrthPlusL1Dw) {
        const OrthLossResult orth = orth_loss(*chain.active, chain.history, lambda_orth);
        out.reg_loss += orth.loss;
        add_in_place(out.grad_a, orth.grad_a);
    }

    out.total = out.task_loss + out.reg_loss;
    return out;
}

}  // namespace nlora
