// Copyright (c) 2026 the nlora-lab authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "nlora/matrix.hpp"

namespace nlora {

/// One task's low-rank update, delta = a * b. `a` is d x rank, `b` is
/// rank x k. Frozen adapters are never mutated again; the training loop and
/// the checkpoint reader both enforce it.
struct LoraAdapter {
    int task_id = 0;
    Matrix a;
    Matrix b;
    int rank = 0;
    bool frozen = false;
    std::uint64_t seed = 0;   // init seed, kept for the checkpoint manifest
    double lambda = 0.0;      // sparsity weight the adapter was trained with
};

/// Fresh adapter: a ~ N(0, 0.02^2) from a generator seeded by `seed`, b = 0,
/// so delta_w is exactly zero at birth and the merged model's behaviour is
/// unchanged until training starts.
LoraAdapter new_adapter(int task_id, int d, int k, int rank, std::uint64_t seed);

Matrix delta_w(const LoraAdapter& ad);

/// Frozen base weights plus the ordered frozen adapters merged into one
/// dense matrix, plus at most one active (trainable) adapter. Single-writer:
/// concurrent reads are fine between mutations.
struct AdapterChain {
    Matrix base;
    Matrix merged;
    std::vector<LoraAdapter> history;
    std::optional<LoraAdapter> active;

    static AdapterChain from_base(Matrix base_weights);

    int d() const { return base.rows(); }
    int k() const { return base.cols(); }

    /// base + sum of history deltas, accumulated in history order (the same
    /// order freeze_and_merge used, so the result is bit-comparable).
    Matrix recompute_merged() const;

    /// Weights the forward pass sees: merged, plus the active delta if any.
    Matrix effective_weights() const;
};

/// Freezes the active adapter, folds its delta into `merged`, appends it to
/// history and clears the active slot. Predictions through the chain are
/// unchanged. Throws std::logic_error when no adapter is active or the
/// task_id would break the strictly-increasing history order.
void freeze_and_merge(AdapterChain& chain);

}  // namespace nlora
