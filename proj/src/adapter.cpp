// Copyright (c) 2026 the nlora-lab authors
// SPDX-License-Identifier: Apache-2.0

#include "nlora/adapter.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "nlora/rng.hpp"

namespace nlora {

LoraAdapter new_adapter(int task_id, int d, int k, int rank, std::uint64_t seed) {
    if (rank < 1 || rank > std::min(d, k)) {
        throw std::invalid_argument("new_adapter: rank " + std::to_string(rank) +
                                    " out of range [1, min(" + std::to_string(d) + ", " +
                                    std::to_string(k) + ")]");
    }
    LoraAdapter ad;
    ad.task_id = task_id;
    ad.rank = rank;
    Rng rng(seed);
    ad.a = Matrix::gaussian(d, rank, 0.02, rng);
    ad.b = Matrix::zeros(rank, k);
    ad.frozen = false;
    ad.seed = seed;
    return ad;
}

Matrix delta_w(const LoraAdapter& ad) { return matmul(ad.a, ad.b); }

AdapterChain AdapterChain::from_base(Matrix base_weights) {
    AdapterChain chain;
    chain.base = base_weights;
    chain.merged = std::move(base_weights);
    return chain;
}

Matrix AdapterChain::recompute_merged() const {
    Matrix out = base;
    for (const LoraAdapter& ad : history) add_in_place(out, delta_w(ad));
    return out;
}

Matrix AdapterChain::effective_weights() const {
    if (!active) return merged;
    Matrix out = merged;
    add_in_place(out, delta_w(*active));
    return out;
}

void freeze_and_merge(AdapterChain& chain) {
    if (!chain.active) {
        throw std::logic_error("freeze_and_merge: no active adapter in the chain");
    }
    if (!chain.history.empty() && chain.active->task_id <= chain.history.back().task_id) {
        throw std::logic_error("freeze_and_merge: task_id " +
                               std::to_string(chain.active->task_id) +
                               " does not extend the strictly increasing history");
    }
    LoraAdapter ad = std::move(*chain.active);
    chain.active.reset();
    ad.frozen = true;
    add_in_place(chain.merged, delta_w(ad));
    chain.history.push_back(std::move(ad));
}

}  // namespace nlora
