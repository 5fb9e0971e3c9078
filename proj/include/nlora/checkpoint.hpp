// Copyright (c) 2026 the nlora-lab authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "nlora/adapter.hpp"
#include "nlora/matrix.hpp"

namespace nlora {

enum class CheckpointErrorKind {
    MissingFile,
    BadMagic,
    BadVersion,
    BadDtype,
    Truncated,
    DimensionMismatch,
    NonFinite,
    BadManifest,
};

class CheckpointError : public std::runtime_error {
public:
    CheckpointError(CheckpointErrorKind kind, const std::filesystem::path& file,
                    const std::string& detail)
        : std::runtime_error(file.string() + ": " + detail), kind_(kind), file_(file) {}

    CheckpointErrorKind kind() const { return kind_; }
    const std::filesystem::path& file() const { return file_; }

private:
    CheckpointErrorKind kind_;
    std::filesystem::path file_;
};

// Single-matrix "MATX v1" file: magic 4D 41 54 58, u8 version = 1,
// u8 dtype = 0x01 (f64), u32 rows, u32 cols, then rows*cols f64 values in
// row-major order. All integers and doubles little-endian.
void save_matrix(const Matrix& m, const std::filesystem::path& file);
Matrix load_matrix(const std::filesystem::path& file);

// A chain is a directory: base.matx, adapter_<taskid>_A.matx,
// adapter_<taskid>_B.matx and manifest.json (task order, ranks, frozen
// flags, seeds, lambda per task). load(save(chain)) is bit-exact.
void save_checkpoint(const AdapterChain& chain, const std::filesystem::path& dir);
AdapterChain load_checkpoint(const std::filesystem::path& dir);

}  // namespace nlora
