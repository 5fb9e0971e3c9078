// Copyright (c) 2026 the nlora-lab authors
// SPDX-License-Identifier: Apache-2.0

#include "nlora/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include <json.hpp>

namespace nlora {

namespace {

constexpr unsigned char kMagic[4] = {0x4D, 0x41, 0x54, 0x58};  // "MATX"
constexpr unsigned char kVersion = 1;
constexpr unsigned char kDtypeF64 = 0x01;

void put_u32_le(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64_le(std::string& out, double v) {
    const std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

std::uint32_t get_u32_le(const std::string& data, std::size_t pos) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
        v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data[pos + i])) << (8 * i);
    }
    return v;
}

double get_f64_le(const std::string& data, std::size_t pos) {
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) {
        bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(data[pos + i])) << (8 * i);
    }
    return std::bit_cast<double>(bits);
}

std::string read_file(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        throw CheckpointError(CheckpointErrorKind::MissingFile, file, "cannot open file");
    }
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return data;
}

void write_file(const std::filesystem::path& file, const std::string& data) {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw CheckpointError(CheckpointErrorKind::MissingFile, file, "cannot open for writing");
    }
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) {
        throw CheckpointError(CheckpointErrorKind::Truncated, file, "short write");
    }
}

std::filesystem::path adapter_file(const std::filesystem::path& dir, int task_id, char which) {
    return dir / ("adapter_" + std::to_string(task_id) + "_" + which + ".matx");
}

Matrix load_adapter_factor(const std::filesystem::path& file, int expect_rows, int expect_cols) {
    Matrix m = load_matrix(file);
    if (m.rows() != expect_rows || m.cols() != expect_cols) {
        throw CheckpointError(CheckpointErrorKind::DimensionMismatch, file,
                              "expected " + std::to_string(expect_rows) + "x" +
                                  std::to_string(expect_cols) + " from manifest, file holds " +
                                  m.shape_str());
    }
    return m;
}

}  // namespace

void save_matrix(const Matrix& m, const std::filesystem::path& file) {
    std::string out;
    out.reserve(14 + m.size() * 8);
    out.append(reinterpret_cast<const char*>(kMagic), 4);
    out.push_back(static_cast<char>(kVersion));
    out.push_back(static_cast<char>(kDtypeF64));
    put_u32_le(out, static_cast<std::uint32_t>(m.rows()));
    put_u32_le(out, static_cast<std::uint32_t>(m.cols()));
    for (double v : m.values()) put_f64_le(out, v);
    write_file(file, out);
}

Matrix load_matrix(const std::filesystem::path& file) {
    const std::string data = read_file(file);
    if (data.size() < 4 || std::memcmp(data.data(), kMagic, 4) != 0) {
        throw CheckpointError(CheckpointErrorKind::BadMagic, file, "bad magic bytes");
    }
    if (data.size() < 14) {
        throw CheckpointError(CheckpointErrorKind::Truncated, file, "header truncated");
    }
    if (static_cast<unsigned char>(data[4]) != kVersion) {
        throw CheckpointError(CheckpointErrorKind::BadVersion, file,
                              "unsupported version " + std::to_string(data[4]));
    }
    if (static_cast<unsigned char>(data[5]) != kDtypeF64) {
        throw CheckpointError(CheckpointErrorKind::BadDtype, file,
                              "unsupported dtype code " + std::to_string(data[5]));
    }
    const std::uint32_t rows = get_u32_le(data, 6);
    const std::uint32_t cols = get_u32_le(data, 10);
    if (rows == 0 || cols == 0) {
        throw CheckpointError(CheckpointErrorKind::DimensionMismatch, file,
                              "declared dimensions " + std::to_string(rows) + "x" +
                                  std::to_string(cols) + " are invalid");
    }
    const std::size_t count = static_cast<std::size_t>(rows) * cols;
    const std::size_t expected = 14 + count * 8;
    if (data.size() != expected) {
        throw CheckpointError(CheckpointErrorKind::Truncated, file,
                              "declared " + std::to_string(rows) + "x" + std::to_string(cols) +
                                  " needs " + std::to_string(expected) + " bytes, file has " +
                                  std::to_string(data.size()));
    }
    std::vector<double> values(count);
    for (std::size_t i = 0; i < count; ++i) values[i] = get_f64_le(data, 14 + i * 8);
    Matrix m(static_cast<int>(rows), static_cast<int>(cols), std::move(values));
    if (!m.all_finite()) {
        throw CheckpointError(CheckpointErrorKind::NonFinite, file,
                              "payload contains non-finite values");
    }
    return m;
}

void save_checkpoint(const AdapterChain& chain, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    save_matrix(chain.base, dir / "base.matx");

    nlohmann::json manifest;
    manifest["format"] = "nlora-chain";
    manifest["version"] = 1;
    nlohmann::json adapters = nlohmann::json::array();
    auto describe = [](const LoraAdapter& ad) {
        return nlohmann::json{{"task_id", ad.task_id}, {"rank", ad.rank},
                              {"frozen", ad.frozen},   {"seed", ad.seed},
                              {"lambda", ad.lambda}};
    };
    std::vector<int> order;
    for (const LoraAdapter& ad : chain.history) {
        adapters.push_back(describe(ad));
        order.push_back(ad.task_id);
        save_matrix(ad.a, adapter_file(dir, ad.task_id, 'A'));
        save_matrix(ad.b, adapter_file(dir, ad.task_id, 'B'));
    }
    if (chain.active) {
        adapters.push_back(describe(*chain.active));
        order.push_back(chain.active->task_id);
        save_matrix(chain.active->a, adapter_file(dir, chain.active->task_id, 'A'));
        save_matrix(chain.active->b, adapter_file(dir, chain.active->task_id, 'B'));
    }
    manifest["task_order"] = order;
    manifest["adapters"] = adapters;

    std::ofstream out(dir / "manifest.json", std::ios::trunc);
    out << manifest.dump(2) << "\n";
    if (!out) {
        throw CheckpointError(CheckpointErrorKind::Truncated, dir / "manifest.json",
                              "short write");
    }
}

AdapterChain load_checkpoint(const std::filesystem::path& dir) {
    const std::filesystem::path manifest_file = dir / "manifest.json";
    nlohmann::json manifest;
    {
        std::ifstream in(manifest_file);
        if (!in) {
            throw CheckpointError(CheckpointErrorKind::MissingFile, manifest_file,
                                  "cannot open file");
        }
        try {
            in >> manifest;
        } catch (const nlohmann::json::exception& e) {
            throw CheckpointError(CheckpointErrorKind::BadManifest, manifest_file, e.what());
        }
    }
    if (!manifest.contains("adapters") || !manifest["adapters"].is_array()) {
        throw CheckpointError(CheckpointErrorKind::BadManifest, manifest_file,
                              "missing adapters array");
    }

    AdapterChain chain = AdapterChain::from_base(load_matrix(dir / "base.matx"));
    int last_frozen_id = INT32_MIN;
    for (const auto& entry : manifest["adapters"]) {
        LoraAdapter ad;
        try {
            ad.task_id = entry.at("task_id").get<int>();
            ad.rank = entry.at("rank").get<int>();
            ad.frozen = entry.at("frozen").get<bool>();
            ad.seed = entry.at("seed").get<std::uint64_t>();
            ad.lambda = entry.at("lambda").get<double>();
        } catch (const nlohmann::json::exception& e) {
            throw CheckpointError(CheckpointErrorKind::BadManifest, manifest_file, e.what());
        }
        if (ad.rank < 1 || ad.rank > std::min(chain.d(), chain.k())) {
            throw CheckpointError(CheckpointErrorKind::BadManifest, manifest_file,
                                  "adapter " + std::to_string(ad.task_id) +
                                      " has out-of-range rank " + std::to_string(ad.rank));
        }
        ad.a = load_adapter_factor(adapter_file(dir, ad.task_id, 'A'), chain.d(), ad.rank);
        ad.b = load_adapter_factor(adapter_file(dir, ad.task_id, 'B'), ad.rank, chain.k());
        if (ad.frozen) {
            if (chain.active) {
                throw CheckpointError(CheckpointErrorKind::BadManifest, manifest_file,
                                      "frozen adapter listed after the active one");
            }
            if (ad.task_id <= last_frozen_id) {
                throw CheckpointError(CheckpointErrorKind::BadManifest, manifest_file,
                                      "history task ids are not strictly increasing");
            }
            last_frozen_id = ad.task_id;
            add_in_place(chain.merged, delta_w(ad));
            chain.history.push_back(std::move(ad));
        } else {
            if (chain.active) {
                throw CheckpointError(CheckpointErrorKind::BadManifest, manifest_file,
                                      "more than one active adapter");
            }
            chain.active = std::move(ad);
        }
    }
    return chain;
}

}  // namespace nlora
