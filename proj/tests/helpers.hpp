#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cialab/capture.hpp"

namespace testutil {

// Unique per-test scratch directory, removed on destruction.
struct TempDir {
    std::filesystem::path path;

    TempDir() {
        const auto base = std::filesystem::temp_directory_path();
        std::random_device rd;
        for (int attempt = 0; attempt < 64; ++attempt) {
            auto candidate = base / ("cialab-test-" + std::to_string(rd()));
            std::error_code ec;
            if (std::filesystem::create_directory(candidate, ec)) {
                path = std::move(candidate);
                return;
            }
        }
        throw std::runtime_error("could not create a temp directory");
    }

    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }

    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string file(const std::string& name) const { return (path / name).string(); }
};

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void spit(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) throw std::runtime_error("cannot write " + path);
}

inline cialab::MacAddr mac(std::uint8_t last) {
    return cialab::MacAddr{{0x02, 0x00, 0x00, 0x00, 0x00, last}};
}

inline cialab::Packet packet(std::uint64_t ts, int seq, std::uint32_t length,
                             std::uint8_t label = 0) {
    cialab::Packet p;
    p.timestamp_us = ts;
    p.src = mac(1);
    p.dst = mac(2);
    p.seq = static_cast<std::uint8_t>(seq);
    p.length = length;
    p.source_id = "cam";
    p.label = label;
    return p;
}

inline cialab::CaptureSet capture(std::vector<cialab::Packet> records,
                                  cialab::LabelClass cls = cialab::LabelClass::normal) {
    cialab::CaptureSet cap;
    cap.meta.spec_hash = "test";
    cap.meta.seed = 7;
    cap.meta.label_class = cls;
    cap.records = std::move(records);
    return cap;
}

// Capture from a bare length sequence, timestamps 1 ms apart, seq chained.
inline cialab::CaptureSet capture_of_lengths(const std::vector<std::uint32_t>& lengths,
                                             std::uint8_t label = 0) {
    std::vector<cialab::Packet> records;
    records.reserve(lengths.size());
    for (std::size_t i = 0; i < lengths.size(); ++i) {
        records.push_back(packet(i * 1000, static_cast<int>(i % 256), lengths[i], label));
    }
    return capture(std::move(records), label == 1 ? cialab::LabelClass::interference
                                                  : cialab::LabelClass::normal);
}

}  // namespace testutil
