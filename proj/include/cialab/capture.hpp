#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cialab/packet.hpp"

namespace cialab {

enum class LabelClass { normal, interference };

std::string to_string(LabelClass c);

inline std::uint8_t label_value(LabelClass c) {
    return c == LabelClass::interference ? 1 : 0;
}

/**
 * Capture provenance. Only label_class is semantically load-bearing; the
 * rest records how the capture was made. created_unix is wall-clock and is
 * excluded from equality; none of these fields are persisted to CSV.
 */
struct CaptureMeta {
    std::string spec_hash;
    std::uint64_t seed = 0;
    LabelClass label_class = LabelClass::normal;
    std::int64_t created_unix = 0;

    bool operator==(const CaptureMeta& o) const {
        return spec_hash == o.spec_hash && seed == o.seed &&
               label_class == o.label_class;
    }
};

/**
 * An ordered packet capture, the unit of persistence. Records are sorted
 * by timestamp (nondecreasing) and every record's label matches the
 * capture's label class.
 */
struct CaptureSet {
    CaptureMeta meta;
    std::vector<Packet> records;

    void validate() const;

    // Nominal duration: the last timestamp rounded up to whole seconds.
    double duration_s() const;

    bool operator==(const CaptureSet& o) const {
        return meta == o.meta && records == o.records;
    }
};

// Number of adjacent pairs, per destination, whose sequence numbers are not
// consecutive mod 256. A clean single-camera stream scores 0 everywhere.
std::map<MacAddr, std::size_t> count_seq_discontinuities(const CaptureSet& capture);

// Same scan restricted to records with timestamp_us in [begin_us, end_us).
std::map<MacAddr, std::size_t> count_seq_discontinuities(const CaptureSet& capture,
                                                         std::uint64_t begin_us,
                                                         std::uint64_t end_us);

}  // namespace cialab
