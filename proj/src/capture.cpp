#include "cialab/capture.hpp"

#include <cmath>

#include "cialab/errors.hpp"

namespace cialab {

std::string to_string(LabelClass c) {
    return c == LabelClass::interference ? "interference" : "normal";
}

void CaptureSet::validate() const {
    const std::uint8_t expect = label_value(meta.label_class);
    std::uint64_t prev_ts = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const Packet& p = records[i];
        p.validate();
        if (p.label != expect)
            throw ValidationError("record " + std::to_string(i) + " label " +
                                  std::to_string(p.label) + " contradicts capture class " +
                                  to_string(meta.label_class));
        if (i > 0 && p.timestamp_us < prev_ts)
            throw ValidationError("record " + std::to_string(i) +
                                  " breaks timestamp ordering");
        prev_ts = p.timestamp_us;
    }
}

double CaptureSet::duration_s() const {
    if (records.empty()) return 0.0;
    return std::ceil(static_cast<double>(records.back().timestamp_us) / 1e6);
}

std::map<MacAddr, std::size_t> count_seq_discontinuities(const CaptureSet& capture) {
    return count_seq_discontinuities(capture, 0, UINT64_MAX);
}

std::map<MacAddr, std::size_t> count_seq_discontinuities(const CaptureSet& capture,
                                                         std::uint64_t begin_us,
                                                         std::uint64_t end_us) {
    std::map<MacAddr, std::size_t> counts;
    std::map<MacAddr, int> prev;  // last seq seen per destination
    for (const Packet& p : capture.records) {
        if (p.timestamp_us < begin_us || p.timestamp_us >= end_us) continue;
        counts.try_emplace(p.dst, 0);
        auto it = prev.find(p.dst);
        if (it != prev.end() && p.seq != (it->second + 1) % kSeqModulus)
            ++counts[p.dst];
        prev[p.dst] = p.seq;
    }
    return counts;
}

}  // namespace cialab
