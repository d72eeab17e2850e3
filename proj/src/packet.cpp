#include "cialab/packet.hpp"

#include "cialab/errors.hpp"

namespace cialab {

void PayloadUnit::validate() const {
    if (unit_type < 1 || unit_type > 23)
        throw InvalidArgumentError("unit_type " + std::to_string(unit_type) +
                                   " outside 1..23");
    if (data.empty()) throw InvalidArgumentError("payload unit has no data");
}

void Packet::validate() const {
    if (length < kMinFrameBytes || length > kMaxFrameBytes)
        throw InvalidArgumentError("packet length " + std::to_string(length) +
                                   " outside " + std::to_string(kMinFrameBytes) +
                                   ".." + std::to_string(kMaxFrameBytes));
    if (label > 1) throw InvalidArgumentError("label must be 0 or 1");
    if (source_id.empty() || source_id.find(',') != std::string::npos ||
        source_id.find('\n') != std::string::npos)
        throw InvalidArgumentError("source_id must be nonempty and free of ',' and newlines");
}

std::vector<std::size_t> fragment_lengths(std::size_t unit_size, std::size_t max_body) {
    if (max_body < 1) throw InvalidArgumentError("max_body must be >= 1");
    if (unit_size < 1) throw InvalidArgumentError("unit size must be >= 1");
    std::vector<std::size_t> lens;
    if (unit_size <= max_body) {
        lens.push_back(unit_size);
        return lens;
    }
    std::size_t count = (unit_size + max_body - 1) / max_body;
    lens.assign(count, max_body);
    std::size_t tail = unit_size - (count - 1) * max_body;
    lens.back() = tail;
    return lens;
}

std::vector<Fragment> fragment_unit(const PayloadUnit& unit, std::size_t max_body) {
    if (max_body < 1) throw InvalidArgumentError("max_body must be >= 1");
    unit.validate();

    std::vector<Fragment> out;
    if (unit.data.size() <= max_body) {
        Fragment f;
        f.fragmented = false;
        f.fu_indicator = unit.unit_type;  // plain unit-type byte, no FU header
        f.fu_header = 0;
        f.body = unit.data;
        out.push_back(std::move(f));
        return out;
    }

    auto lens = fragment_lengths(unit.data.size(), max_body);
    out.reserve(lens.size());
    std::size_t offset = 0;
    for (std::size_t i = 0; i < lens.size(); ++i) {
        Fragment f;
        f.fragmented = true;
        f.fu_indicator = kFuIndicator;
        f.fu_header = unit.unit_type;
        if (i == 0) f.fu_header |= kFuStartBit;
        if (i + 1 == lens.size()) f.fu_header |= kFuEndBit;
        f.body.assign(unit.data.begin() + offset, unit.data.begin() + offset + lens[i]);
        offset += lens[i];
        out.push_back(std::move(f));
    }
    return out;
}

PayloadUnit reassemble(const std::vector<Fragment>& fragments) {
    if (fragments.empty()) throw MalformedStreamError(0, "empty fragment list");

    if (!fragments.front().fragmented) {
        if (fragments.size() > 1)
            throw MalformedStreamError(1, "data after an unfragmented unit");
        PayloadUnit u;
        u.unit_type = fragments.front().unit_type();
        u.data = fragments.front().body;
        u.validate();
        return u;
    }

    const std::uint8_t type = fragments.front().unit_type();
    if (!fragments.front().start_bit())
        throw MalformedStreamError(0, "first fragment lacks start bit");

    PayloadUnit u;
    u.unit_type = type;
    for (std::size_t i = 0; i < fragments.size(); ++i) {
        const Fragment& f = fragments[i];
        if (!f.fragmented)
            throw MalformedStreamError(i, "unfragmented unit inside an FU sequence");
        if ((f.fu_indicator & kUnitTypeMask) != (kFuIndicator & kUnitTypeMask))
            throw MalformedStreamError(i, "FU indicator type is not 28");
        if (f.unit_type() != type)
            throw MalformedStreamError(i, "unit_type changes mid-sequence");
        if (i > 0 && f.start_bit())
            throw MalformedStreamError(i, "unexpected start bit (gap in sequence)");
        if (i + 1 < fragments.size() && f.end_bit())
            throw MalformedStreamError(i, "end bit before the last fragment");
        if (f.body.empty()) throw MalformedStreamError(i, "empty fragment body");
        u.data.insert(u.data.end(), f.body.begin(), f.body.end());
    }
    if (!fragments.back().end_bit())
        throw MalformedStreamError(fragments.size() - 1, "last fragment lacks end bit");
    return u;
}

namespace detail {

std::vector<Packet> packetize_lengths(std::span<const std::size_t> body_lengths,
                                      const MacAddr& src, const MacAddr& dst,
                                      const std::string& source_id, int start_seq,
                                      const Clock& clock, std::uint32_t overhead) {
    if (start_seq < 0 || start_seq >= kSeqModulus)
        throw InvalidArgumentError("start_seq " + std::to_string(start_seq) +
                                   " outside 0..255");
    std::vector<Packet> out;
    out.reserve(body_lengths.size());
    int seq = start_seq;
    for (std::size_t len : body_lengths) {
        Packet p;
        p.timestamp_us = clock();
        p.src = src;
        p.dst = dst;
        p.seq = static_cast<std::uint8_t>(seq);
        p.length = overhead + static_cast<std::uint32_t>(len);
        p.source_id = source_id;
        p.label = 0;
        p.validate();
        if (!out.empty() && p.timestamp_us < out.back().timestamp_us)
            throw InvalidArgumentError("clock went backwards");
        out.push_back(std::move(p));
        seq = (seq + 1) % kSeqModulus;
    }
    return out;
}

}  // namespace detail

std::vector<Packet> packetize(const std::vector<Fragment>& fragments,
                              const MacAddr& src, const MacAddr& dst,
                              const std::string& source_id, int start_seq,
                              const Clock& clock, std::uint32_t overhead) {
    std::vector<std::size_t> lens;
    lens.reserve(fragments.size());
    for (const Fragment& f : fragments) lens.push_back(f.body.size());
    return detail::packetize_lengths(lens, src, dst, source_id, start_seq, clock,
                                     overhead);
}

}  // namespace cialab
