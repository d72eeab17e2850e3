#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cialab/mac_addr.hpp"

namespace cialab {

// On-wire layout: Ethernet(14) + IPv4(20) + UDP(8) = 42 bytes of network
// headers, followed by a 12-byte application header that carries the 8-bit
// sequence counter, the stream id and the FU signaling bits. A full
// 1420-byte fragment body therefore rides in a 1474-byte frame.
inline constexpr std::uint32_t kNetOverheadBytes = 42;
inline constexpr std::uint32_t kAppHeaderBytes = 12;
inline constexpr std::uint32_t kWireOverheadBytes = kNetOverheadBytes + kAppHeaderBytes;
inline constexpr std::uint32_t kDefaultMaxBody = 1420;
inline constexpr std::uint32_t kMaxFrameBytes = 1514;
inline constexpr std::uint32_t kMinFrameBytes = kNetOverheadBytes + 1;
inline constexpr int kSeqModulus = 256;

// FU indicator type code for fragmentation units (F=0, NRI=3).
inline constexpr std::uint8_t kFuIndicator = 0x7C;
inline constexpr std::uint8_t kFuStartBit = 0x80;
inline constexpr std::uint8_t kFuEndBit = 0x40;
inline constexpr std::uint8_t kUnitTypeMask = 0x1F;

/**
 * A coded-video unit before fragmentation. unit_type follows the 1..23
 * single-unit code range; data is the unit payload, at least one byte.
 */
struct PayloadUnit {
    std::uint8_t unit_type = 1;
    std::vector<std::uint8_t> data;

    void validate() const;
    bool operator==(const PayloadUnit&) const = default;
};

/**
 * One transmission unit produced by fragment_unit. When `fragmented` is
 * true the unit was split and fu_indicator/fu_header carry FU-A signaling;
 * otherwise the unit fit in one packet and is emitted without FU bytes
 * (fu_indicator then holds the plain unit-type byte, fu_header is 0).
 */
struct Fragment {
    std::uint8_t fu_indicator = 0;
    std::uint8_t fu_header = 0;
    bool fragmented = false;
    std::vector<std::uint8_t> body;

    bool start_bit() const { return fragmented && (fu_header & kFuStartBit); }
    bool end_bit() const { return fragmented && (fu_header & kFuEndBit); }
    std::uint8_t unit_type() const {
        return (fragmented ? fu_header : fu_indicator) & kUnitTypeMask;
    }
};

/**
 * One frame on the wire, reduced to the fields the lab needs. `length` is
 * the full frame length including all headers. `label` is the per-capture
 * ground truth: 0 in interference-free captures, 1 in attack captures.
 */
struct Packet {
    std::uint64_t timestamp_us = 0;
    MacAddr src;
    MacAddr dst;
    std::uint8_t seq = 0;
    std::uint32_t length = 0;
    std::string source_id;
    std::uint8_t label = 0;

    void validate() const;
    bool operator==(const Packet&) const = default;
};

/**
 * Split a payload unit into FU-A fragments of at most max_body bytes.
 * Every body except possibly the last has exactly max_body bytes; a unit
 * that already fits is returned as a single unfragmented entry.
 */
std::vector<Fragment> fragment_unit(const PayloadUnit& unit, std::size_t max_body);

// Body lengths fragment_unit would produce, without materializing bytes.
// The generator hot path uses this; equivalence is property-tested.
std::vector<std::size_t> fragment_lengths(std::size_t unit_size, std::size_t max_body);

/**
 * Inverse of fragment_unit. The input must be the complete, ordered
 * fragment sequence of exactly one unit; anything else raises
 * MalformedStreamError naming the first offending index.
 */
PayloadUnit reassemble(const std::vector<Fragment>& fragments);

using Clock = std::function<std::uint64_t()>;

/**
 * Wrap fragments into wire packets with consecutive sequence numbers
 * (mod 256) starting at start_seq. Each packet's length is overhead plus
 * its fragment's body length; timestamps come from `clock` and must be
 * nondecreasing.
 */
std::vector<Packet> packetize(const std::vector<Fragment>& fragments,
                              const MacAddr& src, const MacAddr& dst,
                              const std::string& source_id, int start_seq,
                              const Clock& clock,
                              std::uint32_t overhead = kWireOverheadBytes);

namespace detail {

// Shared by packetize and the stream generator: body lengths in, packets out.
std::vector<Packet> packetize_lengths(std::span<const std::size_t> body_lengths,
                                      const MacAddr& src, const MacAddr& dst,
                                      const std::string& source_id, int start_seq,
                                      const Clock& clock, std::uint32_t overhead);

}  // namespace detail

}  // namespace cialab
