#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>

namespace cialab {

/**
 * Ethernet hardware address. Canonical text form is six lowercase hex
 * pairs joined by colons ("02:00:00:00:01:01"); parse(format(m)) == m.
 */
struct MacAddr {
    std::array<std::uint8_t, 6> octets{};

    std::string format() const;
    static MacAddr parse(const std::string& text);

    auto operator<=>(const MacAddr&) const = default;
};

}  // namespace cialab
