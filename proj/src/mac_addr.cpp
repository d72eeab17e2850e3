#include "cialab/mac_addr.hpp"

#include <cstdio>

#include "cialab/errors.hpp"

namespace cialab {

std::string MacAddr::format() const {
    char buf[18];
    std::snprintf(buf, sizeof(buf), "%02x:%02x:%02x:%02x:%02x:%02x", octets[0],
                  octets[1], octets[2], octets[3], octets[4], octets[5]);
    return buf;
}

static int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

MacAddr MacAddr::parse(const std::string& text) {
    if (text.size() != 17)
        throw InvalidArgumentError("bad MAC address '" + text + "'");
    MacAddr m;
    for (int i = 0; i < 6; ++i) {
        int hi = hex_nibble(text[i * 3]);
        int lo = hex_nibble(text[i * 3 + 1]);
        if (hi < 0 || lo < 0)
            throw InvalidArgumentError("bad MAC address '" + text + "'");
        if (i < 5 && text[i * 3 + 2] != ':')
            throw InvalidArgumentError("bad MAC address '" + text + "'");
        m.octets[i] = static_cast<std::uint8_t>(hi << 4 | lo);
    }
    return m;
}

}  // namespace cialab
