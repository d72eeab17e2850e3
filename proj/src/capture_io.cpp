#include "cialab/capture_io.hpp"

#include <charconv>
#include <cstring>
#include <fstream>
#include <vector>

#include "cialab/errors.hpp"

namespace cialab {

void write_csv(const CaptureSet& capture, const std::string& path) {
    capture.validate();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path, "cannot open for writing");
    out << kCaptureCsvHeader << "\n";
    char buf[64];
    for (const Packet& p : capture.records) {
        std::snprintf(buf, sizeof(buf), "%llu",
                      static_cast<unsigned long long>(p.timestamp_us));
        out << buf << ',' << p.src.format() << ',' << p.dst.format() << ','
            << static_cast<int>(p.seq) << ',' << p.length << ',' << p.source_id << ','
            << static_cast<int>(p.label) << '\n';
    }
    out.flush();
    if (!out) throw IoError(path, "write failed");
}

namespace {

std::uint64_t parse_u64(const std::string& path, std::size_t line,
                        std::string_view field, std::uint64_t max,
                        const char* name) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw ParseError(path, line, std::string("bad ") + name + " '" +
                                         std::string(field) + "'");
    if (v > max)
        throw ParseError(path, line, std::string(name) + " " + std::to_string(v) +
                                         " exceeds " + std::to_string(max));
    return v;
}

}  // namespace

CaptureSet read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path, "cannot open for reading");

    std::string line;
    if (!std::getline(in, line)) throw ParseError(path, 1, "empty file, header expected");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCaptureCsvHeader)
        throw ParseError(path, 1, "bad header, expected '" +
                                      std::string(kCaptureCsvHeader) + "'");

    CaptureSet capture;
    std::size_t lineno = 1;
    bool saw_label[2] = {false, false};
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        std::string_view rest = line;
        std::string_view field[7];
        for (int i = 0; i < 7; ++i) {
            auto comma = rest.find(',');
            if (i < 6) {
                if (comma == std::string_view::npos)
                    throw ParseError(path, lineno, "expected 7 fields");
                field[i] = rest.substr(0, comma);
                rest.remove_prefix(comma + 1);
            } else {
                if (comma != std::string_view::npos)
                    throw ParseError(path, lineno, "expected 7 fields");
                field[i] = rest;
            }
        }

        Packet p;
        p.timestamp_us = parse_u64(path, lineno, field[0], UINT64_MAX, "timestamp_us");
        try {
            p.src = MacAddr::parse(std::string(field[1]));
            p.dst = MacAddr::parse(std::string(field[2]));
        } catch (const InvalidArgumentError& e) {
            throw ParseError(path, lineno, e.what());
        }
        p.seq = static_cast<std::uint8_t>(parse_u64(path, lineno, field[3], 255, "seq"));
        p.length = static_cast<std::uint32_t>(
            parse_u64(path, lineno, field[4], kMaxFrameBytes, "length"));
        if (p.length < kMinFrameBytes)
            throw ParseError(path, lineno, "length " + std::to_string(p.length) +
                                               " below minimum frame size");
        p.source_id = std::string(field[5]);
        if (p.source_id.empty())
            throw ParseError(path, lineno, "empty source_id");
        p.label = static_cast<std::uint8_t>(parse_u64(path, lineno, field[6], 1, "label"));
        saw_label[p.label] = true;

        if (!capture.records.empty() &&
            p.timestamp_us < capture.records.back().timestamp_us)
            throw ValidationError(path + ":" + std::to_string(lineno) +
                                  ": timestamps out of order");
        capture.records.push_back(std::move(p));
    }

    if (saw_label[0] && saw_label[1])
        throw ValidationError(path + ": mixed labels in one capture");
    capture.meta.label_class =
        saw_label[1] ? LabelClass::interference : LabelClass::normal;
    capture.validate();
    return capture;
}

// ---- pcap export ----

namespace {

#pragma pack(push, 1)
struct PcapGlobalHeader {
    std::uint32_t magic_number;
    std::uint16_t version_major;
    std::uint16_t version_minor;
    std::int32_t thiszone;
    std::uint32_t sigfigs;
    std::uint32_t snaplen;
    std::uint32_t network;
};

struct PcapRecordHeader {
    std::uint32_t ts_sec;
    std::uint32_t ts_usec;
    std::uint32_t incl_len;
    std::uint32_t orig_len;
};
#pragma pack(pop)

void put_be16(std::uint8_t* p, std::uint16_t v) {
    p[0] = static_cast<std::uint8_t>(v >> 8);
    p[1] = static_cast<std::uint8_t>(v);
}

void put_be32(std::uint8_t* p, std::uint32_t v) {
    put_be16(p, static_cast<std::uint16_t>(v >> 16));
    put_be16(p + 2, static_cast<std::uint16_t>(v));
}

std::uint16_t ip_checksum(const std::uint8_t* header, std::size_t len) {
    std::uint32_t sum = 0;
    for (std::size_t i = 0; i + 1 < len; i += 2)
        sum += static_cast<std::uint32_t>(header[i]) << 8 | header[i + 1];
    while (sum >> 16) sum = (sum & 0xFFFF) + (sum >> 16);
    return static_cast<std::uint16_t>(~sum);
}

std::uint8_t stream_byte(const std::string& source_id) {
    std::uint32_t h = 2166136261u;
    for (unsigned char c : source_id) {
        h ^= c;
        h *= 16777619u;
    }
    return static_cast<std::uint8_t>(h);
}

// Synthetic frame bytes for one packet, truncated to p.length.
void build_frame(const Packet& p, std::vector<std::uint8_t>& frame) {
    frame.assign(p.length, 0);
    std::uint8_t hdr[kWireOverheadBytes] = {};

    // Ethernet
    std::memcpy(hdr, p.dst.octets.data(), 6);
    std::memcpy(hdr + 6, p.src.octets.data(), 6);
    put_be16(hdr + 12, 0x0800);

    // IPv4, header checksum over the 20 bytes
    std::uint8_t* ip = hdr + 14;
    ip[0] = 0x45;
    ip[1] = 0;
    put_be16(ip + 2, static_cast<std::uint16_t>(p.length - 14));
    put_be16(ip + 4, p.seq);
    put_be16(ip + 6, 0);
    ip[8] = 64;
    ip[9] = 17;  // UDP
    put_be16(ip + 10, 0);
    ip[12] = 10;
    ip[13] = 0;
    ip[14] = p.src.octets[4];
    ip[15] = p.src.octets[5];
    ip[16] = 10;
    ip[17] = 1;
    ip[18] = p.dst.octets[4];
    ip[19] = p.dst.octets[5];
    put_be16(ip + 10, ip_checksum(ip, 20));

    // UDP
    std::uint8_t* udp = hdr + 34;
    const std::uint8_t sid = stream_byte(p.source_id);
    put_be16(udp, static_cast<std::uint16_t>(40000 + sid));
    put_be16(udp + 2, static_cast<std::uint16_t>(50000 + sid));
    put_be16(udp + 4, static_cast<std::uint16_t>(p.length - 34));
    put_be16(udp + 6, 0);

    // Application header: seq, stream id, body length, timestamp tail
    std::uint8_t* app = hdr + 42;
    app[0] = p.seq;
    app[1] = sid;
    app[2] = p.label;
    app[3] = 0;
    put_be16(app + 4, static_cast<std::uint16_t>(
                          p.length >= kWireOverheadBytes ? p.length - kWireOverheadBytes : 0));
    put_be32(app + 6, static_cast<std::uint32_t>(p.timestamp_us));
    app[10] = 0;
    app[11] = 0;

    const std::size_t copy = std::min<std::size_t>(p.length, sizeof(hdr));
    std::memcpy(frame.data(), hdr, copy);
    for (std::size_t j = sizeof(hdr); j < frame.size(); ++j)
        frame[j] = static_cast<std::uint8_t>((p.seq + j) & 0xFF);
}

}  // namespace

void export_pcap(const CaptureSet& capture, const std::string& path) {
    capture.validate();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path, "cannot open for writing");

    PcapGlobalHeader gh{};
    gh.magic_number = 0xA1B2C3D4;
    gh.version_major = 2;
    gh.version_minor = 4;
    gh.thiszone = 0;
    gh.sigfigs = 0;
    gh.snaplen = 65535;
    gh.network = 1;  // LINKTYPE_ETHERNET
    out.write(reinterpret_cast<const char*>(&gh), sizeof(gh));

    std::vector<std::uint8_t> frame;
    for (const Packet& p : capture.records) {
        PcapRecordHeader rh{};
        rh.ts_sec = static_cast<std::uint32_t>(p.timestamp_us / 1000000);
        rh.ts_usec = static_cast<std::uint32_t>(p.timestamp_us % 1000000);
        rh.incl_len = p.length;
        rh.orig_len = p.length;
        out.write(reinterpret_cast<const char*>(&rh), sizeof(rh));
        build_frame(p, frame);
        out.write(reinterpret_cast<const char*>(frame.data()),
                  static_cast<std::streamsize>(frame.size()));
    }
    out.flush();
    if (!out) throw IoError(path, "write failed");
}

}  // namespace cialab
