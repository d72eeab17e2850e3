#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"

#include "cialab/camera_sim.hpp"
#include "cialab/capture_io.hpp"
#include "cialab/errors.hpp"

#include "helpers.hpp"

using namespace cialab;
using testutil::TempDir;

namespace {

std::string csv_of(const CaptureSet& cap) {
    TempDir dir;
    const std::string path = dir.file("cap.csv");
    write_csv(cap, path);
    return testutil::slurp(path);
}

std::size_t count_lines(const std::string& text) {
    std::size_t n = 0;
    for (char c : text) {
        if (c == '\n') ++n;
    }
    return n;
}

// Little parser over the exported bytes; independent of the writer code.
struct PcapView {
    std::string bytes;

    std::uint32_t u32(std::size_t off) const {
        std::uint32_t v;
        std::memcpy(&v, bytes.data() + off, 4);
        return v;
    }
    std::uint16_t u16(std::size_t off) const {
        std::uint16_t v;
        std::memcpy(&v, bytes.data() + off, 2);
        return v;
    }
    std::uint16_t be16(std::size_t off) const {
        const auto* p = reinterpret_cast<const unsigned char*>(bytes.data() + off);
        return static_cast<std::uint16_t>(p[0] << 8 | p[1]);
    }
    std::uint8_t u8(std::size_t off) const {
        return static_cast<std::uint8_t>(bytes[off]);
    }
};

// One's complement sum over an IPv4 header including its checksum field
// folds to 0xFFFF when the checksum is valid.
std::uint16_t ip_sum(const PcapView& v, std::size_t off) {
    std::uint32_t sum = 0;
    for (std::size_t i = 0; i < 20; i += 2) sum += v.be16(off + i);
    while (sum >> 16) sum = (sum & 0xFFFF) + (sum >> 16);
    return static_cast<std::uint16_t>(sum);
}

}  // namespace

TEST_SUITE("capture_io") {

TEST_CASE("write_csv emits the header plus one line per record") {
    const CaptureSet empty = testutil::capture({});
    const std::string empty_text = csv_of(empty);
    CHECK(empty_text == std::string(kCaptureCsvHeader) + "\n");

    const CaptureSet three = testutil::capture({
        testutil::packet(0, 0, 1474),
        testutil::packet(10, 1, 160),
        testutil::packet(20, 2, 1474),
    });
    const std::string text = csv_of(three);
    CHECK(count_lines(text) == 4);
    CHECK(text.rfind(std::string(kCaptureCsvHeader) + "\n", 0) == 0);
    CHECK(text.find("0,02:00:00:00:00:01,02:00:00:00:00:02,0,1474,cam,0\n") != std::string::npos);
}

TEST_CASE("round trip through CSV is lossless") {
    TempDir dir;
    StreamSpec spec;
    spec.duration_s = 2.0;
    spec.profiles = {derive_default_profile()};
    spec.rng_seed = 3;
    const CaptureSet original = generate_stream(spec);

    const std::string path = dir.file("cap.csv");
    write_csv(original, path);
    const CaptureSet loaded = read_csv(path);
    CHECK(loaded.records == original.records);
    CHECK(loaded.meta.label_class == original.meta.label_class);

    // a second write of the loaded capture is byte-identical
    const std::string path2 = dir.file("cap2.csv");
    write_csv(loaded, path2);
    CHECK(testutil::slurp(path) == testutil::slurp(path2));
}

TEST_CASE("read_csv derives the label class from the records") {
    TempDir dir;
    const CaptureSet attack = testutil::capture(
        {testutil::packet(0, 0, 100, 1), testutil::packet(5, 1, 100, 1)},
        LabelClass::interference);
    const std::string path = dir.file("attack.csv");
    write_csv(attack, path);
    CHECK(read_csv(path).meta.label_class == LabelClass::interference);
}

TEST_CASE("read_csv rejects malformed input with 1-based line numbers") {
    TempDir dir;
    const std::string path = dir.file("bad.csv");
    const std::string header = std::string(kCaptureCsvHeader) + "\n";
    const std::string good_row = "0,02:00:00:00:00:01,02:00:00:00:00:02,0,1474,cam,0\n";

    SUBCASE("wrong header") {
        testutil::spit(path, "time,src\n" + good_row);
        try {
            read_csv(path);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 1);
        }
    }
    SUBCASE("seq out of range") {
        testutil::spit(path, header + "0,02:00:00:00:00:01,02:00:00:00:00:02,256,1474,cam,0\n");
        try {
            read_csv(path);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 2);
            CHECK(std::string(e.what()).find(":2:") != std::string::npos);
        }
    }
    SUBCASE("label out of range") {
        testutil::spit(path, header + good_row +
                                 "10,02:00:00:00:00:01,02:00:00:00:00:02,1,1474,cam,2\n");
        try {
            read_csv(path);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 3);
        }
    }
    SUBCASE("length below the frame minimum") {
        testutil::spit(path, header + "0,02:00:00:00:00:01,02:00:00:00:00:02,0,42,cam,0\n");
        CHECK_THROWS_AS(read_csv(path), ParseError);
    }
    SUBCASE("length above the frame maximum") {
        testutil::spit(path, header + "0,02:00:00:00:00:01,02:00:00:00:00:02,0,1515,cam,0\n");
        CHECK_THROWS_AS(read_csv(path), ParseError);
    }
    SUBCASE("wrong field count") {
        testutil::spit(path, header + "0,02:00:00:00:00:01,02:00:00:00:00:02,0,1474,cam\n");
        CHECK_THROWS_AS(read_csv(path), ParseError);
    }
    SUBCASE("bad mac") {
        testutil::spit(path, header + "0,02:00:00:00:00,02:00:00:00:00:02,0,1474,cam,0\n");
        CHECK_THROWS_AS(read_csv(path), ParseError);
    }
    SUBCASE("out-of-order timestamps") {
        testutil::spit(path, header +
                                 "10,02:00:00:00:00:01,02:00:00:00:00:02,0,1474,cam,0\n"
                                 "5,02:00:00:00:00:01,02:00:00:00:00:02,1,1474,cam,0\n");
        CHECK_THROWS_AS(read_csv(path), ValidationError);
    }
    SUBCASE("mixed labels") {
        testutil::spit(path, header + good_row +
                                 "10,02:00:00:00:00:01,02:00:00:00:00:02,1,1474,cam,1\n");
        CHECK_THROWS_AS(read_csv(path), ValidationError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(read_csv(dir.file("nope.csv")), IoError);
    }
}

TEST_CASE("empty pcap export is exactly the 24-byte global header") {
    TempDir dir;
    const std::string path = dir.file("empty.pcap");
    export_pcap(testutil::capture({}), path);
    const std::string bytes = testutil::slurp(path);
    REQUIRE(bytes.size() == 24);

    PcapView v{bytes};
    CHECK(v.u32(0) == 0xA1B2C3D4);
    CHECK(v.u16(4) == 2);   // version major
    CHECK(v.u16(6) == 4);   // version minor
    CHECK(v.u32(20) == 1);  // LINKTYPE_ETHERNET
}

TEST_CASE("pcap records carry full frames with a coherent header stack") {
    TempDir dir;
    const CaptureSet cap = testutil::capture({
        testutil::packet(1'500'000, 0, 1474),
        testutil::packet(1'500'010, 1, 160),
        testutil::packet(2'000'000, 2, 576),
    });
    const std::string path = dir.file("cap.pcap");
    export_pcap(cap, path);
    const std::string bytes = testutil::slurp(path);

    std::size_t expected = 24;
    for (const Packet& p : cap.records) expected += 16 + p.length;
    REQUIRE(bytes.size() == expected);

    PcapView v{bytes};
    std::size_t off = 24;
    for (const Packet& p : cap.records) {
        CHECK(v.u32(off + 0) == p.timestamp_us / 1'000'000);
        CHECK(v.u32(off + 4) == p.timestamp_us % 1'000'000);
        REQUIRE(v.u32(off + 8) == p.length);   // incl_len
        REQUIRE(v.u32(off + 12) == p.length);  // orig_len
        const std::size_t frame = off + 16;

        // Ethernet: dst, src, IPv4 ethertype
        CHECK(std::memcmp(bytes.data() + frame, p.dst.octets.data(), 6) == 0);
        CHECK(std::memcmp(bytes.data() + frame + 6, p.src.octets.data(), 6) == 0);
        CHECK(v.be16(frame + 12) == 0x0800);

        // IPv4: version/IHL, UDP protocol, total length, valid checksum
        CHECK(v.u8(frame + 14) == 0x45);
        CHECK(v.u8(frame + 23) == 17);
        CHECK(v.be16(frame + 16) == p.length - 14);
        CHECK(ip_sum(v, frame + 14) == 0xFFFF);

        // UDP length covers everything past the IP header
        CHECK(v.be16(frame + 38) == p.length - 34);

        // application header leads with the sequence number
        CHECK(v.u8(frame + 42) == p.seq);

        off = frame + p.length;
    }
}

TEST_CASE("pcap record lengths sum to the capture byte count") {
    StreamSpec spec;
    spec.duration_s = 1.0;
    spec.profiles = {derive_default_profile()};
    spec.rng_seed = 17;
    const CaptureSet cap = generate_stream(spec);

    TempDir dir;
    const std::string path = dir.file("gen.pcap");
    export_pcap(cap, path);
    const std::string bytes = testutil::slurp(path);

    std::uint64_t total = 0;
    for (const Packet& p : cap.records) total += p.length;
    CHECK(bytes.size() == 24 + 16 * cap.records.size() + total);
}

}  // TEST_SUITE
