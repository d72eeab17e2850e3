#include "cialab/camera_sim.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>

#include "cialab/errors.hpp"
#include "cialab/rng.hpp"

namespace cialab {

void CameraProfile::validate() const {
    if (camera_id.empty()) throw InvalidArgumentError("camera_id must be nonempty");
    if (fps <= 0) throw InvalidArgumentError("fps must be > 0");
    if (gop_length < 1) throw InvalidArgumentError("gop_length must be >= 1");
    for (const SizeJitter* s : {&i_frame_size, &p_frame_size}) {
        if (s->mean < 1) throw InvalidArgumentError("frame size mean must be >= 1 byte");
        if (s->jitter < 0 || s->jitter >= s->mean)
            throw InvalidArgumentError("frame size jitter must be in [0, mean)");
    }
    if (unit_sizes.empty()) throw InvalidArgumentError("unit size table is empty");
    for (const UnitSizeEntry& e : unit_sizes) {
        if (e.size < 1) throw InvalidArgumentError("unit size must be >= 1");
        if (e.weight <= 0) throw InvalidArgumentError("unit weight must be > 0");
    }
}

double CameraProfile::mean_unit_size() const {
    double ws = 0, w = 0;
    for (const UnitSizeEntry& e : unit_sizes) {
        ws += static_cast<double>(e.size) * e.weight;
        w += e.weight;
    }
    return ws / w;
}

void StreamSpec::validate() const {
    if (duration_s <= 0) throw InvalidArgumentError("duration_s must be > 0");
    if (profiles.empty()) throw InvalidArgumentError("at least one camera profile required");
    for (const CameraProfile& p : profiles) p.validate();
}

static void fnv1a(std::uint64_t& h, const std::string& s) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
}

std::string StreamSpec::hash() const {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    fnv1a(h, std::to_string(duration_s));
    fnv1a(h, std::to_string(rng_seed));
    for (const CameraProfile& p : profiles) {
        fnv1a(h, p.camera_id);
        fnv1a(h, std::to_string(p.fps));
        fnv1a(h, std::to_string(p.gop_length));
        fnv1a(h, std::to_string(p.i_frame_size.mean) + std::to_string(p.i_frame_size.jitter));
        fnv1a(h, std::to_string(p.p_frame_size.mean) + std::to_string(p.p_frame_size.jitter));
        fnv1a(h, p.src.format() + p.dst.format());
        for (const UnitSizeEntry& e : p.unit_sizes)
            fnv1a(h, std::to_string(e.size) + ":" + std::to_string(e.weight));
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

std::vector<Packet> generate_camera(const CameraProfile& prof, double duration_s,
                                    std::uint64_t seed) {
    Rng rng(seed);
    const double period_us = 1e6 / prof.fps;
    const double phase_us = rng.uniform() * period_us;
    const auto frames = static_cast<std::uint64_t>(duration_s * prof.fps + 1e-9);
    const double mean_unit = prof.mean_unit_size();

    std::vector<double> cumulative;
    double acc = 0;
    for (const UnitSizeEntry& e : prof.unit_sizes) cumulative.push_back(acc += e.weight);

    std::vector<Packet> packets;
    packets.reserve(static_cast<std::size_t>(frames * 2.2 * (mean_unit > 0 ?
        ((prof.i_frame_size.mean + (prof.gop_length - 1) * prof.p_frame_size.mean) /
         prof.gop_length) / mean_unit : 1.0)) + 16);

    int seq = 0;
    std::vector<std::size_t> body_lens;
    for (std::uint64_t f = 0; f < frames; ++f) {
        const bool is_i = (f % static_cast<std::uint64_t>(prof.gop_length)) == 0;
        const SizeJitter& fs = is_i ? prof.i_frame_size : prof.p_frame_size;
        const double frame_bytes = rng.truncated_normal(fs.mean, fs.jitter, 1.0);
        const auto units = std::max<std::int64_t>(1, std::llround(frame_bytes / mean_unit));

        body_lens.clear();
        for (std::int64_t u = 0; u < units; ++u) {
            std::size_t usize = prof.unit_sizes[rng.pick(cumulative)].size;
            for (std::size_t len : fragment_lengths(usize, kDefaultMaxBody))
                body_lens.push_back(len);
        }

        const double frame_start = static_cast<double>(f) * period_us + phase_us;
        const double step = period_us / static_cast<double>(body_lens.size());
        std::size_t j = 0;
        Clock clock = [&]() {
            return static_cast<std::uint64_t>(
                std::llround(frame_start + static_cast<double>(j++) * step));
        };
        auto frame_packets = detail::packetize_lengths(body_lens, prof.src, prof.dst,
                                                       prof.camera_id, seq, clock,
                                                       kWireOverheadBytes);
        seq = (seq + static_cast<int>(body_lens.size())) % kSeqModulus;
        packets.insert(packets.end(), std::make_move_iterator(frame_packets.begin()),
                       std::make_move_iterator(frame_packets.end()));
    }
    return packets;
}

}  // namespace

CaptureSet generate_stream(const StreamSpec& spec) {
    spec.validate();

    CaptureSet capture;
    capture.meta.spec_hash = spec.hash();
    capture.meta.seed = spec.rng_seed;
    capture.meta.label_class = LabelClass::normal;
    capture.meta.created_unix = std::time(nullptr);

    for (std::size_t i = 0; i < spec.profiles.size(); ++i) {
        auto cam = generate_camera(spec.profiles[i], spec.duration_s,
                                   derive_seed(spec.rng_seed, i + 1));
        capture.records.insert(capture.records.end(),
                               std::make_move_iterator(cam.begin()),
                               std::make_move_iterator(cam.end()));
    }
    // Stable sort keeps per-camera order for equal timestamps.
    std::stable_sort(capture.records.begin(), capture.records.end(),
                     [](const Packet& a, const Packet& b) {
                         return a.timestamp_us < b.timestamp_us;
                     });
    capture.validate();
    return capture;
}

// Calibration notes: a slice of s bytes (1420 < s <= 2840) becomes two
// packets of lengths 1474 and s - 1366, so the capture mean is
// (1474 + mean_tail) / 2 and the rate is fps * 2 * mean_frame / mean_slice.
// Constants below were frozen after measuring generated captures against
// the 3526 pkt/s / 923 B (front) and 3028 pkt/s / 912 B (left) targets.

CameraProfile derive_default_profile() {
    CameraProfile p;
    p.camera_id = "front";
    p.fps = 30.0;
    p.gop_length = 30;
    p.i_frame_size = {371532.0, 36000.0};
    p.p_frame_size = {92883.0, 9000.0};
    p.src = MacAddr::parse("02:00:00:00:01:01");
    p.dst = MacAddr::parse("02:00:00:00:02:01");
    p.unit_sizes = {{1526, 0.239}, {1734, 0.500}, {1942, 0.261}};
    return p;
}

CameraProfile derive_left_profile() {
    CameraProfile p;
    p.camera_id = "left";
    p.fps = 30.0;
    p.gop_length = 30;
    p.i_frame_size = {314864.0, 31000.0};
    p.p_frame_size = {78716.0, 7800.0};
    p.src = MacAddr::parse("02:00:00:00:01:02");
    p.dst = MacAddr::parse("02:00:00:00:02:02");
    p.unit_sizes = {{1472, 0.18932}, {1680, 0.45000}, {1888, 0.36068}};
    return p;
}

}  // namespace cialab
