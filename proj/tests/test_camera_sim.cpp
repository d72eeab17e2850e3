#include <cstdint>
#include <map>
#include <set>

#include "doctest.h"

#include "cialab/camera_sim.hpp"
#include "cialab/errors.hpp"

#include "helpers.hpp"

using namespace cialab;

namespace {

StreamSpec front_spec(double duration, std::uint64_t seed = 11) {
    StreamSpec spec;
    spec.duration_s = duration;
    spec.profiles = {derive_default_profile()};
    spec.rng_seed = seed;
    return spec;
}

double mean_length(const CaptureSet& cap) {
    double sum = 0;
    for (const Packet& p : cap.records) sum += p.length;
    return sum / static_cast<double>(cap.records.size());
}

}  // namespace

TEST_SUITE("camera_sim") {

TEST_CASE("same spec and seed give identical captures") {
    const CaptureSet a = generate_stream(front_spec(3.0));
    const CaptureSet b = generate_stream(front_spec(3.0));
    CHECK(a.records == b.records);
    CHECK(a.meta.spec_hash == b.meta.spec_hash);

    const CaptureSet c = generate_stream(front_spec(3.0, 12));
    CHECK(a.records != c.records);
}

TEST_CASE("generated captures are benign, ordered, and seq-continuous") {
    const CaptureSet cap = generate_stream(front_spec(5.0));
    REQUIRE(cap.records.size() > 1000);
    std::uint64_t prev_ts = 0;
    for (const Packet& p : cap.records) {
        REQUIRE(p.label == 0);
        REQUIRE(p.timestamp_us >= prev_ts);
        prev_ts = p.timestamp_us;
    }
    for (const auto& [dst, count] : count_seq_discontinuities(cap)) {
        CHECK(count == 0);
    }
    CHECK(cap.meta.label_class == LabelClass::normal);
    CHECK_NOTHROW(cap.validate());
}

TEST_CASE("front camera calibration: rate and mean frame length") {
    const double duration = 30.0;
    const CaptureSet cap = generate_stream(front_spec(duration));
    const double rate = static_cast<double>(cap.records.size()) / duration;
    CHECK(rate == doctest::Approx(3526.0).epsilon(0.05));
    CHECK(mean_length(cap) == doctest::Approx(923.29).epsilon(0.05));
}

TEST_CASE("left camera calibration: rate and mean frame length") {
    StreamSpec spec;
    spec.duration_s = 30.0;
    spec.profiles = {derive_left_profile()};
    spec.rng_seed = 21;
    const CaptureSet cap = generate_stream(spec);
    const double rate = static_cast<double>(cap.records.size()) / spec.duration_s;
    CHECK(rate == doctest::Approx(3028.0).epsilon(0.05));
    CHECK(mean_length(cap) == doctest::Approx(911.82).epsilon(0.05));
}

TEST_CASE("packet lengths come from the fragmentation of the slice table") {
    // Every slice is 1420 < size <= 2840 bytes, so the wire shows the full
    // 1474-byte frame plus one of exactly three tail lengths per camera.
    const CaptureSet cap = generate_stream(front_spec(2.0));
    const std::set<std::uint32_t> allowed = {1474, 160, 368, 576};
    for (const Packet& p : cap.records) {
        REQUIRE(allowed.count(p.length) == 1);
    }
}

TEST_CASE("a duration shorter than one frame period yields an empty capture") {
    const CaptureSet cap = generate_stream(front_spec(0.01));
    CHECK(cap.records.empty());
    CHECK(cap.duration_s() == 0.0);
}

TEST_CASE("two-camera merge preserves both streams") {
    StreamSpec merged = front_spec(2.0, 5);
    merged.profiles.push_back(derive_left_profile());
    const CaptureSet both = generate_stream(merged);

    // The front camera sits at index 0 in both specs, so its per-camera
    // stream is identical; the merge must preserve it as a subsequence.
    const CaptureSet front_only = generate_stream(front_spec(2.0, 5));
    std::vector<Packet> from_merge;
    std::map<MacAddr, std::size_t> per_src;
    for (const Packet& p : both.records) {
        ++per_src[p.src];
        if (p.src == derive_default_profile().src) from_merge.push_back(p);
    }
    CHECK(from_merge == front_only.records);
    CHECK(per_src.size() == 2);
    CHECK(per_src[derive_default_profile().src] + per_src[derive_left_profile().src] ==
          both.records.size());

    // distinct destinations: each camera's stream stays seq-continuous
    for (const auto& [dst, count] : count_seq_discontinuities(both)) {
        CHECK(count == 0);
    }
}

TEST_CASE("profile and spec validation") {
    CameraProfile p = derive_default_profile();
    p.fps = 0;
    CHECK_THROWS_AS(p.validate(), InvalidArgumentError);

    p = derive_default_profile();
    p.unit_sizes.clear();
    CHECK_THROWS_AS(p.validate(), InvalidArgumentError);

    p = derive_default_profile();
    p.i_frame_size.jitter = p.i_frame_size.mean;  // jitter must stay below mean
    CHECK_THROWS_AS(p.validate(), InvalidArgumentError);

    p = derive_default_profile();
    p.unit_sizes[0].weight = 0;
    CHECK_THROWS_AS(p.validate(), InvalidArgumentError);

    StreamSpec spec;
    spec.duration_s = 0;
    spec.profiles = {derive_default_profile()};
    CHECK_THROWS_AS(generate_stream(spec), InvalidArgumentError);

    spec.duration_s = 1;
    spec.profiles.clear();
    CHECK_THROWS_AS(generate_stream(spec), InvalidArgumentError);
}

TEST_CASE("mean_unit_size is the weighted average") {
    CameraProfile p = derive_default_profile();
    p.unit_sizes = {{100, 1.0}, {300, 3.0}};
    CHECK(p.mean_unit_size() == doctest::Approx(250.0));
}

}  // TEST_SUITE
