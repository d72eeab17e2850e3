#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cialab/capture.hpp"
#include "cialab/mac_addr.hpp"

namespace cialab {

// Mean and spread (one standard deviation of a truncated normal) in bytes.
struct SizeJitter {
    double mean = 0;
    double jitter = 0;
};

// One entry of the discrete slice-size table. Cameras emit frames as a run
// of coded slices; slice sizes cluster on a handful of values, which is
// what produces the few dominant packet lengths seen on the wire.
struct UnitSizeEntry {
    std::size_t size = 0;
    double weight = 0;
};

/**
 * Traffic model for one camera: frame rate, GOP structure, per-type frame
 * sizes and the slice-size table frames are cut into before FU-A
 * fragmentation.
 */
struct CameraProfile {
    std::string camera_id;
    double fps = 30.0;
    int gop_length = 30;  // 1 I-frame followed by gop_length-1 P-frames
    SizeJitter i_frame_size;
    SizeJitter p_frame_size;
    MacAddr src;
    MacAddr dst;
    std::vector<UnitSizeEntry> unit_sizes;

    void validate() const;
    double mean_unit_size() const;
};

/**
 * A full generation request. Identical spec + seed gives byte-identical
 * captures.
 */
struct StreamSpec {
    double duration_s = 0;
    std::vector<CameraProfile> profiles;
    std::uint64_t rng_seed = 0;

    void validate() const;
    std::string hash() const;
};

/**
 * Synthesize a benign capture: every camera emits frames, frames are cut
 * into slices, slices are FU-A fragmented and packetized with a per-camera
 * sequence counter, and the per-camera streams are merged by timestamp.
 * All labels are 0.
 */
CaptureSet generate_stream(const StreamSpec& spec);

// Front-camera profile. Constants are frozen against the calibration
// targets of ~3526 packets/s and ~923-byte mean length at 30 fps; see the
// calibration tests.
CameraProfile derive_default_profile();

// Left-side camera used as the injected stream. Calibrated to ~3028
// packets/s and ~912-byte mean length.
CameraProfile derive_left_profile();

}  // namespace cialab
