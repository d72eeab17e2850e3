#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cialab/camera_sim.hpp"
#include "cialab/gru.hpp"
#include "cialab/mac_addr.hpp"

namespace cialab {

// {3, 23, ..., 243} plus the 255 operating point: 14 sizes.
std::vector<int> default_sweep_sizes();

/**
 * Everything the CLI runs from. Defaults reproduce the calibrated two
 * camera lab setup; every field can be set from a flat key=value config
 * file and overridden per key on the command line.
 */
struct RunConfig {
    std::string benign_csv = "data/benign.csv";
    std::string attack_csv = "data/attack.csv";
    std::string model_path = "data/model.txt";
    std::string report_dir = "reports";
    std::string benign_pcap;  // empty = no pcap export
    std::string attack_pcap;

    double gen_duration_s = 120.0;
    CameraProfile front;
    CameraProfile left;

    std::optional<MacAddr> victim_override;  // default: the front camera sink
    int victim_port = 11;
    int attacker_port = 5;
    double attack_start_s = 0.0;
    double attack_end_s = 0.0;  // 0 = to the end of the capture

    int window = 255;
    int stride = 0;  // 0 = non-overlapping

    double train_fraction = 0.8;
    TrainConfig train;
    double threshold = 0.5;

    std::vector<int> sweep_sizes = default_sweep_sizes();
    int sweep_epochs = 3;
    std::uint64_t sweep_max_packets = 60000;

    std::uint64_t seed = 42;

    RunConfig();

    MacAddr victim_dst() const;

    // Independent sub-streams derived from the master seed.
    std::uint64_t gen_seed() const;
    std::uint64_t attack_seed() const;
    std::uint64_t split_seed() const;
    std::uint64_t train_seed() const;

    void validate() const;
};

// One "key value" override, e.g. {"feature.window", "63"}.
using ConfigOverride = std::pair<std::string, std::string>;

// Applies one key. Unknown keys and unparseable values raise ValidationError.
void apply_config_value(RunConfig& config, const std::string& key, const std::string& value);

// Flat key=value file; '#' starts a comment; blank lines ignored.
// Raises IoError when the file cannot be opened, ParseError on bad syntax.
void load_config_file(RunConfig& config, const std::string& path);

// File (optional) first, then overrides in order; validates the result.
RunConfig make_config(const std::string& config_path, const std::vector<ConfigOverride>& overrides);

}  // namespace cialab
