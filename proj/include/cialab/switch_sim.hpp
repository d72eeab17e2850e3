#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "cialab/camera_sim.hpp"
#include "cialab/capture.hpp"
#include "cialab/mac_addr.hpp"

namespace cialab {

/**
 * The switch's MAC/forwarding table: destination address to egress port.
 * All operations are pure; they take a table and return the updated one.
 */
struct ForwardingTable {
    std::map<MacAddr, int> entries;

    bool operator==(const ForwardingTable&) const = default;
};

// Learn (or relearn) src on the given port. port must be >= 1.
ForwardingTable learn(const ForwardingTable& table, const MacAddr& src, int port);

/**
 * Cache-poisoning attack plan: rewrite the victim destination's table
 * entry to the attacker's port and inject a second camera stream into the
 * victim's traffic during [start_s, end_s).
 */
struct AttackPlan {
    MacAddr victim_dst;
    int attacker_port = 0;
    CameraProfile injected_profile;
    double start_s = 0;
    double end_s = 0;

    void validate() const;
};

/**
 * Rewrite the victim's entry to plan.attacker_port. Every other entry is
 * untouched; an absent victim raises UnknownDestinationError. Applying the
 * same plan twice is a no-op the second time.
 */
ForwardingTable poison(const ForwardingTable& table, const AttackPlan& plan);

// One line per entry, "<mac> <port>", sorted by address. For golden tests.
std::string table_to_text(const ForwardingTable& table);

/**
 * Model the observable effect of the poisoning: a second camera stream
 * (plan.injected_profile, re-addressed to plan.victim_dst, with its own
 * 0..255 sequence counter) is generated for the plan window and merged by
 * timestamp into the benign capture, benign record first on ties. Per the
 * per-capture labeling convention the entire output carries label 1.
 */
CaptureSet apply_interference(const CaptureSet& benign, const AttackPlan& plan,
                              std::uint64_t rng_seed);

}  // namespace cialab
