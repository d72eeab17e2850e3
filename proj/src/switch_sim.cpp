#include "cialab/switch_sim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cialab/errors.hpp"

namespace cialab {

ForwardingTable learn(const ForwardingTable& table, const MacAddr& src, int port) {
    if (port < 1) throw InvalidArgumentError("port must be >= 1");
    ForwardingTable out = table;
    out.entries[src] = port;
    return out;
}

void AttackPlan::validate() const {
    if (attacker_port < 1) throw InvalidArgumentError("attacker_port must be >= 1");
    if (start_s < 0 || !(start_s < end_s))
        throw InvalidArgumentError("attack window must satisfy 0 <= start_s < end_s");
    injected_profile.validate();
}

ForwardingTable poison(const ForwardingTable& table, const AttackPlan& plan) {
    auto it = table.entries.find(plan.victim_dst);
    if (it == table.entries.end())
        throw UnknownDestinationError("victim " + plan.victim_dst.format() +
                                      " not in forwarding table");
    ForwardingTable out = table;
    out.entries[plan.victim_dst] = plan.attacker_port;
    return out;
}

std::string table_to_text(const ForwardingTable& table) {
    std::ostringstream os;
    for (const auto& [mac, port] : table.entries)
        os << mac.format() << " " << port << "\n";
    return os.str();
}

CaptureSet apply_interference(const CaptureSet& benign, const AttackPlan& plan,
                              std::uint64_t rng_seed) {
    plan.validate();
    for (std::size_t i = 0; i < benign.records.size(); ++i)
        if (benign.records[i].label != 0)
            throw InvalidArgumentError("benign capture has a nonzero label at record " +
                                       std::to_string(i));
    const double capture_end = benign.duration_s();
    if (plan.start_s >= capture_end || plan.end_s > capture_end)
        throw InvalidArgumentError("attack window [" + std::to_string(plan.start_s) +
                                   ", " + std::to_string(plan.end_s) +
                                   ") outside capture of " +
                                   std::to_string(capture_end) + " s");

    // The injected stream: the second camera, re-addressed to the victim.
    StreamSpec spec;
    spec.duration_s = plan.end_s - plan.start_s;
    spec.rng_seed = rng_seed;
    spec.profiles.push_back(plan.injected_profile);
    spec.profiles[0].dst = plan.victim_dst;
    CaptureSet injected = generate_stream(spec);

    const auto shift = static_cast<std::uint64_t>(std::llround(plan.start_s * 1e6));
    for (Packet& p : injected.records) p.timestamp_us += shift;

    CaptureSet out;
    out.meta.spec_hash = spec.hash();
    out.meta.seed = rng_seed;
    out.meta.label_class = LabelClass::interference;
    out.meta.created_unix = injected.meta.created_unix;
    out.records.resize(benign.records.size() + injected.records.size());
    // std::merge takes from the first range on ties: benign before injected.
    std::merge(benign.records.begin(), benign.records.end(), injected.records.begin(),
               injected.records.end(), out.records.begin(),
               [](const Packet& a, const Packet& b) {
                   return a.timestamp_us < b.timestamp_us;
               });
    for (Packet& p : out.records) p.label = 1;
    out.validate();
    return out;
}

}  // namespace cialab
