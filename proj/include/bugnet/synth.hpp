#pragma once

#include <cstdint>
#include <vector>

#include "bugnet/events.hpp"

namespace bugnet {

/// Planted-partition community generator: core users interact densely every
/// month (so they dominate the LCC with high centrality) and report Valid
/// bugs with probability p_core_valid; peripheral users interact rarely and
/// report Valid with p_peripheral_valid. Realism is a non-goal; the point is
/// a detectable planted signal at desk scale.
struct SynthConfig {
    int n_users = 500;
    int n_bugs = 2000;
    int months = 12;                  // 30-day months; bugs start in month 1
    double core_fraction = 0.2;       // ceil(core_fraction * n_users) core users
    double p_core_valid = 0.8;
    double p_peripheral_valid = 0.2;
    int interactions_per_month = 8;   // CC_ADD per core user toward the core
    double mix_dup = 0.6;             // Faulty category mix, must sum to 1
    double mix_inv = 0.25;
    double mix_inc = 0.15;
    std::uint64_t seed = 1;

    void validate() const;  // throws Error(InvalidConfig)
};

/// Timestamp-sorted event stream satisfying every events-module
/// precondition: one CREATE per bug, no orphans, lifecycle events strictly
/// after their CREATE. Byte-deterministic for a fixed config.
///
/// Interaction events must reference an existing bug, so a small set of
/// carrier bugs is created at the horizon start (they stay unresolved and
/// never enter the labeled corpus); later interactions attach to a random
/// already-created bug.
std::vector<ChangeEvent> generate_community(const SynthConfig& cfg);

}  // namespace bugnet
