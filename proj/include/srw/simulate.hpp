#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "srw/reinforcement.hpp"
#include "srw/walk.hpp"

namespace srw {

// One batch of path files: time-changed walks (n_steps > 0) or senile walks
// (horizon > 0). In coupled mode both senile constructions are written from
// one draw of primitives per path.
struct SimulateJob {
    WalkKind kind = WalkKind::Persistent;
    ReinforcementSpec spec;
    std::uint64_t seed = 1;
    std::uint64_t n_paths = 1;
    std::int64_t n_steps = 0;
    std::int64_t horizon = 0;
    bool coupled = false;
};

// Writes one CSV per path under the given prefix and returns the file names
// in the order written. Output is a pure function of the job.
std::vector<std::string> write_simulation_files(const SimulateJob& job,
                                                const std::string& prefix);

} // namespace srw
