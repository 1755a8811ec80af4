#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "srw/reinforcement.hpp"
#include "srw/walk.hpp"

namespace srw {

// Partial sums tau_m = T_1 + ... + T_m of a walk's run times.
struct TimeIndex {
    std::vector<std::int64_t> partial_sums;

    static TimeIndex from_path(const WalkPath& path);
};

// inf{m : tau_m >= n}, the index of the run containing unit time n.
// Throws std::out_of_range when n exceeds the last partial sum.
std::size_t tau_inverse(const TimeIndex& index, std::int64_t n);

// Unit-time lattice positions S_1..S_N of a senile walk (S_0 = origin).
struct SenilePath {
    WalkKind kind = WalkKind::Persistent;
    int dimension = 1;
    std::vector<std::int64_t> positions; // horizon x dimension, row-major

    std::int64_t horizon() const {
        return static_cast<std::int64_t>(positions.size() / dimension);
    }
    std::span<const std::int64_t> position(std::int64_t n) const { // 1-based
        return {positions.data() +
                    static_cast<std::size_t>(n - 1) * static_cast<std::size_t>(dimension),
                static_cast<std::size_t>(dimension)};
    }
};

// Senile walk read off a time-changed walk:
//
//   persistent: S_n = W_m + D_m (n - tau_m)                 with m = tauinv(n)
//   reinforced: S_n = W_m - D_m * 1(tau_m - n odd)
//
// The walk must cover the horizon (total_time() >= horizon), otherwise a
// config_error asks the caller to extend the path.
SenilePath senile_from_timechange(const WalkPath& path, std::int64_t horizon);

// Positions at selected unit times only (sorted_times ascending, each within
// the walk's total time). out receives sorted_times.size() * d integers.
void senile_positions_at(const WalkPath& path,
                         std::span<const std::int64_t> sorted_times,
                         std::int64_t* out);

// Direct unit-time construction: runs are emitted step by step, drawing each
// run's direction from the kernel of the requested kind and its duration by
// sequential continuation decisions; no time-change bookkeeping is involved.
// A pure path construction: the degenerate reinforced d = 1, p = 1 walk is
// emitted as the straight line it is rather than rejected.
SenilePath senile_direct(WalkKind kind, const ReinforcementSpec& spec,
                         std::int64_t horizon, RngStream& rng);
SenilePath senile_direct(WalkKind kind, const ReinforcementSpec& spec,
                         std::int64_t horizon, RngStream& rng, CapPolicy policy,
                         std::int64_t* breaches);

struct CoupledPair {
    WalkPath walk;
    SenilePath direct;
};

// Draws one sequence of (D_m, T_m) primitives and feeds the same realizations
// to both constructions; senile_from_timechange(walk, horizon) must equal
// direct position for position.
CoupledPair coupled_pair(WalkKind kind, const ReinforcementSpec& spec,
                         std::int64_t horizon, RngStream& rng,
                         const TimeLaw* law = nullptr);

// CSV columns: n, then d position columns.
void write_csv(const SenilePath& path, std::ostream& out);

} // namespace srw
