#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "srw/reinforcement.hpp"
#include "srw/rng.hpp"

namespace srw {

enum class WalkKind { Persistent, Reinforced };

const char* to_string(WalkKind kind);

// Unit lattice direction +-e_i, encoded as a signed axis index in
// {+-1, ..., +-d}. code() maps the 2d directions onto 0..2d-1.
struct Direction {
    std::int32_t signed_axis = 1;

    int axis() const { return signed_axis > 0 ? signed_axis - 1 : -signed_axis - 1; }
    int sign() const { return signed_axis > 0 ? 1 : -1; }
    Direction opposite() const { return Direction{-signed_axis}; }
    int dot(Direction other) const {
        return axis() == other.axis() ? sign() * other.sign() : 0;
    }
    int code() const { return 2 * axis() + (signed_axis < 0 ? 1 : 0); }
    static Direction from_code(int code) {
        const std::int32_t ax = static_cast<std::int32_t>(code / 2) + 1;
        return Direction{(code % 2) != 0 ? -ax : ax};
    }
    bool operator==(const Direction&) const = default;
};

// Uniform over all 2d directions.
Direction initial_direction(int d, RngStream& rng);

// Uniform over the 2d-1 directions different from prev.
Direction next_direction_persistent(Direction prev, int d, RngStream& rng);

// Uniform over the 2d-1 directions different from prev (prev_length = 0)
// or different from -prev (prev_length = 1).
Direction next_direction_reinforced(Direction prev, std::int64_t prev_length,
                                    int d, RngStream& rng);

struct WalkStep {
    Direction dir;
    std::int64_t time = 0;   // T_m
    std::int64_t length = 0; // L_m: T_m for persistent, 1(T_m odd) for reinforced
};

// One realization of the time-changed walk: macro steps (D_m, T_m, L_m) and
// exact integer positions W_1..W_n.
struct WalkPath {
    WalkKind kind = WalkKind::Persistent;
    int dimension = 1;
    std::vector<WalkStep> steps;
    std::vector<std::int64_t> positions; // steps.size() x dimension, row-major

    std::size_t num_steps() const { return steps.size(); }
    std::span<const std::int64_t> position(std::size_t m) const { // 1-based
        return {positions.data() + (m - 1) * static_cast<std::size_t>(dimension),
                static_cast<std::size_t>(dimension)};
    }
    std::int64_t total_time() const;
};

// Streaming generator: one macro step per advance() call, current position
// kept incrementally. Reusable across paths via reset(); pure given the
// stream, so distinct paths on distinct streams run in parallel freely.
class WalkGenerator {
public:
    WalkGenerator(WalkKind kind, ReinforcementSpec spec);

    void reset(RngStream& rng);
    const WalkStep& advance();

    std::span<const std::int64_t> position() const { return {pos_.data(), pos_.size()}; }
    std::int64_t steps_taken() const { return taken_; }
    std::int64_t elapsed_time() const { return elapsed_; }
    const WalkStep& last_step() const { return last_; }

    void set_cap_policy(CapPolicy policy) { policy_ = policy; }
    std::int64_t cap_breaches() const { return breaches_; }

    WalkKind kind() const { return kind_; }
    const ReinforcementSpec& spec() const { return spec_; }

private:
    WalkKind kind_;
    ReinforcementSpec spec_;
    RngStream* rng_ = nullptr;
    std::vector<std::int64_t> pos_;
    WalkStep last_{};
    std::int64_t taken_ = 0;
    std::int64_t elapsed_ = 0;
    CapPolicy policy_ = CapPolicy::Strict;
    std::int64_t breaches_ = 0;
};

// Fails (config_error) for the excluded reinforced d = 1 case with p = 1,
// where the walk degenerates to straight-line motion.
void validate_walk_config(WalkKind kind, const ReinforcementSpec& spec,
                          const TimeLaw& law);

// Generates a path of n_steps macro steps. When law is null and the check is
// needed, the run-time law is computed internally for validation.
WalkPath generate_walk(WalkKind kind, const ReinforcementSpec& spec,
                       std::int64_t n_steps, RngStream& rng,
                       const TimeLaw* law = nullptr);

// Extends the path until its total time reaches min_total_time.
WalkPath generate_walk_until(WalkKind kind, const ReinforcementSpec& spec,
                             std::int64_t min_total_time, RngStream& rng,
                             const TimeLaw* law = nullptr);

// Same, appending into a caller-owned buffer (cleared first) so hot loops can
// reuse capacity. Skips the p < 1 validation; callers validate once upfront.
void generate_walk_until(WalkKind kind, const ReinforcementSpec& spec,
                         std::int64_t min_total_time, RngStream& rng,
                         WalkPath* out, CapPolicy policy = CapPolicy::Strict,
                         std::int64_t* breaches = nullptr);

// Deterministic path from given (direction, time) primitives. Verifies the
// direction constraints of the requested kind.
WalkPath walk_from_primitives(WalkKind kind, int d,
                              std::span<const std::pair<Direction, std::int64_t>> prims);

// CSV columns: step_index, axis, sign, T, L, then d position columns.
void write_csv(const WalkPath& path, std::ostream& out);

} // namespace srw
