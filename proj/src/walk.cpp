#include "srw/walk.hpp"

#include <numeric>
#include <ostream>
#include <sstream>

namespace srw {

const char* to_string(WalkKind kind) {
    return kind == WalkKind::Persistent ? "persistent" : "reinforced";
}

Direction initial_direction(int d, RngStream& rng) {
    return Direction::from_code(
        static_cast<int>(rng.bounded(static_cast<std::uint64_t>(2 * d))));
}

namespace {

// Uniform over the 2d-1 directions whose code differs from excluded_code.
Direction direction_excluding(int excluded_code, int d, RngStream& rng) {
    const auto j =
        static_cast<int>(rng.bounded(static_cast<std::uint64_t>(2 * d - 1)));
    return Direction::from_code(j + (j >= excluded_code ? 1 : 0));
}

} // namespace

Direction next_direction_persistent(Direction prev, int d, RngStream& rng) {
    return direction_excluding(prev.code(), d, rng);
}

Direction next_direction_reinforced(Direction prev, std::int64_t prev_length,
                                    int d, RngStream& rng) {
    const Direction excluded = prev_length == 0 ? prev : prev.opposite();
    return direction_excluding(excluded.code(), d, rng);
}

std::int64_t WalkPath::total_time() const {
    return std::accumulate(steps.begin(), steps.end(), std::int64_t{0},
                           [](std::int64_t acc, const WalkStep& s) { return acc + s.time; });
}

WalkGenerator::WalkGenerator(WalkKind kind, ReinforcementSpec spec)
    : kind_(kind), spec_(std::move(spec)),
      pos_(static_cast<std::size_t>(spec_.dimension), 0) {
    spec_.validate();
}

void WalkGenerator::reset(RngStream& rng) {
    rng_ = &rng;
    std::fill(pos_.begin(), pos_.end(), 0);
    last_ = WalkStep{};
    taken_ = 0;
    elapsed_ = 0;
    breaches_ = 0;
}

const WalkStep& WalkGenerator::advance() {
    const int d = spec_.dimension;
    Direction dir;
    if (taken_ == 0) {
        dir = initial_direction(d, *rng_);
    } else if (kind_ == WalkKind::Persistent) {
        dir = next_direction_persistent(last_.dir, d, *rng_);
    } else {
        dir = next_direction_reinforced(last_.dir, last_.length, d, *rng_);
    }
    const std::int64_t time = sample_time(spec_, *rng_, policy_, &breaches_);
    const std::int64_t length = kind_ == WalkKind::Persistent ? time : (time & 1);
    pos_[static_cast<std::size_t>(dir.axis())] += dir.sign() * length;
    last_ = WalkStep{dir, time, length};
    ++taken_;
    elapsed_ += time;
    return last_;
}

void validate_walk_config(WalkKind kind, const ReinforcementSpec& spec,
                          const TimeLaw& law) {
    spec.validate();
    if (kind == WalkKind::Reinforced && spec.dimension == 1 &&
        law.p_odd + law.p_odd_error >= 1.0) {
        std::ostringstream msg;
        msg << "reinforced walk with d = 1 requires P(T odd) < 1 (got p = "
            << law.p_odd << "); this degenerate case is excluded";
        throw config_error(msg.str());
    }
}

namespace {

void append_step(WalkPath& path, const WalkStep& step,
                 std::span<const std::int64_t> pos) {
    path.steps.push_back(step);
    path.positions.insert(path.positions.end(), pos.begin(), pos.end());
}

void maybe_validate_p(WalkKind kind, const ReinforcementSpec& spec,
                      const TimeLaw* law) {
    if (kind != WalkKind::Reinforced || spec.dimension != 1) return;
    if (law) {
        validate_walk_config(kind, spec, *law);
        return;
    }
    TimeLawBudget quick;
    quick.max_iterations = 1'000'000;
    validate_walk_config(kind, spec, compute_time_law(spec, 1e-6, quick));
}

} // namespace

WalkPath generate_walk(WalkKind kind, const ReinforcementSpec& spec,
                       std::int64_t n_steps, RngStream& rng, const TimeLaw* law) {
    if (n_steps < 1) throw config_error("generate_walk requires n_steps >= 1");
    maybe_validate_p(kind, spec, law);
    WalkPath path;
    path.kind = kind;
    path.dimension = spec.dimension;
    path.steps.reserve(static_cast<std::size_t>(n_steps));
    path.positions.reserve(static_cast<std::size_t>(n_steps * spec.dimension));
    WalkGenerator gen(kind, spec);
    gen.reset(rng);
    for (std::int64_t m = 0; m < n_steps; ++m)
        append_step(path, gen.advance(), gen.position());
    return path;
}

WalkPath generate_walk_until(WalkKind kind, const ReinforcementSpec& spec,
                             std::int64_t min_total_time, RngStream& rng,
                             const TimeLaw* law) {
    maybe_validate_p(kind, spec, law);
    WalkPath path;
    generate_walk_until(kind, spec, min_total_time, rng, &path);
    return path;
}

void generate_walk_until(WalkKind kind, const ReinforcementSpec& spec,
                         std::int64_t min_total_time, RngStream& rng,
                         WalkPath* out, CapPolicy policy, std::int64_t* breaches) {
    if (min_total_time < 1)
        throw config_error("generate_walk_until requires a positive time horizon");
    out->kind = kind;
    out->dimension = spec.dimension;
    out->steps.clear();
    out->positions.clear();
    WalkGenerator gen(kind, spec);
    gen.set_cap_policy(policy);
    gen.reset(rng);
    while (gen.elapsed_time() < min_total_time)
        append_step(*out, gen.advance(), gen.position());
    if (breaches) *breaches += gen.cap_breaches();
}

WalkPath walk_from_primitives(
    WalkKind kind, int d,
    std::span<const std::pair<Direction, std::int64_t>> prims) {
    WalkPath path;
    path.kind = kind;
    path.dimension = d;
    std::vector<std::int64_t> pos(static_cast<std::size_t>(d), 0);
    for (std::size_t m = 0; m < prims.size(); ++m) {
        const auto [dir, time] = prims[m];
        if (dir.axis() >= d) throw validation_error("direction axis out of range");
        if (time < 1) throw validation_error("run times must be positive");
        if (m > 0) {
            const WalkStep& prev = path.steps.back();
            const bool bad =
                kind == WalkKind::Persistent
                    ? dir == prev.dir
                    : (prev.length == 0 ? dir == prev.dir : dir == prev.dir.opposite());
            if (bad)
                throw validation_error(
                    "direction sequence violates the kernel constraints");
        }
        const std::int64_t length = kind == WalkKind::Persistent ? time : (time & 1);
        pos[static_cast<std::size_t>(dir.axis())] += dir.sign() * length;
        path.steps.push_back(WalkStep{dir, time, length});
        path.positions.insert(path.positions.end(), pos.begin(), pos.end());
    }
    return path;
}

void write_csv(const WalkPath& path, std::ostream& out) {
    out << "step_index,axis,sign,T,L";
    for (int i = 1; i <= path.dimension; ++i) out << ",x" << i;
    out << '\n';
    for (std::size_t m = 1; m <= path.num_steps(); ++m) {
        const WalkStep& s = path.steps[m - 1];
        out << m << ',' << (s.dir.axis() + 1) << ',' << s.dir.sign() << ','
            << s.time << ',' << s.length;
        for (const std::int64_t coord : path.position(m)) out << ',' << coord;
        out << '\n';
    }
}

} // namespace srw
