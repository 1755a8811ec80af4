#include "srw/timechange.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace srw {

TimeIndex TimeIndex::from_path(const WalkPath& path) {
    TimeIndex index;
    index.partial_sums.reserve(path.num_steps());
    std::int64_t acc = 0;
    for (const WalkStep& s : path.steps) {
        acc += s.time;
        index.partial_sums.push_back(acc);
    }
    return index;
}

std::size_t tau_inverse(const TimeIndex& index, std::int64_t n) {
    if (n < 1) throw std::out_of_range("tau_inverse requires n >= 1");
    const auto it = std::lower_bound(index.partial_sums.begin(),
                                     index.partial_sums.end(), n);
    if (it == index.partial_sums.end()) {
        std::ostringstream msg;
        msg << "unit time " << n << " lies beyond the path horizon "
            << (index.partial_sums.empty() ? 0 : index.partial_sums.back());
        throw std::out_of_range(msg.str());
    }
    return static_cast<std::size_t>(it - index.partial_sums.begin()) + 1;
}

SenilePath senile_from_timechange(const WalkPath& path, std::int64_t horizon) {
    if (horizon < 1) throw config_error("horizon must be >= 1");
    if (path.total_time() < horizon)
        throw config_error("walk covers less unit time than the requested horizon; "
                           "extend the path");
    const int d = path.dimension;
    SenilePath out;
    out.kind = path.kind;
    out.dimension = d;
    out.positions.reserve(static_cast<std::size_t>(horizon) *
                          static_cast<std::size_t>(d));

    std::int64_t tau = 0; // tau_{m-1} entering run m
    for (std::size_t m = 1; m <= path.num_steps(); ++m) {
        const WalkStep& s = path.steps[m - 1];
        const std::int64_t tau_m = tau + s.time;
        const auto w = path.position(m);
        const std::int64_t last = std::min(tau_m, horizon);
        for (std::int64_t n = tau + 1; n <= last; ++n) {
            for (int i = 0; i < d; ++i) out.positions.push_back(w[i]);
            auto* row = out.positions.data() + out.positions.size() - d;
            if (path.kind == WalkKind::Persistent) {
                row[s.dir.axis()] += s.dir.sign() * (n - tau_m);
            } else if ((tau_m - n) & 1) {
                row[s.dir.axis()] -= s.dir.sign();
            }
        }
        tau = tau_m;
        if (tau >= horizon) break;
    }
    return out;
}

void senile_positions_at(const WalkPath& path,
                         std::span<const std::int64_t> sorted_times,
                         std::int64_t* out) {
    if (sorted_times.empty()) return;
    if (path.total_time() < sorted_times.back())
        throw config_error("walk covers less unit time than the last query; "
                           "extend the path");
    const int d = path.dimension;
    std::size_t q = 0;
    std::int64_t tau = 0;
    for (std::size_t m = 1; m <= path.num_steps() && q < sorted_times.size(); ++m) {
        const WalkStep& s = path.steps[m - 1];
        const std::int64_t tau_m = tau + s.time;
        const auto w = path.position(m);
        while (q < sorted_times.size() && sorted_times[q] <= tau_m) {
            const std::int64_t n = sorted_times[q];
            if (n < 1) throw std::out_of_range("senile positions are defined for n >= 1");
            std::int64_t* row = out + q * static_cast<std::size_t>(d);
            for (int i = 0; i < d; ++i) row[i] = w[i];
            if (path.kind == WalkKind::Persistent) {
                row[s.dir.axis()] += s.dir.sign() * (n - tau_m);
            } else if ((tau_m - n) & 1) {
                row[s.dir.axis()] -= s.dir.sign();
            }
            ++q;
        }
        tau = tau_m;
    }
}

namespace {

// Per-run primitive supplier for the unit-time construction. The random
// source draws from the direction kernels and the sequential run-time
// sampler; the scripted source replays a recorded walk's primitives.
class DirTimeSource {
public:
    virtual ~DirTimeSource() = default;
    virtual Direction first_direction() = 0;
    virtual Direction next_direction(Direction prev, std::int64_t prev_length) = 0;
    virtual std::int64_t next_time() = 0;
};

class RandomSource final : public DirTimeSource {
public:
    RandomSource(WalkKind kind, const ReinforcementSpec& spec, RngStream& rng,
                 CapPolicy policy, std::int64_t* breaches)
        : kind_(kind), spec_(spec), rng_(rng), policy_(policy), breaches_(breaches) {}

    Direction first_direction() override {
        return initial_direction(spec_.dimension, rng_);
    }
    Direction next_direction(Direction prev, std::int64_t prev_length) override {
        return kind_ == WalkKind::Persistent
                   ? next_direction_persistent(prev, spec_.dimension, rng_)
                   : next_direction_reinforced(prev, prev_length, spec_.dimension,
                                               rng_);
    }
    std::int64_t next_time() override {
        return sample_time(spec_, rng_, policy_, breaches_);
    }

private:
    WalkKind kind_;
    const ReinforcementSpec& spec_;
    RngStream& rng_;
    CapPolicy policy_;
    std::int64_t* breaches_;
};

class ScriptedSource final : public DirTimeSource {
public:
    explicit ScriptedSource(std::span<const WalkStep> steps) : steps_(steps) {}

    Direction first_direction() override { return steps_[next_].dir; }
    Direction next_direction(Direction, std::int64_t) override {
        return steps_[next_].dir;
    }
    std::int64_t next_time() override { return steps_[next_++].time; }

private:
    std::span<const WalkStep> steps_;
    std::size_t next_ = 0;
};

// Emits runs one unit step at a time. A persistent run of duration t walks t
// unit steps in its direction. A reinforced run toggles between the two
// endpoints of its edge, landing after t steps on the start vertex when t is
// even and on the far vertex when t is odd.
SenilePath emit_unit_steps(WalkKind kind, int d, DirTimeSource& source,
                           std::int64_t horizon) {
    if (horizon < 1) throw config_error("horizon must be >= 1");
    SenilePath out;
    out.kind = kind;
    out.dimension = d;
    out.positions.reserve(static_cast<std::size_t>(horizon) *
                          static_cast<std::size_t>(d));
    std::vector<std::int64_t> pos(static_cast<std::size_t>(d), 0);
    std::vector<std::int64_t> site(static_cast<std::size_t>(d), 0);
    std::int64_t emitted = 0;
    Direction prev{};
    std::int64_t prev_length = 0;
    bool first = true;
    while (emitted < horizon) {
        const Direction dir =
            first ? source.first_direction() : source.next_direction(prev, prev_length);
        const std::int64_t t = source.next_time();
        const std::int64_t length = kind == WalkKind::Persistent ? t : (t & 1);
        if (kind == WalkKind::Persistent) {
            for (std::int64_t i = 1; i <= t && emitted < horizon; ++i) {
                pos[static_cast<std::size_t>(dir.axis())] += dir.sign();
                out.positions.insert(out.positions.end(), pos.begin(), pos.end());
                ++emitted;
            }
        } else {
            // end vertex of the run; the path alternates between it and the
            // site one step against dir
            site = pos;
            site[static_cast<std::size_t>(dir.axis())] += dir.sign() * length;
            for (std::int64_t i = 1; i <= t && emitted < horizon; ++i) {
                out.positions.insert(out.positions.end(), site.begin(), site.end());
                if ((t - i) & 1) { // one step off the end vertex
                    auto* row = out.positions.data() + out.positions.size() - d;
                    row[dir.axis()] -= dir.sign();
                }
                ++emitted;
            }
            pos = site;
        }
        prev = dir;
        prev_length = length;
        first = false;
    }
    return out;
}

} // namespace

SenilePath senile_direct(WalkKind kind, const ReinforcementSpec& spec,
                         std::int64_t horizon, RngStream& rng) {
    return senile_direct(kind, spec, horizon, rng, CapPolicy::Strict, nullptr);
}

SenilePath senile_direct(WalkKind kind, const ReinforcementSpec& spec,
                         std::int64_t horizon, RngStream& rng, CapPolicy policy,
                         std::int64_t* breaches) {
    spec.validate();
    RandomSource source(kind, spec, rng, policy, breaches);
    return emit_unit_steps(kind, spec.dimension, source, horizon);
}

CoupledPair coupled_pair(WalkKind kind, const ReinforcementSpec& spec,
                         std::int64_t horizon, RngStream& rng, const TimeLaw* law) {
    CoupledPair pair;
    pair.walk = generate_walk_until(kind, spec, horizon, rng, law);
    ScriptedSource source(pair.walk.steps);
    pair.direct = emit_unit_steps(kind, spec.dimension, source, horizon);
    return pair;
}

void write_csv(const SenilePath& path, std::ostream& out) {
    out << "n";
    for (int i = 1; i <= path.dimension; ++i) out << ",x" << i;
    out << '\n';
    for (std::int64_t n = 1; n <= path.horizon(); ++n) {
        out << n;
        for (const std::int64_t coord : path.position(n)) out << ',' << coord;
        out << '\n';
    }
}

} // namespace srw
