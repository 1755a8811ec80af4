#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "srw/timechange.hpp"

using namespace srw;

namespace {

WalkPath scripted(WalkKind kind, int d,
                  std::vector<std::pair<Direction, std::int64_t>> prims) {
    return walk_from_primitives(kind, d, prims);
}

} // namespace

TEST_CASE("tau_inverse on a small index") {
    TimeIndex idx{{3, 5, 9}};
    CHECK(tau_inverse(idx, 4) == 2);
    CHECK(tau_inverse(idx, 3) == 1);
    CHECK(tau_inverse(idx, 1) == 1);
    CHECK(tau_inverse(idx, 9) == 3);
    CHECK_THROWS_AS(tau_inverse(idx, 10), std::out_of_range);
    CHECK_THROWS_AS(tau_inverse(idx, 0), std::out_of_range);
}

TEST_CASE("unit run times make the time-change the identity") {
    TimeIndex idx{{1, 2, 3, 4, 5}};
    for (std::int64_t n = 1; n <= 5; ++n)
        CHECK(tau_inverse(idx, n) == static_cast<std::size_t>(n));
}

TEST_CASE("tau_inverse is a right inverse on random paths") {
    const auto spec = ReinforcementSpec::constant(2, 1.0);
    RngStream rng(3, 0);
    const auto path = generate_walk(WalkKind::Persistent, spec, 200, rng);
    const auto idx = TimeIndex::from_path(path);
    for (std::int64_t n = 1; n <= path.total_time(); ++n) {
        const std::size_t m = tau_inverse(idx, n);
        REQUIRE(idx.partial_sums[m - 1] >= n);
        if (m > 1) REQUIRE(idx.partial_sums[m - 2] < n);
        REQUIRE(m <= static_cast<std::size_t>(n));
    }
}

TEST_CASE("persistent senile path: hand-computed positions") {
    const auto walk = scripted(WalkKind::Persistent, 1,
                               {{Direction{+1}, 3}, {Direction{-1}, 2}});
    const auto senile = senile_from_timechange(walk, 5);
    REQUIRE(senile.horizon() == 5);
    const std::int64_t expect[] = {1, 2, 3, 2, 1};
    for (std::int64_t n = 1; n <= 5; ++n) CHECK(senile.position(n)[0] == expect[n - 1]);
}

TEST_CASE("reinforced senile path: hand-computed positions") {
    const auto walk = scripted(WalkKind::Reinforced, 1, {{Direction{+1}, 3}});
    const auto senile = senile_from_timechange(walk, 3);
    const std::int64_t expect[] = {1, 0, 1};
    for (std::int64_t n = 1; n <= 3; ++n) CHECK(senile.position(n)[0] == expect[n - 1]);
}

TEST_CASE("reinforced even run wiggles to W_m - D_m, per the defining formula") {
    const auto walk = scripted(WalkKind::Reinforced, 1, {{Direction{+1}, 2}});
    const auto senile = senile_from_timechange(walk, 2);
    CHECK(senile.position(1)[0] == -1);
    CHECK(senile.position(2)[0] == 0);
}

TEST_CASE("unit run times collapse the senile walk onto the macro walk") {
    const auto spec = ReinforcementSpec::from_table(2, {-1.0});
    RngStream rng(5, 0);
    for (const WalkKind kind : {WalkKind::Persistent, WalkKind::Reinforced}) {
        const auto walk = generate_walk(kind, spec, 50, rng);
        const auto senile = senile_from_timechange(walk, 50);
        for (std::int64_t n = 1; n <= 50; ++n) {
            CHECK(senile.position(n)[0] == walk.position(static_cast<std::size_t>(n))[0]);
            CHECK(senile.position(n)[1] == walk.position(static_cast<std::size_t>(n))[1]);
        }
    }
}

TEST_CASE("a short walk cannot cover a long horizon") {
    const auto walk = scripted(WalkKind::Persistent, 1, {{Direction{+1}, 3}});
    CHECK_THROWS_WITH_AS(senile_from_timechange(walk, 10),
                         doctest::Contains("extend"), config_error);
}

TEST_CASE("sparse evaluation matches the full path") {
    const auto spec = ReinforcementSpec::constant(2, 0.0);
    for (const WalkKind kind : {WalkKind::Persistent, WalkKind::Reinforced}) {
        RngStream rng(9, kind == WalkKind::Persistent ? 0u : 1u);
        const auto walk = generate_walk_until(kind, spec, 500, rng);
        const auto full = senile_from_timechange(walk, 500);
        const std::int64_t queries[] = {1, 2, 17, 100, 499, 500};
        std::vector<std::int64_t> at(6 * 2);
        senile_positions_at(walk, queries, at.data());
        for (std::size_t q = 0; q < 6; ++q)
            for (int i = 0; i < 2; ++i)
                CHECK(at[q * 2 + static_cast<std::size_t>(i)] ==
                      full.position(queries[q])[i]);
    }
}

TEST_CASE("senile_direct: forced alternation when repeats are impossible") {
    const auto spec = ReinforcementSpec::constant(1, -1.0, 100);
    RngStream rng(7, 0);
    const auto senile = senile_direct(WalkKind::Persistent, spec, 4, rng);
    const std::int64_t first = senile.position(1)[0];
    CHECK(std::abs(first) == 1);
    CHECK(senile.position(2)[0] == 0);
    CHECK(senile.position(3)[0] == first);
    CHECK(senile.position(4)[0] == 0);
}

TEST_CASE("senile_direct with unit run times never backtracks in the reinforced kernel") {
    const auto spec = ReinforcementSpec::from_table(2, {-1.0});
    RngStream rng(8, 0);
    const auto senile = senile_direct(WalkKind::Reinforced, spec, 200, rng);
    // T = 1 forces L = 1 throughout, so the next step may not reverse: the
    // walk never returns to where it stood two steps earlier.
    for (std::int64_t n = 3; n <= senile.horizon(); ++n) {
        const auto two_back = senile.position(n - 2);
        const auto cur = senile.position(n);
        CHECK((cur[0] != two_back[0] || cur[1] != two_back[1]));
    }
}

TEST_CASE("degenerate reinforced d=1 with p=1 emits a straight line") {
    // T = 1 throughout, so L = 1 and the d=1 kernel repeats the direction
    // forever; the path construction itself stays well defined even though
    // the walk-level analysis excludes this case.
    const auto degenerate = ReinforcementSpec::from_table(1, {-1.0});
    RngStream rng(1, 0);
    const auto senile = senile_direct(WalkKind::Reinforced, degenerate, 5, rng);
    const std::int64_t dir = senile.position(1)[0];
    CHECK(std::abs(dir) == 1);
    for (std::int64_t n = 1; n <= 5; ++n) CHECK(senile.position(n)[0] == n * dir);
}

TEST_CASE("senile paths take unit steps and start next to the origin") {
    for (const WalkKind kind : {WalkKind::Persistent, WalkKind::Reinforced})
        for (const int d : {1, 2, 3}) {
            const auto spec = ReinforcementSpec::constant(d, 1.0);
            RngStream rng(11, static_cast<std::uint64_t>(d));
            const auto senile = senile_direct(kind, spec, 400, rng);
            std::int64_t first = 0;
            for (int i = 0; i < d; ++i) first += std::abs(senile.position(1)[i]);
            REQUIRE(first == 1);
            for (std::int64_t n = 2; n <= senile.horizon(); ++n) {
                std::int64_t manhattan = 0;
                for (int i = 0; i < d; ++i)
                    manhattan += std::abs(senile.position(n)[i] - senile.position(n - 1)[i]);
                REQUIRE(manhattan == 1);
            }
        }
}

TEST_CASE("coupled constructions agree exactly, run by run") {
    for (const WalkKind kind : {WalkKind::Persistent, WalkKind::Reinforced})
        for (const int d : {1, 2}) {
            const auto spec = ReinforcementSpec::constant(d, 1.0);
            for (std::uint64_t trial = 0; trial < 50; ++trial) {
                RngStream rng = RngStream::for_path(
                    kind == WalkKind::Persistent ? 100u : 200u,
                    trial * 4 + static_cast<std::uint64_t>(d));
                const auto pair = coupled_pair(kind, spec, 300, rng);
                const auto from_walk = senile_from_timechange(pair.walk, 300);
                REQUIRE(from_walk.positions == pair.direct.positions);

                // sampling identity S_{tau_m} = W_m at every covered renewal
                std::int64_t tau = 0;
                for (std::size_t m = 1; m <= pair.walk.num_steps(); ++m) {
                    tau += pair.walk.steps[m - 1].time;
                    if (tau > 300) break;
                    for (int i = 0; i < d; ++i)
                        REQUIRE(pair.direct.position(tau)[i] ==
                                pair.walk.position(m)[i]);
                }
            }
        }
}

TEST_CASE("between renewals: persistent runs are straight, reinforced runs live on one edge") {
    const auto spec = ReinforcementSpec::constant(2, 3.0);
    RngStream rng(13, 0);
    const auto pair = coupled_pair(WalkKind::Persistent, spec, 500, rng);
    std::int64_t tau = 0;
    for (std::size_t m = 1; m <= pair.walk.num_steps() && tau < 500; ++m) {
        const WalkStep& s = pair.walk.steps[m - 1];
        for (std::int64_t n = tau + 1; n <= std::min<std::int64_t>(tau + s.time, 500);
             ++n) {
            if (n < 2) continue;
            const auto prev = pair.direct.position(n - 1);
            const auto cur = pair.direct.position(n);
            REQUIRE(cur[s.dir.axis()] - prev[s.dir.axis()] == s.dir.sign());
        }
        tau += s.time;
    }

    RngStream rng2(13, 1);
    const auto rpair = coupled_pair(WalkKind::Reinforced, spec, 500, rng2);
    tau = 0;
    for (std::size_t m = 1; m <= rpair.walk.num_steps() && tau < 500; ++m) {
        const WalkStep& s = rpair.walk.steps[m - 1];
        const auto w = rpair.walk.position(m);
        for (std::int64_t n = tau + 1; n <= std::min<std::int64_t>(tau + s.time, 500);
             ++n) {
            const auto cur = rpair.direct.position(n);
            bool at_end = true;
            bool one_off = true;
            for (int i = 0; i < 2; ++i) {
                const std::int64_t delta = cur[i] - w[i];
                if (delta != 0) at_end = false;
                const std::int64_t expect =
                    i == s.dir.axis() ? -s.dir.sign() : 0;
                if (delta != expect) one_off = false;
            }
            REQUIRE((at_end || one_off));
        }
        tau += s.time;
    }
}

TEST_CASE("inverse time-change concentrates at n/E(T)") {
    const auto spec = ReinforcementSpec::constant(1, 0.0);
    const std::int64_t horizon = 10'000;
    const int n_paths = 2'000;
    double sum = 0.0, sumsq = 0.0;
    for (int p = 0; p < n_paths; ++p) {
        RngStream rng = RngStream::for_path(55, static_cast<std::uint64_t>(p));
        const auto walk = generate_walk_until(WalkKind::Persistent, spec, horizon, rng);
        const auto idx = TimeIndex::from_path(walk);
        const double x = static_cast<double>(tau_inverse(idx, horizon)) /
                         static_cast<double>(horizon);
        sum += x;
        sumsq += x * x;
    }
    const double mean = sum / n_paths;
    const double var = sumsq / n_paths - mean * mean;
    CHECK(std::abs(mean - 0.5) < 3 * std::sqrt(var / n_paths) + 1e-4);
}

TEST_CASE("senile CSV serialization is exact") {
    const auto walk = scripted(WalkKind::Persistent, 2, {{Direction{+2}, 2}});
    const auto senile = senile_from_timechange(walk, 2);
    std::ostringstream out;
    write_csv(senile, out);
    CHECK(out.str() == "n,x1,x2\n1,0,1\n2,0,2\n");
}
