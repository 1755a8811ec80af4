#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <map>
#include <sstream>
#include <vector>

#include "srw/enumeration.hpp"
#include "srw/walk.hpp"
#include "support/test_helpers.hpp"

using namespace srw;

TEST_CASE("direction codes form a bijection with signed axes") {
    for (const int d : {1, 2, 3, 5}) {
        for (int code = 0; code < 2 * d; ++code) {
            const Direction dir = Direction::from_code(code);
            CHECK(dir.code() == code);
            CHECK(dir.axis() < d);
            CHECK(dir.dot(dir) == 1);
            CHECK(dir.dot(dir.opposite()) == -1);
        }
    }
    CHECK(Direction{1}.dot(Direction{2}) == 0);
}

TEST_CASE("initial_direction is uniform and seeded") {
    RngStream rng(5, 0);
    std::array<std::int64_t, 4> counts{};
    const int n = 1'000'000;
    for (int i = 0; i < n; ++i) ++counts[static_cast<std::size_t>(initial_direction(2, rng).code())];
    for (const std::int64_t c : counts) {
        const double expected = n / 4.0;
        const double se = std::sqrt(n * 0.25 * 0.75);
        CHECK(std::abs(static_cast<double>(c) - expected) < 3 * se);
    }

    std::int64_t plus = 0;
    for (int i = 0; i < n; ++i) plus += initial_direction(1, rng).sign() > 0 ? 1 : 0;
    CHECK(std::abs(plus - n / 2.0) < 3 * std::sqrt(n * 0.25));

    RngStream a(7, 1), b(7, 1);
    for (int i = 0; i < 50; ++i)
        CHECK(initial_direction(3, a).signed_axis == initial_direction(3, b).signed_axis);
}

TEST_CASE("persistent kernel excludes the previous direction") {
    RngStream rng(6, 0);
    for (int i = 0; i < 100; ++i)
        CHECK(next_direction_persistent(Direction{+1}, 1, rng).signed_axis == -1);

    std::map<int, std::int64_t> counts;
    const int n = 1'000'000;
    for (int i = 0; i < n; ++i)
        ++counts[next_direction_persistent(Direction{+1}, 2, rng).code()];
    CHECK(counts.count(Direction{+1}.code()) == 0);
    for (const auto& [code, c] : counts) {
        (void)code;
        const double se = std::sqrt(n * (1.0 / 3) * (2.0 / 3));
        CHECK(std::abs(static_cast<double>(c) - n / 3.0) < 3 * se);
    }

    for (int i = 0; i < 10'000; ++i)
        CHECK(next_direction_persistent(Direction{+2}, 3, rng).signed_axis != 2);
}

TEST_CASE("reinforced kernel excludes by the previous step length") {
    RngStream rng(8, 0);
    for (int i = 0; i < 100; ++i) {
        CHECK(next_direction_reinforced(Direction{+1}, 1, 1, rng).signed_axis == +1);
        CHECK(next_direction_reinforced(Direction{+1}, 0, 1, rng).signed_axis == -1);
    }
    std::map<int, std::int64_t> counts;
    const int n = 1'000'000;
    for (int i = 0; i < n; ++i)
        ++counts[next_direction_reinforced(Direction{+1}, 1, 2, rng).code()];
    CHECK(counts.count(Direction{-1}.code()) == 0); // opposite excluded when L = 1
    for (const auto& [code, c] : counts) {
        (void)code;
        const double se = std::sqrt(n * (1.0 / 3) * (2.0 / 3));
        CHECK(std::abs(static_cast<double>(c) - n / 3.0) < 3 * se);
    }
}

TEST_CASE("scripted persistent walk reproduces the hand-computed positions") {
    const std::vector<std::pair<Direction, std::int64_t>> prims = {
        {Direction{+1}, 3}, {Direction{-1}, 2}};
    const WalkPath path = walk_from_primitives(WalkKind::Persistent, 1, prims);
    REQUIRE(path.num_steps() == 2);
    CHECK(path.position(1)[0] == 3);
    CHECK(path.position(2)[0] == 1);
    CHECK(path.total_time() == 5);
}

TEST_CASE("a reinforced step of even run time has length zero") {
    const std::vector<std::pair<Direction, std::int64_t>> prims = {{Direction{+2}, 4}};
    const WalkPath path = walk_from_primitives(WalkKind::Reinforced, 2, prims);
    CHECK(path.steps[0].length == 0);
    CHECK(path.position(1)[0] == 0);
    CHECK(path.position(1)[1] == 0);
}

TEST_CASE("walk_from_primitives rejects kernel violations") {
    const std::vector<std::pair<Direction, std::int64_t>> repeat = {
        {Direction{+1}, 2}, {Direction{+1}, 1}};
    CHECK_THROWS_AS(walk_from_primitives(WalkKind::Persistent, 1, repeat),
                    validation_error);
    // after an odd run the opposite direction is forbidden
    const std::vector<std::pair<Direction, std::int64_t>> reverse = {
        {Direction{+1}, 3}, {Direction{-1}, 1}};
    CHECK_THROWS_AS(walk_from_primitives(WalkKind::Reinforced, 1, reverse),
                    validation_error);
}

TEST_CASE("generated paths satisfy the structural invariants") {
    for (const WalkKind kind : {WalkKind::Persistent, WalkKind::Reinforced}) {
        const auto spec = ReinforcementSpec::constant(2, 0.0);
        RngStream rng(12, kind == WalkKind::Persistent ? 0u : 1u);
        const WalkPath path = generate_walk(kind, spec, 100'000, rng);
        std::vector<std::int64_t> expect(2, 0);
        for (std::size_t m = 1; m <= path.num_steps(); ++m) {
            const WalkStep& s = path.steps[m - 1];
            if (kind == WalkKind::Persistent) {
                CHECK(s.length == s.time);
                if (m > 1) REQUIRE(!(s.dir == path.steps[m - 2].dir));
            } else {
                CHECK(s.length == (s.time & 1));
                if (m > 1) {
                    const WalkStep& prev = path.steps[m - 2];
                    if (prev.length == 0) REQUIRE(!(s.dir == prev.dir));
                    else REQUIRE(!(s.dir == prev.dir.opposite()));
                }
            }
            expect[static_cast<std::size_t>(s.dir.axis())] += s.dir.sign() * s.length;
            REQUIRE(path.position(m)[0] == expect[0]);
            REQUIRE(path.position(m)[1] == expect[1]);
        }
    }
}

TEST_CASE("reinforced walk in d=1 demands p < 1") {
    const auto always_odd = ReinforcementSpec::from_table(1, {-1.0}); // T = 1
    RngStream rng(1, 0);
    CHECK_THROWS_AS(generate_walk(WalkKind::Reinforced, always_odd, 5, rng),
                    config_error);
    CHECK_NOTHROW(generate_walk(WalkKind::Persistent, always_odd, 5, rng));
    CHECK_NOTHROW(generate_walk(WalkKind::Reinforced,
                                ReinforcementSpec::from_table(2, {-1.0}), 5, rng));
}

TEST_CASE("coordinate means vanish by symmetry") {
    for (const WalkKind kind : {WalkKind::Persistent, WalkKind::Reinforced}) {
        const auto spec = ReinforcementSpec::constant(2, 0.0);
        WalkGenerator gen(kind, spec);
        const int n_paths = 200'000;
        const int n = 10;
        std::array<double, 2> sum{};
        std::array<double, 2> sumsq{};
        for (int p = 0; p < n_paths; ++p) {
            RngStream rng = RngStream::for_path(77, static_cast<std::uint64_t>(p));
            gen.reset(rng);
            for (int m = 0; m < n; ++m) gen.advance();
            for (int i = 0; i < 2; ++i) {
                const double x = static_cast<double>(gen.position()[i]);
                sum[static_cast<std::size_t>(i)] += x;
                sumsq[static_cast<std::size_t>(i)] += x * x;
            }
        }
        for (int i = 0; i < 2; ++i) {
            const double mean = sum[static_cast<std::size_t>(i)] / n_paths;
            const double var =
                sumsq[static_cast<std::size_t>(i)] / n_paths - mean * mean;
            CHECK(std::abs(mean) < 3 * std::sqrt(var / n_paths));
        }
    }
}

TEST_CASE("simulated law matches exhaustive enumeration in total variation") {
    // const:0 law at d=1 truncated to {1,2,3,4} and renormalized
    const auto spec = ReinforcementSpec::from_table(1, {-0.125, -0.25, -0.5, -1.0});
    const auto time_pmf = enumerate_time_pmf(spec, 4);
    REQUIRE(time_pmf.size() == 4);
    CHECK(time_pmf[0] == doctest::Approx(8.0 / 15).epsilon(1e-12));
    CHECK(time_pmf[3] == doctest::Approx(1.0 / 15).epsilon(1e-12));

    for (const WalkKind kind : {WalkKind::Persistent, WalkKind::Reinforced}) {
        const int n = 3;
        const auto exact = enumerate_position_distribution(kind, 1, time_pmf, n);
        std::map<std::vector<std::int64_t>, double> empirical;
        const int n_paths = 1'000'000;
        WalkGenerator gen(kind, spec);
        const double weight = 1.0 / n_paths;
        for (int p = 0; p < n_paths; ++p) {
            RngStream rng = RngStream::for_path(
                1234 + (kind == WalkKind::Reinforced ? 1 : 0),
                static_cast<std::uint64_t>(p));
            gen.reset(rng);
            for (int m = 0; m < n; ++m) gen.advance();
            empirical[{gen.position()[0]}] += weight;
        }
        CHECK(srw::test::total_variation(exact, empirical) < 0.01);
    }
}

TEST_CASE("walk CSV serialization is exact") {
    const std::vector<std::pair<Direction, std::int64_t>> prims = {
        {Direction{+2}, 3}, {Direction{-1}, 2}};
    const WalkPath path = walk_from_primitives(WalkKind::Persistent, 2, prims);
    std::ostringstream out;
    write_csv(path, out);
    CHECK(out.str() == "step_index,axis,sign,T,L,x1,x2\n"
                       "1,2,1,3,3,0,3\n"
                       "2,1,-1,2,2,-2,3\n");
}
