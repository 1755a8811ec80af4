#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <set>
#include <vector>

#include "srw/parallel.hpp"
#include "srw/rng.hpp"

using namespace srw;

TEST_CASE("streams replay exactly for equal (seed, index)") {
    RngStream a(42, 7);
    RngStream b(42, 7);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("distinct path indices give distinct streams") {
    std::set<std::uint64_t> firsts;
    for (std::uint64_t idx = 0; idx < 1000; ++idx)
        firsts.insert(RngStream::for_path(1, idx).next_u64());
    CHECK(firsts.size() == 1000);
}

TEST_CASE("derive_seed separates tags") {
    CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 2));
    CHECK(derive_seed(1, 2) != derive_seed(2, 2));
    CHECK(derive_seed(5, 9, 1) == derive_seed(5, 9, 1));
}

TEST_CASE("uniform01 lies in [0,1) with mean near 1/2") {
    RngStream rng(3, 0);
    double sum = 0.0;
    const int n = 1'000'000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform01();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    const double mean = sum / n;
    const double se = std::sqrt(1.0 / 12.0 / n);
    CHECK(std::abs(mean - 0.5) < 3 * se);
}

TEST_CASE("bounded draws stay in range and cover all buckets") {
    RngStream rng(11, 4);
    std::vector<std::int64_t> counts(5, 0);
    const int n = 100'000;
    for (int i = 0; i < n; ++i) {
        const auto v = rng.bounded(5);
        REQUIRE(v < 5);
        ++counts[static_cast<std::size_t>(v)];
    }
    for (const std::int64_t c : counts) {
        const double expected = n / 5.0;
        CHECK(std::abs(c - expected) < 5 * std::sqrt(expected));
    }
}

TEST_CASE("run_chunked covers every index once, in chunk order") {
    ParallelConfig cfg;
    cfg.workers = 4;
    cfg.chunk_size = 17;
    struct Range {
        std::uint64_t begin = 0, end = 0, chunk = 0;
    };
    const auto chunks = run_chunked<Range>(
        1000, cfg, [](std::uint64_t b, std::uint64_t e, std::uint64_t c) {
            return Range{b, e, c};
        });
    REQUIRE(chunks.size() == (1000 + 16) / 17);
    std::uint64_t expect = 0;
    for (std::size_t c = 0; c < chunks.size(); ++c) {
        CHECK(chunks[c].chunk == c);
        CHECK(chunks[c].begin == expect);
        expect = chunks[c].end;
    }
    CHECK(expect == 1000);
}

TEST_CASE("run_chunked propagates exceptions") {
    ParallelConfig cfg;
    cfg.workers = 2;
    cfg.chunk_size = 8;
    CHECK_THROWS_AS(run_chunked<int>(100, cfg,
                                     [](std::uint64_t b, std::uint64_t, std::uint64_t) {
                                         if (b >= 32) throw std::runtime_error("boom");
                                         return 0;
                                     }),
                    std::runtime_error);
}
