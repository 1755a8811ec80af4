#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "srw/reinforcement.hpp"
#include "srw/walk.hpp"

namespace srw {

// Exhaustive expectations over all (direction, run time) sequences for
// finite-support run-time laws. Walks the tree directly from the kernel
// probabilities, independently of the path generator and the closed-form
// moment formulas it cross-checks. Feasible for small d, support and n only.

// P(T = k) for k = 1..max_support; throws validation_error if the law is not
// exhausted within max_support.
inline std::vector<double> enumerate_time_pmf(const ReinforcementSpec& spec,
                                              int max_support) {
    std::vector<double> out;
    double tail = 1.0;
    for (int k = 1; k <= max_support; ++k) {
        const double c = spec.continuation(k);
        out.push_back(tail * (1.0 - c));
        tail *= c;
        if (tail == 0.0) return out;
    }
    throw validation_error("run-time law has mass beyond the requested support");
}

namespace enumeration_detail {

template <typename Visit>
void walk_tree(WalkKind kind, int d, std::span<const double> time_pmf, int n,
               int depth, int prev_code, std::int64_t prev_len, double prob,
               std::vector<std::int64_t>& pos, const Visit& visit) {
    if (depth == n) {
        visit(pos, prob);
        return;
    }
    const int codes = 2 * d;
    for (int code = 0; code < codes; ++code) {
        double dir_weight;
        if (depth == 0) {
            dir_weight = 1.0 / codes;
        } else {
            int excluded;
            if (kind == WalkKind::Persistent) {
                excluded = prev_code;
            } else {
                const Direction prev = Direction::from_code(prev_code);
                excluded = (prev_len == 0 ? prev : prev.opposite()).code();
            }
            if (code == excluded) continue;
            dir_weight = 1.0 / (codes - 1);
        }
        const Direction dir = Direction::from_code(code);
        for (std::size_t t = 1; t <= time_pmf.size(); ++t) {
            const double p = prob * dir_weight * time_pmf[t - 1];
            if (p == 0.0) continue;
            const std::int64_t length =
                kind == WalkKind::Persistent ? static_cast<std::int64_t>(t)
                                             : static_cast<std::int64_t>(t & 1);
            pos[static_cast<std::size_t>(dir.axis())] += dir.sign() * length;
            walk_tree(kind, d, time_pmf, n, depth + 1, code, length, p, pos, visit);
            pos[static_cast<std::size_t>(dir.axis())] -= dir.sign() * length;
        }
    }
}

} // namespace enumeration_detail

// Exact E(|W_n|^2) by exhaustive enumeration.
inline double enumerate_msd(WalkKind kind, int d, std::span<const double> time_pmf,
                            int n) {
    double expectation = 0.0;
    std::vector<std::int64_t> pos(static_cast<std::size_t>(d), 0);
    enumeration_detail::walk_tree(
        kind, d, time_pmf, n, 0, 0, 0, 1.0, pos,
        [&](const std::vector<std::int64_t>& w, double p) {
            double norm2 = 0.0;
            for (const std::int64_t x : w) {
                const double xd = static_cast<double>(x);
                norm2 += xd * xd;
            }
            expectation += p * norm2;
        });
    return expectation;
}

// Exact distribution of W_n.
inline std::map<std::vector<std::int64_t>, double>
enumerate_position_distribution(WalkKind kind, int d,
                                std::span<const double> time_pmf, int n) {
    std::map<std::vector<std::int64_t>, double> dist;
    std::vector<std::int64_t> pos(static_cast<std::size_t>(d), 0);
    enumeration_detail::walk_tree(
        kind, d, time_pmf, n, 0, 0, 0, 1.0, pos,
        [&](const std::vector<std::int64_t>& w, double p) { dist[w] += p; });
    return dist;
}

} // namespace srw
