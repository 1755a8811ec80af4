#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "srw/reinforcement.hpp"
#include "srw/walk.hpp"

namespace srw {

// Closed-form constants of one walk kind in one dimension:
//
//   persistent: C = (d E(T^2) - E(T)^2) / d,  correction = E(T) / (2d)
//   reinforced: C = d p / (d - p),            correction = p / (2 (d - p))
//
// The persistent constants require E(T^2) < inf; the reinforced ones require
// p < 1 when d = 1.
struct WalkConstants {
    WalkKind kind = WalkKind::Persistent;
    int dimension = 1;
    double mean_time = 0.0;          // E(T), persistent case
    double second_moment_time = 0.0; // E(T^2), persistent case
    double p_odd = 0.0;              // P(T odd), reinforced case
    double diffusion_constant = 0.0;
    double correction_coefficient = 0.0;
};

// Throws regime_error naming the violated moment condition.
WalkConstants make_constants(WalkKind kind, int d, const TimeLaw& law);

double diffusion_constant(WalkKind kind, int d, const TimeLaw& law);

// Exact E(|W_n|^2) at finite n:
//
//   persistent: n E(T^2) - E(T)^2 (n/d + (2d-1)/(2d^2) [(-1/(2d-1))^n - 1])
//   reinforced: n d p/(d-p) + p^2 (2d-1)/(2(d-p)^2) [((2p-1)/(2d-1))^n - 1]
double exact_second_moment(WalkKind kind, int d, const TimeLaw& law, std::int64_t n);

// The walk with a constant-magnitude correction attached to the last step:
// M_n = W_n - (E(T)/(2d)) D_n (persistent) or
// M_n = W_n + (p/(2(d-p))) D_n (2 L_n - 1) (reinforced), together with the
// compensated quadratic variation |M_n|^2 - n C.
struct MartingalePath {
    int dimension = 1;
    std::vector<double> values; // n x dimension, row-major
    std::vector<double> compensated_qv;

    std::size_t num_steps() const { return compensated_qv.size(); }
    std::span<const double> value(std::size_t n) const { // 1-based
        return {values.data() + (n - 1) * static_cast<std::size_t>(dimension),
                static_cast<std::size_t>(dimension)};
    }
};

MartingalePath to_martingale(const WalkPath& path, const WalkConstants& constants);

// One JSON record {kind, d, C, correction, n, exact_msd} per requested n.
nlohmann::ordered_json exact_curve_json(const WalkConstants& constants,
                                        const TimeLaw& law,
                                        std::span<const std::int64_t> n_list);

} // namespace srw
