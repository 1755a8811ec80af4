#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "srw/errors.hpp"
#include "srw/rng.hpp"

namespace srw {

enum class FamilyKind { Constant, Affine, Table };

// Reinforcement function f: {1,2,...} -> [-1, inf) together with the lattice
// dimension d. The pair determines the law of the run time T through
//
//   P(T >= k) = prod_{l=1}^{k-1} (1 + f(l)) / (2d + f(l)),   P(T >= 1) = 1.
//
// f(l) = -1 is allowed and truncates T at l; f(l) < -1 is invalid wherever the
// running tail is still positive. t_cap is a hard cap on sampled run times:
// a draw that reaches it raises cap_exceeded_error (or is censored, when the
// caller opts in), never silently truncated.
struct ReinforcementSpec {
    int dimension = 1;
    FamilyKind family = FamilyKind::Constant;
    double const_value = 0.0;
    double affine_slope = 0.0;
    double affine_intercept = 0.0;
    std::vector<double> table; // f(1)..f(K); final entry extends to all larger l
    std::int64_t t_cap = 10'000'000;

    static ReinforcementSpec constant(int d, double c,
                                      std::int64_t cap = 10'000'000);
    static ReinforcementSpec affine(int d, double slope, double intercept,
                                    std::int64_t cap = 10'000'000);
    static ReinforcementSpec from_table(int d, std::vector<double> values,
                                        std::int64_t cap = 10'000'000);

    // Parses "const:c", "affine:a,b" or "table:path" (one f(l) per line,
    // final value extended to all larger l).
    static ReinforcementSpec parse(int d, const std::string& text,
                                   std::int64_t cap = 10'000'000);

    double f(std::int64_t l) const;

    // Probability (1 + f(l)) / (2d + f(l)) that a run of current length l
    // continues; always < 1, clamped at 0 for f(l) = -1.
    double continuation(std::int64_t l) const;

    void validate() const;

    std::string family_string() const;
};

// Derived law of the run time T. mean and second_moment are +inf when the
// corresponding series diverges; the _error fields are certified bounds on
// the truncation error of the finite values (0 for exact finite-support
// laws). p_odd always carries an error bound of at most the final tail.
struct TimeLaw {
    ReinforcementSpec spec;
    double mean = 0.0;
    double second_moment = 0.0;
    double p_odd = 0.0;
    std::int64_t truncation_index = 0;
    double mean_error = 0.0;
    double second_moment_error = 0.0;
    double p_odd_error = 0.0;

    bool mean_finite() const;
    bool second_moment_finite() const;
};

struct TimeLawBudget {
    std::int64_t max_iterations = 10'000'000;
    // Partial sums of tail probabilities beyond this value declare E(T) = inf
    // (fallback rule; the family-specific certificates normally decide first).
    double divergence_threshold = 1e6;
    // At budget exhaustion, a certified-finite moment whose remainder bound
    // still exceeds this fraction of the partial sum is reported as
    // indeterminate rather than returned as a bogus value.
    double max_relative_error = 0.5;
};

// P(T >= k) for k >= 1; exactly 1 at k = 1.
double tail_probability(const ReinforcementSpec& spec, std::int64_t k);

// P(T = k), computed as tail(k) * (1 - continuation(k)); never negative.
double pmf(const ReinforcementSpec& spec, std::int64_t k);

// Sums E(T), E(T^2) and P(T odd), truncating once certified remainder bounds
// fall below tol (geometric comparison where the continuation probability is
// eventually bounded away from 1, polynomial-tail comparison for affine
// families with positive slope, exact for finite support).
TimeLaw compute_time_law(const ReinforcementSpec& spec, double tol = 1e-10,
                         const TimeLawBudget& budget = {});

enum class CapPolicy { Strict, Censor };

// Draws T by sequential continuation decisions: starting at l = 1, continue
// with probability continuation(l), stop otherwise. A run reaching t_cap
// raises cap_exceeded_error under Strict, or is censored at t_cap (and
// counted in *breaches) under Censor.
std::int64_t sample_time(const ReinforcementSpec& spec, RngStream& rng);
std::int64_t sample_time(const ReinforcementSpec& spec, RngStream& rng,
                         CapPolicy policy, std::int64_t* breaches);

} // namespace srw
