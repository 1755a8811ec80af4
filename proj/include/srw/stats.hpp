#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "srw/martingale.hpp"
#include "srw/parallel.hpp"
#include "srw/reinforcement.hpp"
#include "srw/timechange.hpp"
#include "srw/walk.hpp"

namespace srw {

// Streaming (sum, sumsq, count) accumulator. merge() is plain componentwise
// addition, so partial accumulators combined in a fixed order reproduce the
// serial result bit for bit.
struct Accumulator {
    double sum = 0.0;
    double sumsq = 0.0;
    std::uint64_t count = 0;

    void add(double x) {
        sum += x;
        sumsq += x * x;
        ++count;
    }
    void merge(const Accumulator& other) {
        sum += other.sum;
        sumsq += other.sumsq;
        count += other.count;
    }
    double mean() const { return sum / static_cast<double>(count); }
    double sample_variance() const;
    double std_error() const;
};

struct EstimateReport {
    std::string quantity;
    double estimate = 0.0;
    double std_error = 0.0;
    std::uint64_t n_samples = 0;
    std::optional<double> reference;
    std::optional<double> z_score;
    std::optional<std::string> warning;

    bool within(double z_band) const;
};

EstimateReport make_report(std::string quantity, const Accumulator& acc,
                           std::optional<double> reference = std::nullopt,
                           std::optional<std::string> warning = std::nullopt);

nlohmann::ordered_json to_json(const EstimateReport& report);
void write_csv(std::span<const EstimateReport> reports, std::ostream& out);

// Standard normal CDF, accurate to full double precision via erfc.
double normal_cdf(double x);

// One-sample Kolmogorov-Smirnov statistic of an ascending sample against a
// CDF. Throws validation_error on empty or unsorted input.
double ks_statistic(std::span<const double> sorted_sample,
                    const std::function<double(double)>& cdf);

// Large-sample KS critical value at significance alpha for m samples.
double ks_critical_value(double alpha, std::uint64_t m);

struct McOptions {
    std::uint64_t n_paths = 10'000;
    std::uint64_t seed = 1;
    ParallelConfig parallel{};
};

enum class MsdTarget { TimeChangedWalk, SenileWalk };

// Monte Carlo E(|X_n|^2)/n for X the time-changed walk W or the senile walk
// S. References: exact_second_moment(n)/n for W, C/E(T) for S. A violated
// regime condition downgrades the reference to a warning tag; estimation
// still runs.
EstimateReport estimate_msd(WalkKind kind, MsdTarget target,
                            const ReinforcementSpec& spec, std::int64_t n,
                            const McOptions& options);

// Same, for several n sharing one set of paths (one report per n).
std::vector<EstimateReport> estimate_msd_multi(WalkKind kind, MsdTarget target,
                                               const ReinforcementSpec& spec,
                                               std::span<const std::int64_t> n_list,
                                               const McOptions& options);

// Raw merged (sum, sumsq, count) triple behind estimate_msd; exposed for the
// worker-count determinism checks.
Accumulator msd_accumulator_raw(WalkKind kind, MsdTarget target,
                                const ReinforcementSpec& spec, std::int64_t n,
                                const McOptions& options);

// E(|S^r_n|^2)/n on an increasing n grid for the reinforced senile walk;
// run-time draws are censored at t_cap with the breach count reported in the
// warning field rather than aborting.
std::vector<EstimateReport> subdiffusive_check(const ReinforcementSpec& spec,
                                               std::span<const std::int64_t> n_grid,
                                               const McOptions& options);

// Exact direction autocorrelations the estimates are checked against:
// persistent (-1/(2d-1))^k, reinforced (p^2/(2d-1)) ((2p-1)/(2d-1))^{k-1};
// at k = 0 the exact values are 1 and p.
double autocorrelation_reference(WalkKind kind, int d, double p_odd, int k);

// Estimates E(D_m . D_{m+k}) (persistent) or E(D_m . D_{m+k} L_m L_{m+k})
// (reinforced) for k = 1..k_max, with the references above.
std::vector<EstimateReport> direction_autocorrelation(WalkKind kind,
                                                      const ReinforcementSpec& spec,
                                                      std::int64_t m, int k_max,
                                                      const McOptions& options);

struct MartingaleTestOptions {
    std::vector<std::int64_t> n_list = {1, 10, 100};
    std::int64_t stratified_n = 10; // taken from n_list
    double coefficient_scale = 1.0; // != 1 deliberately mis-corrects the walk
};

struct MartingaleTestReport {
    std::vector<EstimateReport> increment_means;    // per (n, coordinate)
    std::vector<EstimateReport> stratified_means;   // per (stratum, coordinate)
    std::vector<EstimateReport> qv_differences;     // per n-pair
    std::vector<EstimateReport> cross_products;     // per coordinate pair
    double max_abs_z = 0.0;
    double max_abs_stratified_z = 0.0;
    bool all_within_band = false;
};

// Increment mean-zero (plain and stratified by the last step's (D, L)),
// compensated-QV constancy across n, and cross-coordinate increment
// orthogonality, each against a 3-standard-error band. The persistent
// kernel depends on the last step through D alone, so its strata are the 2d
// directions; the reinforced strata are the 4d (direction, length) pairs.
MartingaleTestReport martingale_tests(WalkKind kind, const ReinforcementSpec& spec,
                                      const McOptions& options,
                                      const MartingaleTestOptions& test_options = {});

struct KsReport {
    std::string quantity;
    double statistic = 0.0;
    double critical_value = 0.0;
    std::uint64_t n_samples = 0;
    bool pass = false;
};

nlohmann::ordered_json to_json(const KsReport& report);

// Per-path samples of the scaled process Z^n_t = sqrt(d E(T)/(n C)) S_{floor(nt)}
// on a time grid, with Z^n_0 = 0. The scale uses the kind-matched diffusion
// constant and mean run time.
struct ScaledProcessSample {
    WalkKind kind = WalkKind::Persistent;
    int dimension = 1;
    std::int64_t n = 0;
    std::vector<double> t_grid;   // ascending, deduplicated
    std::uint64_t n_paths = 0;
    double scale = 0.0;
    std::vector<double> values;   // path-major: per path, per t, per coordinate

    std::span<const double> value(std::uint64_t path, std::size_t t_index) const {
        const std::size_t row = t_grid.size() * static_cast<std::size_t>(dimension);
        return {values.data() + path * row +
                    t_index * static_cast<std::size_t>(dimension),
                static_cast<std::size_t>(dimension)};
    }
};

// Simulates n_paths senile walks and evaluates Z^n_t on the grid. Requires
// E(T) < infinity (and E(T^2) < infinity for the persistent kind).
ScaledProcessSample scaled_process_sample(WalkKind kind,
                                          const ReinforcementSpec& spec,
                                          std::int64_t n,
                                          std::span<const double> t_grid,
                                          const McOptions& options);

struct CltOptions {
    std::int64_t n = 10'000; // scaling index of Z^n_t
    std::vector<double> t_grid = {0.5, 1.0};
    double alpha = 0.01;     // per-test KS significance
};

struct CltReport {
    std::vector<KsReport> marginals;          // per (t, coordinate)
    std::vector<EstimateReport> cross_cov;    // per (t, coordinate pair)
    std::vector<EstimateReport> temporal_cov; // per (s < t), first coordinate
    bool all_pass = false;
};

// Finite-dimensional Brownian-limit diagnostics of the scaled senile walk
// Z^n_t = sqrt(d E(T) / (n C)) S_{floor(nt)}: per-coordinate KS of
// Z^n_t/sqrt(t) against the standard normal, cross-coordinate covariance
// bands around 0, and temporal covariance bands around min(s, t).
// Refuses (regime_error) when the kind's moment condition fails.
CltReport clt_diagnostic(WalkKind kind, const ReinforcementSpec& spec,
                         const McOptions& options, const CltOptions& clt = {});

} // namespace srw
