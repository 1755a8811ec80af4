#include "srw/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>

namespace srw {

double Accumulator::sample_variance() const {
    if (count < 2) return 0.0;
    const double n = static_cast<double>(count);
    const double v = (sumsq - sum * sum / n) / (n - 1.0);
    return v > 0.0 ? v : 0.0;
}

double Accumulator::std_error() const {
    if (count == 0) return 0.0;
    return std::sqrt(sample_variance() / static_cast<double>(count));
}

bool EstimateReport::within(double z_band) const {
    return !z_score.has_value() || std::abs(*z_score) < z_band;
}

EstimateReport make_report(std::string quantity, const Accumulator& acc,
                           std::optional<double> reference,
                           std::optional<std::string> warning) {
    EstimateReport r;
    r.quantity = std::move(quantity);
    r.estimate = acc.count > 0 ? acc.mean() : 0.0;
    r.std_error = acc.std_error();
    r.n_samples = acc.count;
    r.reference = reference;
    r.warning = std::move(warning);
    if (reference && acc.count > 0) {
        if (r.std_error > 0.0) {
            r.z_score = (r.estimate - *reference) / r.std_error;
        } else {
            r.z_score = r.estimate == *reference
                            ? 0.0
                            : std::numeric_limits<double>::infinity();
        }
    }
    return r;
}

nlohmann::ordered_json to_json(const EstimateReport& r) {
    nlohmann::ordered_json j;
    j["quantity"] = r.quantity;
    j["estimate"] = r.estimate;
    j["std_error"] = r.std_error;
    j["n_samples"] = r.n_samples;
    if (r.reference) j["reference"] = *r.reference;
    if (r.z_score) j["z_score"] = *r.z_score;
    if (r.warning) j["warning"] = *r.warning;
    return j;
}

void write_csv(std::span<const EstimateReport> reports, std::ostream& out) {
    out << "quantity,estimate,std_error,n_samples,reference,z_score,warning\n";
    for (const EstimateReport& r : reports) {
        out << r.quantity << ',' << r.estimate << ',' << r.std_error << ','
            << r.n_samples << ',';
        if (r.reference) out << *r.reference;
        out << ',';
        if (r.z_score) out << *r.z_score;
        out << ',';
        if (r.warning) out << *r.warning;
        out << '\n';
    }
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double ks_statistic(std::span<const double> sorted_sample,
                    const std::function<double(double)>& cdf) {
    if (sorted_sample.empty())
        throw validation_error("ks_statistic requires a nonempty sample");
    const double m = static_cast<double>(sorted_sample.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < sorted_sample.size(); ++i) {
        if (i > 0 && sorted_sample[i] < sorted_sample[i - 1])
            throw validation_error("ks_statistic requires an ascending sample");
        const double F = cdf(sorted_sample[i]);
        worst = std::max(worst, F - static_cast<double>(i) / m);
        worst = std::max(worst, static_cast<double>(i + 1) / m - F);
    }
    return worst;
}

double ks_critical_value(double alpha, std::uint64_t m) {
    return std::sqrt(-std::log(alpha / 2.0) / 2.0) /
           std::sqrt(static_cast<double>(m));
}

namespace {

double norm2(std::span<const std::int64_t> v) {
    double acc = 0.0;
    for (const std::int64_t x : v) {
        const double xd = static_cast<double>(x);
        acc += xd * xd;
    }
    return acc;
}

std::string dir_name(Direction dir) {
    return (dir.sign() > 0 ? "+e" : "-e") + std::to_string(dir.axis() + 1);
}

std::vector<std::int64_t> sorted_unique(std::span<const std::int64_t> values) {
    std::vector<std::int64_t> out(values.begin(), values.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

struct AccChunk {
    std::vector<Accumulator> acc;
    std::int64_t breaches = 0;
};

std::vector<Accumulator> fold(std::vector<AccChunk> chunks, std::size_t size,
                              std::int64_t* breaches = nullptr) {
    std::vector<Accumulator> total(size);
    for (const AccChunk& ch : chunks) {
        for (std::size_t i = 0; i < size; ++i) total[i].merge(ch.acc[i]);
        if (breaches) *breaches += ch.breaches;
    }
    return total;
}

// Per-path |X_n|^2 / n accumulators at each requested n, over one shared set
// of paths.
std::vector<Accumulator> msd_accumulators(WalkKind kind, MsdTarget target,
                                          const ReinforcementSpec& spec,
                                          std::span<const std::int64_t> n_sorted,
                                          const McOptions& options,
                                          CapPolicy policy,
                                          std::int64_t* breaches) {
    const std::int64_t max_n = n_sorted.back();
    auto chunks = run_chunked<AccChunk>(
        options.n_paths, options.parallel,
        [&](std::uint64_t begin, std::uint64_t end, std::uint64_t) {
            AccChunk ch;
            ch.acc.resize(n_sorted.size());
            if (target == MsdTarget::TimeChangedWalk) {
                WalkGenerator gen(kind, spec);
                gen.set_cap_policy(policy);
                for (std::uint64_t idx = begin; idx < end; ++idx) {
                    RngStream rng = RngStream::for_path(options.seed, idx);
                    gen.reset(rng);
                    std::size_t q = 0;
                    for (std::int64_t m = 1; q < n_sorted.size(); ++m) {
                        gen.advance();
                        if (m == n_sorted[q]) {
                            ch.acc[q].add(norm2(gen.position()) /
                                          static_cast<double>(m));
                            ++q;
                        }
                    }
                    ch.breaches += gen.cap_breaches();
                }
            } else {
                WalkPath buf;
                std::vector<std::int64_t> at(n_sorted.size() *
                                             static_cast<std::size_t>(spec.dimension));
                for (std::uint64_t idx = begin; idx < end; ++idx) {
                    RngStream rng = RngStream::for_path(options.seed, idx);
                    generate_walk_until(kind, spec, max_n, rng, &buf, policy,
                                        &ch.breaches);
                    senile_positions_at(buf, n_sorted, at.data());
                    for (std::size_t q = 0; q < n_sorted.size(); ++q) {
                        const std::span<const std::int64_t> row{
                            at.data() + q * static_cast<std::size_t>(spec.dimension),
                            static_cast<std::size_t>(spec.dimension)};
                        ch.acc[q].add(norm2(row) / static_cast<double>(n_sorted[q]));
                    }
                }
            }
            return ch;
        });
    return fold(std::move(chunks), n_sorted.size(), breaches);
}

std::string msd_label(WalkKind kind, MsdTarget target,
                      const ReinforcementSpec& spec, std::int64_t n) {
    std::ostringstream out;
    out << "msd_over_n[" << to_string(kind)
        << (target == MsdTarget::TimeChangedWalk ? " walk" : " senile") << " d="
        << spec.dimension << " f=" << spec.family_string() << " n=" << n << "]";
    return out.str();
}

} // namespace

EstimateReport estimate_msd(WalkKind kind, MsdTarget target,
                            const ReinforcementSpec& spec, std::int64_t n,
                            const McOptions& options) {
    const std::int64_t n_list[] = {n};
    return estimate_msd_multi(kind, target, spec, n_list, options).front();
}

Accumulator msd_accumulator_raw(WalkKind kind, MsdTarget target,
                                const ReinforcementSpec& spec, std::int64_t n,
                                const McOptions& options) {
    if (n < 1) throw config_error("msd_accumulator_raw requires n >= 1");
    const std::int64_t n_sorted[] = {n};
    return msd_accumulators(kind, target, spec, n_sorted, options,
                            CapPolicy::Strict, nullptr)
        .front();
}

std::vector<EstimateReport> estimate_msd_multi(WalkKind kind, MsdTarget target,
                                               const ReinforcementSpec& spec,
                                               std::span<const std::int64_t> n_list,
                                               const McOptions& options) {
    if (n_list.empty()) throw config_error("estimate_msd needs at least one n");
    for (const std::int64_t n : n_list)
        if (n < 1) throw config_error("estimate_msd requires n >= 1");
    if (options.n_paths < 2) throw config_error("estimate_msd needs n_paths >= 2");
    const std::vector<std::int64_t> n_sorted = sorted_unique(n_list);

    const TimeLaw law = compute_time_law(spec);
    validate_walk_config(kind, spec, law);

    // References; a violated regime condition becomes a warning tag and the
    // estimation runs without one.
    std::vector<std::optional<double>> refs(n_sorted.size());
    std::optional<std::string> warning;
    try {
        if (target == MsdTarget::TimeChangedWalk) {
            for (std::size_t q = 0; q < n_sorted.size(); ++q)
                refs[q] = exact_second_moment(kind, spec.dimension, law, n_sorted[q]) /
                          static_cast<double>(n_sorted[q]);
        } else {
            const WalkConstants constants = make_constants(kind, spec.dimension, law);
            if (!law.mean_finite())
                throw regime_error("senile diffusion constant requires E(T) < "
                                   "infinity, violated by " +
                                   spec.family_string());
            const double limit = constants.diffusion_constant / law.mean;
            for (auto& r : refs) r = limit;
        }
    } catch (const regime_error& e) {
        warning = e.what();
    }

    const std::vector<Accumulator> acc =
        msd_accumulators(kind, target, spec, n_sorted, options, CapPolicy::Strict,
                         nullptr);
    std::vector<EstimateReport> reports;
    reports.reserve(n_sorted.size());
    for (std::size_t q = 0; q < n_sorted.size(); ++q)
        reports.push_back(make_report(msd_label(kind, target, spec, n_sorted[q]),
                                      acc[q], refs[q], warning));
    return reports;
}

std::vector<EstimateReport> subdiffusive_check(const ReinforcementSpec& spec,
                                               std::span<const std::int64_t> n_grid,
                                               const McOptions& options) {
    if (n_grid.empty()) throw config_error("subdiffusive_check needs a grid");
    const WalkKind kind = WalkKind::Reinforced;
    const TimeLaw law = compute_time_law(spec);
    validate_walk_config(kind, spec, law);
    const std::vector<std::int64_t> n_sorted = sorted_unique(n_grid);

    std::optional<double> reference;
    if (law.mean_finite()) {
        const WalkConstants constants = make_constants(kind, spec.dimension, law);
        reference = constants.diffusion_constant / law.mean;
    }

    std::int64_t breaches = 0;
    const std::vector<Accumulator> acc =
        msd_accumulators(kind, MsdTarget::SenileWalk, spec, n_sorted, options,
                         CapPolicy::Censor, &breaches);
    std::optional<std::string> warning;
    if (breaches > 0) {
        std::ostringstream msg;
        msg << "censored " << breaches << " run times at t_cap = " << spec.t_cap;
        warning = msg.str();
    }
    std::vector<EstimateReport> reports;
    for (std::size_t q = 0; q < n_sorted.size(); ++q)
        reports.push_back(
            make_report(msd_label(kind, MsdTarget::SenileWalk, spec, n_sorted[q]),
                        acc[q], reference, warning));
    return reports;
}

double autocorrelation_reference(WalkKind kind, int d, double p_odd, int k) {
    if (k < 0) throw config_error("autocorrelation lag must be >= 0");
    if (kind == WalkKind::Persistent)
        return k == 0 ? 1.0 : std::pow(-1.0 / (2.0 * d - 1.0), k);
    if (k == 0) return p_odd;
    const double p = p_odd;
    return p * p / (2.0 * d - 1.0) *
           std::pow((2.0 * p - 1.0) / (2.0 * d - 1.0), k - 1);
}

std::vector<EstimateReport> direction_autocorrelation(WalkKind kind,
                                                      const ReinforcementSpec& spec,
                                                      std::int64_t m, int k_max,
                                                      const McOptions& options) {
    if (m < 1 || k_max < 1)
        throw config_error("direction_autocorrelation requires m >= 1 and k_max >= 1");
    const TimeLaw law = compute_time_law(spec);
    validate_walk_config(kind, spec, law);
    const std::int64_t last = m + k_max;

    auto chunks = run_chunked<AccChunk>(
        options.n_paths, options.parallel,
        [&](std::uint64_t begin, std::uint64_t end, std::uint64_t) {
            AccChunk ch;
            ch.acc.resize(static_cast<std::size_t>(k_max));
            WalkGenerator gen(kind, spec);
            std::vector<Direction> dirs(static_cast<std::size_t>(k_max) + 1);
            std::vector<std::int64_t> lens(static_cast<std::size_t>(k_max) + 1);
            for (std::uint64_t idx = begin; idx < end; ++idx) {
                RngStream rng = RngStream::for_path(options.seed, idx);
                gen.reset(rng);
                for (std::int64_t step = 1; step <= last; ++step) {
                    const WalkStep& s = gen.advance();
                    if (step >= m) {
                        dirs[static_cast<std::size_t>(step - m)] = s.dir;
                        lens[static_cast<std::size_t>(step - m)] = s.length;
                    }
                }
                for (int k = 1; k <= k_max; ++k) {
                    double sample = dirs[0].dot(dirs[static_cast<std::size_t>(k)]);
                    if (kind == WalkKind::Reinforced)
                        sample *= static_cast<double>(lens[0]) *
                                  static_cast<double>(lens[static_cast<std::size_t>(k)]);
                    ch.acc[static_cast<std::size_t>(k - 1)].add(sample);
                }
            }
            return ch;
        });
    const std::vector<Accumulator> acc =
        fold(std::move(chunks), static_cast<std::size_t>(k_max));

    std::vector<EstimateReport> reports;
    for (int k = 1; k <= k_max; ++k) {
        std::ostringstream label;
        label << "autocorr[" << to_string(kind) << " d=" << spec.dimension
              << " f=" << spec.family_string() << " m=" << m << " k=" << k << "]";
        reports.push_back(make_report(
            label.str(), acc[static_cast<std::size_t>(k - 1)],
            autocorrelation_reference(kind, spec.dimension, law.p_odd, k)));
    }
    return reports;
}

namespace {

struct MartingaleChunk {
    std::vector<Accumulator> inc;   // n_list x d
    std::vector<Accumulator> strat; // strata x d
    std::vector<Accumulator> qv;    // n pairs
    std::vector<Accumulator> cross; // coordinate pairs
};

} // namespace

MartingaleTestReport martingale_tests(WalkKind kind, const ReinforcementSpec& spec,
                                      const McOptions& options,
                                      const MartingaleTestOptions& topt) {
    std::vector<std::int64_t> n_list = topt.n_list;
    if (n_list.empty()) throw config_error("martingale_tests needs n values");
    std::sort(n_list.begin(), n_list.end());
    n_list.erase(std::unique(n_list.begin(), n_list.end()), n_list.end());
    if (n_list.front() < 1) throw config_error("martingale_tests requires n >= 1");
    if (std::find(n_list.begin(), n_list.end(), topt.stratified_n) == n_list.end())
        throw config_error("stratified_n must be one of the tested n values");

    const TimeLaw law = compute_time_law(spec);
    validate_walk_config(kind, spec, law);
    const WalkConstants constants = make_constants(kind, spec.dimension, law);
    const double coeff = constants.correction_coefficient * topt.coefficient_scale;
    const double C = constants.diffusion_constant;
    const int d = spec.dimension;
    const int n_strata = kind == WalkKind::Persistent ? 2 * d : 4 * d;

    // Snapshot slots for every n and n+1 we need.
    std::vector<std::int64_t> needed;
    for (const std::int64_t n : n_list) {
        needed.push_back(n);
        needed.push_back(n + 1);
    }
    needed = sorted_unique(needed);
    const auto slot_of = [&](std::int64_t n) {
        return static_cast<std::size_t>(
            std::lower_bound(needed.begin(), needed.end(), n) - needed.begin());
    };

    const std::size_t n_count = n_list.size();
    const std::size_t qv_pairs = n_count * (n_count - 1) / 2;
    const std::size_t coord_pairs =
        static_cast<std::size_t>(d) * static_cast<std::size_t>(d - 1) / 2;
    const std::int64_t max_step = n_list.back() + 1;

    auto chunks = run_chunked<MartingaleChunk>(
        options.n_paths, options.parallel,
        [&](std::uint64_t begin, std::uint64_t end, std::uint64_t) {
            MartingaleChunk ch;
            ch.inc.resize(n_count * static_cast<std::size_t>(d));
            ch.strat.resize(static_cast<std::size_t>(n_strata) *
                            static_cast<std::size_t>(d));
            ch.qv.resize(qv_pairs);
            ch.cross.resize(coord_pairs);

            WalkGenerator gen(kind, spec);
            std::vector<std::int64_t> snap_pos(needed.size() *
                                               static_cast<std::size_t>(d));
            std::vector<Direction> snap_dir(needed.size());
            std::vector<std::int64_t> snap_len(needed.size());
            std::vector<double> m_lo(static_cast<std::size_t>(d));
            std::vector<double> m_hi(static_cast<std::size_t>(d));
            std::vector<double> qv_at(n_count);

            const auto martingale_at = [&](std::size_t slot, std::vector<double>& out) {
                const std::int64_t* w =
                    snap_pos.data() + slot * static_cast<std::size_t>(d);
                for (int i = 0; i < d; ++i) out[static_cast<std::size_t>(i)] =
                    static_cast<double>(w[i]);
                const Direction dir = snap_dir[slot];
                if (kind == WalkKind::Persistent) {
                    out[static_cast<std::size_t>(dir.axis())] -= coeff * dir.sign();
                } else {
                    out[static_cast<std::size_t>(dir.axis())] +=
                        coeff * dir.sign() *
                        (2.0 * static_cast<double>(snap_len[slot]) - 1.0);
                }
            };

            for (std::uint64_t idx = begin; idx < end; ++idx) {
                RngStream rng = RngStream::for_path(options.seed, idx);
                gen.reset(rng);
                std::size_t q = 0;
                for (std::int64_t step = 1; step <= max_step && q < needed.size();
                     ++step) {
                    const WalkStep& s = gen.advance();
                    if (step == needed[q]) {
                        const auto pos = gen.position();
                        std::copy(pos.begin(), pos.end(),
                                  snap_pos.begin() +
                                      static_cast<std::ptrdiff_t>(
                                          q * static_cast<std::size_t>(d)));
                        snap_dir[q] = s.dir;
                        snap_len[q] = s.length;
                        ++q;
                    }
                }
                for (std::size_t ni = 0; ni < n_count; ++ni) {
                    const std::int64_t n = n_list[ni];
                    const std::size_t lo = slot_of(n);
                    const std::size_t hi = slot_of(n + 1);
                    martingale_at(lo, m_lo);
                    martingale_at(hi, m_hi);
                    double norm2_lo = 0.0;
                    for (int i = 0; i < d; ++i) {
                        const double v = m_lo[static_cast<std::size_t>(i)];
                        norm2_lo += v * v;
                    }
                    qv_at[ni] = norm2_lo - static_cast<double>(n) * C;
                    const bool is_strat = n == topt.stratified_n;
                    int stratum = -1;
                    if (is_strat) {
                        stratum = snap_dir[lo].code();
                        if (kind == WalkKind::Reinforced && snap_len[lo] == 1)
                            stratum += 2 * d;
                    }
                    std::size_t pair = 0;
                    for (int i = 0; i < d; ++i) {
                        const double inc = m_hi[static_cast<std::size_t>(i)] -
                                           m_lo[static_cast<std::size_t>(i)];
                        ch.inc[ni * static_cast<std::size_t>(d) +
                               static_cast<std::size_t>(i)]
                            .add(inc);
                        if (is_strat)
                            ch.strat[static_cast<std::size_t>(stratum) *
                                         static_cast<std::size_t>(d) +
                                     static_cast<std::size_t>(i)]
                                .add(inc);
                        if (is_strat) {
                            for (int j = i + 1; j < d; ++j, ++pair) {
                                const double inc_j =
                                    m_hi[static_cast<std::size_t>(j)] -
                                    m_lo[static_cast<std::size_t>(j)];
                                ch.cross[pair].add(inc * inc_j);
                            }
                        }
                    }
                }
                std::size_t pair = 0;
                for (std::size_t a = 0; a < n_count; ++a)
                    for (std::size_t b = a + 1; b < n_count; ++b, ++pair)
                        ch.qv[pair].add(qv_at[b] - qv_at[a]);
            }
            return ch;
        });

    MartingaleChunk total;
    total.inc.resize(n_count * static_cast<std::size_t>(d));
    total.strat.resize(static_cast<std::size_t>(n_strata) *
                       static_cast<std::size_t>(d));
    total.qv.resize(qv_pairs);
    total.cross.resize(coord_pairs);
    for (const MartingaleChunk& ch : chunks) {
        for (std::size_t i = 0; i < total.inc.size(); ++i) total.inc[i].merge(ch.inc[i]);
        for (std::size_t i = 0; i < total.strat.size(); ++i)
            total.strat[i].merge(ch.strat[i]);
        for (std::size_t i = 0; i < total.qv.size(); ++i) total.qv[i].merge(ch.qv[i]);
        for (std::size_t i = 0; i < total.cross.size(); ++i)
            total.cross[i].merge(ch.cross[i]);
    }

    MartingaleTestReport report;
    const auto note = [&report](const EstimateReport& r, bool stratified) {
        if (r.z_score) {
            report.max_abs_z = std::max(report.max_abs_z, std::abs(*r.z_score));
            if (stratified)
                report.max_abs_stratified_z =
                    std::max(report.max_abs_stratified_z, std::abs(*r.z_score));
        }
    };
    for (std::size_t ni = 0; ni < n_count; ++ni)
        for (int i = 0; i < d; ++i) {
            std::ostringstream label;
            label << "m_inc[" << to_string(kind) << " d=" << d << " n=" << n_list[ni]
                  << " x" << (i + 1) << "]";
            auto r = make_report(label.str(),
                                 total.inc[ni * static_cast<std::size_t>(d) +
                                           static_cast<std::size_t>(i)],
                                 0.0);
            note(r, false);
            report.increment_means.push_back(std::move(r));
        }
    for (int s = 0; s < n_strata; ++s) {
        const Direction dir = Direction::from_code(s % (2 * d));
        const int len = s / (2 * d);
        for (int i = 0; i < d; ++i) {
            const Accumulator& acc =
                total.strat[static_cast<std::size_t>(s) * static_cast<std::size_t>(d) +
                            static_cast<std::size_t>(i)];
            if (acc.count < 2) continue;
            std::ostringstream label;
            label << "m_inc_strat[" << to_string(kind) << " d=" << d << " n="
                  << topt.stratified_n << " D=" << dir_name(dir);
            if (kind == WalkKind::Reinforced) label << " L=" << len;
            label << " x" << (i + 1) << "]";
            auto r = make_report(label.str(), acc, 0.0);
            note(r, true);
            report.stratified_means.push_back(std::move(r));
        }
    }
    {
        std::size_t pair = 0;
        for (std::size_t a = 0; a < n_count; ++a)
            for (std::size_t b = a + 1; b < n_count; ++b, ++pair) {
                std::ostringstream label;
                label << "m_qv_diff[" << to_string(kind) << " d=" << d << " n="
                      << n_list[a] << ".." << n_list[b] << "]";
                auto r = make_report(label.str(), total.qv[pair], 0.0);
                note(r, false);
                report.qv_differences.push_back(std::move(r));
            }
    }
    {
        std::size_t pair = 0;
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j, ++pair) {
                std::ostringstream label;
                label << "m_cross[" << to_string(kind) << " d=" << d << " n="
                      << topt.stratified_n << " x" << (i + 1) << "*x" << (j + 1)
                      << "]";
                auto r = make_report(label.str(), total.cross[pair], 0.0);
                note(r, false);
                report.cross_products.push_back(std::move(r));
            }
    }
    report.all_within_band = report.max_abs_z < 3.0;
    return report;
}

nlohmann::ordered_json to_json(const KsReport& r) {
    nlohmann::ordered_json j;
    j["quantity"] = r.quantity;
    j["statistic"] = r.statistic;
    j["critical_value"] = r.critical_value;
    j["n_samples"] = r.n_samples;
    j["pass"] = r.pass;
    return j;
}

namespace {

struct SampleChunk {
    std::vector<double> z; // path-major: per path, per time, per coordinate
};

} // namespace

ScaledProcessSample scaled_process_sample(WalkKind kind,
                                          const ReinforcementSpec& spec,
                                          std::int64_t n,
                                          std::span<const double> t_grid_in,
                                          const McOptions& options) {
    if (n < 1) throw config_error("the scaling index n must be >= 1");
    if (t_grid_in.empty()) throw config_error("the t grid must be nonempty");
    if (options.n_paths < 1) throw config_error("n_paths must be >= 1");
    std::vector<double> t_grid(t_grid_in.begin(), t_grid_in.end());
    std::sort(t_grid.begin(), t_grid.end());
    t_grid.erase(std::unique(t_grid.begin(), t_grid.end()), t_grid.end());
    if (t_grid.front() < 0.0) throw config_error("t values must be >= 0");

    const TimeLaw law = compute_time_law(spec);
    validate_walk_config(kind, spec, law);
    const WalkConstants constants = make_constants(kind, spec.dimension, law);
    if (!law.mean_finite())
        throw regime_error("Brownian scaling requires E(T) < infinity, violated by " +
                           spec.family_string());

    const int d = spec.dimension;
    std::vector<std::int64_t> indices; // floor(n t) per grid entry
    for (const double t : t_grid)
        indices.push_back(
            static_cast<std::int64_t>(std::floor(static_cast<double>(n) * t)));
    const std::int64_t horizon = indices.back();

    ScaledProcessSample sample;
    sample.kind = kind;
    sample.dimension = d;
    sample.n = n;
    sample.t_grid = std::move(t_grid);
    sample.n_paths = options.n_paths;
    sample.scale =
        std::sqrt(static_cast<double>(d) * law.mean /
                  (static_cast<double>(n) * constants.diffusion_constant));

    const std::size_t nt = sample.t_grid.size();
    const std::size_t row = nt * static_cast<std::size_t>(d);
    if (horizon < 1) { // every grid time floors to 0: Z is identically 0
        sample.values.assign(options.n_paths * row, 0.0);
        return sample;
    }
    const double scale = sample.scale;
    auto chunks = run_chunked<SampleChunk>(
        options.n_paths, options.parallel,
        [&](std::uint64_t begin, std::uint64_t end, std::uint64_t) {
            SampleChunk ch;
            ch.z.reserve((end - begin) * row);
            WalkPath buf;
            std::vector<std::int64_t> query;
            std::vector<std::size_t> query_slot;
            for (std::size_t q = 0; q < nt; ++q)
                if (indices[q] >= 1) {
                    query.push_back(indices[q]);
                    query_slot.push_back(q);
                }
            std::vector<std::int64_t> at(query.size() * static_cast<std::size_t>(d));
            for (std::uint64_t idx = begin; idx < end; ++idx) {
                RngStream rng = RngStream::for_path(options.seed, idx);
                generate_walk_until(kind, spec, horizon, rng, &buf);
                senile_positions_at(buf, query, at.data());
                const std::size_t base = ch.z.size();
                ch.z.resize(base + row, 0.0);
                for (std::size_t qi = 0; qi < query.size(); ++qi) {
                    const std::size_t slot = query_slot[qi];
                    for (int i = 0; i < d; ++i)
                        ch.z[base + slot * static_cast<std::size_t>(d) +
                             static_cast<std::size_t>(i)] =
                            scale * static_cast<double>(
                                        at[qi * static_cast<std::size_t>(d) +
                                           static_cast<std::size_t>(i)]);
                }
            }
            return ch;
        });
    sample.values.reserve(options.n_paths * row);
    for (const SampleChunk& ch : chunks)
        sample.values.insert(sample.values.end(), ch.z.begin(), ch.z.end());
    return sample;
}

CltReport clt_diagnostic(WalkKind kind, const ReinforcementSpec& spec,
                         const McOptions& options, const CltOptions& clt) {
    if (options.n_paths < 2) throw config_error("clt_diagnostic needs n_paths >= 2");
    const ScaledProcessSample z =
        scaled_process_sample(kind, spec, clt.n, clt.t_grid, options);
    const int d = z.dimension;
    const std::size_t nt = z.t_grid.size();
    std::vector<std::int64_t> indices;
    for (const double t : z.t_grid)
        indices.push_back(
            static_cast<std::int64_t>(std::floor(static_cast<double>(clt.n) * t)));
    if (indices.back() < 1)
        throw config_error("t grid gives an empty horizon; enlarge n or t");
    const std::uint64_t n_paths = options.n_paths;

    CltReport report;
    report.all_pass = true;
    const double crit = ks_critical_value(clt.alpha, n_paths);
    std::vector<double> sample(n_paths);

    for (std::size_t q = 0; q < nt; ++q) {
        if (indices[q] < 1) continue;
        const double t = z.t_grid[q];
        const double root_t = std::sqrt(t);
        for (int i = 0; i < d; ++i) {
            for (std::uint64_t pth = 0; pth < n_paths; ++pth)
                sample[pth] = z.value(pth, q)[static_cast<std::size_t>(i)] / root_t;
            std::sort(sample.begin(), sample.end());
            KsReport ks;
            std::ostringstream label;
            label << "ks[" << to_string(kind) << " d=" << d << " t=" << t << " x"
                  << (i + 1) << "]";
            ks.quantity = label.str();
            ks.statistic = ks_statistic(sample, normal_cdf);
            ks.critical_value = crit;
            ks.n_samples = n_paths;
            ks.pass = ks.statistic < crit;
            report.all_pass = report.all_pass && ks.pass;
            report.marginals.push_back(std::move(ks));
        }
    }

    for (std::size_t q = 0; q < nt; ++q) {
        if (indices[q] < 1) continue;
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j) {
                Accumulator acc;
                for (std::uint64_t pth = 0; pth < n_paths; ++pth) {
                    const auto zr = z.value(pth, q);
                    acc.add(zr[static_cast<std::size_t>(i)] *
                            zr[static_cast<std::size_t>(j)]);
                }
                std::ostringstream label;
                label << "cross_cov[" << to_string(kind) << " d=" << d << " t="
                      << z.t_grid[q] << " x" << (i + 1) << "*x" << (j + 1) << "]";
                auto r = make_report(label.str(), acc, 0.0);
                report.all_pass = report.all_pass && r.within(3.0);
                report.cross_cov.push_back(std::move(r));
            }
    }

    for (std::size_t qa = 0; qa < nt; ++qa) {
        if (indices[qa] < 1) continue;
        for (std::size_t qb = qa + 1; qb < nt; ++qb) {
            if (indices[qb] < 1) continue;
            Accumulator acc;
            for (std::uint64_t pth = 0; pth < n_paths; ++pth)
                acc.add(z.value(pth, qa)[0] * z.value(pth, qb)[0]);
            std::ostringstream label;
            label << "temporal_cov[" << to_string(kind) << " d=" << d << " s="
                  << z.t_grid[qa] << " t=" << z.t_grid[qb] << " x1]";
            auto r = make_report(label.str(), acc, z.t_grid[qa]);
            report.all_pass = report.all_pass && r.within(3.0);
            report.temporal_cov.push_back(std::move(r));
        }
    }
    return report;
}

} // namespace srw
