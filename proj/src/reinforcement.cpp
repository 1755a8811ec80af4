#include "srw/reinforcement.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace srw {

namespace {

constexpr double kNegOneSlack = 1e-9; // rounding slack when f(l) sits on -1

double parse_double(const std::string& token, const std::string& context) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(token, &used);
    } catch (const std::exception&) {
        throw config_error("cannot parse number '" + token + "' in " + context);
    }
    if (used != token.size())
        throw config_error("trailing characters in number '" + token + "' in " + context);
    return value;
}

} // namespace

ReinforcementSpec ReinforcementSpec::constant(int d, double c, std::int64_t cap) {
    ReinforcementSpec spec;
    spec.dimension = d;
    spec.family = FamilyKind::Constant;
    spec.const_value = c;
    spec.t_cap = cap;
    spec.validate();
    return spec;
}

ReinforcementSpec ReinforcementSpec::affine(int d, double slope, double intercept,
                                            std::int64_t cap) {
    ReinforcementSpec spec;
    spec.dimension = d;
    spec.family = FamilyKind::Affine;
    spec.affine_slope = slope;
    spec.affine_intercept = intercept;
    spec.t_cap = cap;
    spec.validate();
    return spec;
}

ReinforcementSpec ReinforcementSpec::from_table(int d, std::vector<double> values,
                                                std::int64_t cap) {
    ReinforcementSpec spec;
    spec.dimension = d;
    spec.family = FamilyKind::Table;
    spec.table = std::move(values);
    spec.t_cap = cap;
    spec.validate();
    return spec;
}

ReinforcementSpec ReinforcementSpec::parse(int d, const std::string& text,
                                           std::int64_t cap) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw config_error("reinforcement family '" + text +
                           "' is not of the form const:c, affine:a,b or table:path");
    const std::string head = text.substr(0, colon);
    const std::string rest = text.substr(colon + 1);
    if (head == "const") {
        return constant(d, parse_double(rest, "const family"), cap);
    }
    if (head == "affine") {
        const auto comma = rest.find(',');
        if (comma == std::string::npos)
            throw config_error("affine family needs two values: affine:a,b");
        const double a = parse_double(rest.substr(0, comma), "affine family");
        const double b = parse_double(rest.substr(comma + 1), "affine family");
        return affine(d, a, b, cap);
    }
    if (head == "table") {
        std::ifstream in(rest);
        if (!in) throw config_error("cannot open reinforcement table file '" + rest + "'");
        std::vector<double> values;
        std::string line;
        while (std::getline(in, line)) {
            const auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos) continue;
            const auto last = line.find_last_not_of(" \t\r");
            values.push_back(parse_double(line.substr(first, last - first + 1),
                                          "table file " + rest));
        }
        if (values.empty())
            throw config_error("reinforcement table file '" + rest + "' is empty");
        return from_table(d, std::move(values), cap);
    }
    throw config_error("unknown reinforcement family '" + head + "'");
}

double ReinforcementSpec::f(std::int64_t l) const {
    switch (family) {
    case FamilyKind::Constant:
        return const_value;
    case FamilyKind::Affine:
        return affine_slope * static_cast<double>(l) + affine_intercept;
    case FamilyKind::Table: {
        const auto idx = static_cast<std::size_t>(l - 1);
        return idx < table.size() ? table[idx] : table.back();
    }
    }
    return 0.0;
}

double ReinforcementSpec::continuation(std::int64_t l) const {
    const double value = f(l);
    const double c = (1.0 + value) / (2.0 * dimension + value);
    return c < 0.0 ? 0.0 : c;
}

void ReinforcementSpec::validate() const {
    if (dimension < 1) throw validation_error("lattice dimension must be >= 1");
    if (t_cap < 1) throw validation_error("t_cap must be a positive integer");
    const auto check_value = [](double v, std::int64_t l) {
        if (v < -1.0 - kNegOneSlack) {
            std::ostringstream msg;
            msg << "reinforcement function value f(" << l << ") = " << v
                << " lies below -1";
            throw validation_error(msg.str());
        }
    };
    switch (family) {
    case FamilyKind::Constant:
        check_value(const_value, 1);
        break;
    case FamilyKind::Affine: {
        check_value(f(1), 1);
        if (affine_slope < 0.0) {
            // f is decreasing; it must hit -1 (truncating T) before going
            // below it. The truncation criterion matches the evaluation
            // path: the clamped continuation probability reaches 0.
            std::int64_t l = 1;
            while (continuation(l) > 0.0) {
                ++l;
                check_value(f(l), l);
            }
        }
        break;
    }
    case FamilyKind::Table: {
        if (table.empty()) throw validation_error("reinforcement table is empty");
        for (std::size_t i = 0; i < table.size(); ++i) {
            check_value(table[i], static_cast<std::int64_t>(i + 1));
            if (continuation(static_cast<std::int64_t>(i + 1)) == 0.0)
                break; // T truncated; later rows are unreachable
        }
        break;
    }
    }
}

std::string ReinforcementSpec::family_string() const {
    std::ostringstream out;
    switch (family) {
    case FamilyKind::Constant:
        out << "const:" << const_value;
        break;
    case FamilyKind::Affine:
        out << "affine:" << affine_slope << "," << affine_intercept;
        break;
    case FamilyKind::Table:
        out << "table[" << table.size() << " rows]";
        break;
    }
    return out.str();
}

bool TimeLaw::mean_finite() const { return std::isfinite(mean); }
bool TimeLaw::second_moment_finite() const { return std::isfinite(second_moment); }

double tail_probability(const ReinforcementSpec& spec, std::int64_t k) {
    if (k < 1) throw validation_error("tail_probability requires k >= 1");
    double tail = 1.0;
    for (std::int64_t l = 1; l < k && tail > 0.0; ++l) {
        if (spec.f(l) < -1.0 - kNegOneSlack) {
            std::ostringstream msg;
            msg << "f(" << l << ") < -1 encountered while the tail is positive";
            throw validation_error(msg.str());
        }
        tail *= spec.continuation(l);
    }
    return tail;
}

double pmf(const ReinforcementSpec& spec, std::int64_t k) {
    const double tail = tail_probability(spec, k);
    return tail * (1.0 - spec.continuation(k));
}

namespace {

// Upper bounds on sum_{i>=0} g(i) and sum_{i>=1} i*g(i), where g(i) bounds
// tail(K+1+i)/tail(K+1). Geometric g(i) = rho^i for families whose
// continuation probability stays below rho < 1; polynomial
// g(i) = (B/(B+a*i))^beta for affine f with positive slope a, where
// beta = (2d-1)/a and B = 2d + b + a*(K+1).
struct TailBound {
    bool usable = false;  // false while still inside a table prefix
    double sum_g = 0.0;   // requires beta > 1 in the polynomial case
    double sum_jg = 0.0;  // requires beta > 2; infinity otherwise
};

class TailAnalysis {
public:
    explicit TailAnalysis(const ReinforcementSpec& spec) : spec_(spec) {
        const double d = spec.dimension;
        switch (spec.family) {
        case FamilyKind::Constant:
            rho_ = spec.continuation(1);
            break;
        case FamilyKind::Affine:
            if (spec.affine_slope > 0.0) {
                polynomial_ = true;
                beta_ = (2.0 * d - 1.0) / spec.affine_slope;
                mean_diverges_ = beta_ <= 1.0;
                second_diverges_ = beta_ <= 2.0;
            } else {
                rho_ = spec.continuation(1); // decreasing f: continuation(1) is the max
            }
            break;
        case FamilyKind::Table: {
            // Suffix maxima of the continuation probability, so a geometric
            // bound is valid from any point inside the table as well.
            const auto len = static_cast<std::int64_t>(spec.table.size());
            suffix_rho_.resize(static_cast<std::size_t>(len) + 1);
            double running = spec.continuation(len); // extension region value
            suffix_rho_[static_cast<std::size_t>(len)] = running;
            for (std::int64_t l = len; l >= 1; --l) {
                running = std::max(running, spec.continuation(l));
                suffix_rho_[static_cast<std::size_t>(l - 1)] = running;
            }
            break;
        }
        }
    }

    bool mean_diverges() const { return mean_diverges_; }
    bool second_diverges() const { return second_diverges_; }

    // Bound valid for the tail beyond K processed terms.
    TailBound bound_at(std::int64_t K) const {
        TailBound b;
        if (polynomial_) {
            if (beta_ <= 1.0) return b; // nothing summable to certify
            const double B = 2.0 * spec_.dimension + spec_.affine_intercept +
                             spec_.affine_slope * static_cast<double>(K + 1);
            const double a = spec_.affine_slope;
            b.usable = true;
            b.sum_g = 1.0 + B / (a * (beta_ - 1.0));
            b.sum_jg = beta_ > 2.0
                           ? B / (a * (beta_ - 1.0)) +
                                 B * B / (a * a * (beta_ - 1.0) * (beta_ - 2.0))
                           : std::numeric_limits<double>::infinity();
            return b;
        }
        double rho = rho_;
        if (!suffix_rho_.empty()) {
            const auto idx = std::min<std::size_t>(static_cast<std::size_t>(K),
                                                   suffix_rho_.size() - 1);
            rho = suffix_rho_[idx];
        }
        if (rho >= 1.0) return b;
        b.usable = true;
        b.sum_g = 1.0 / (1.0 - rho);
        b.sum_jg = rho / ((1.0 - rho) * (1.0 - rho));
        return b;
    }

private:
    const ReinforcementSpec& spec_;
    bool polynomial_ = false;
    double beta_ = 0.0;
    double rho_ = 0.0;
    std::vector<double> suffix_rho_;
    bool mean_diverges_ = false;
    bool second_diverges_ = false;
};

} // namespace

TimeLaw compute_time_law(const ReinforcementSpec& spec, double tol,
                         const TimeLawBudget& budget) {
    if (tol <= 0.0) throw validation_error("tolerance must be positive");
    spec.validate();

    const TailAnalysis analysis(spec);
    bool mean_inf = analysis.mean_diverges();
    bool second_inf = analysis.second_diverges() || mean_inf;

    long double m1 = 0.0L, m2 = 0.0L, podd = 0.0L;
    long double tail = 1.0L;        // P(T >= k)
    long double tail_sum = 0.0L;    // running sum of tails (divergence fallback)
    std::int64_t k = 1;
    double r1 = 0.0, r2 = 0.0, rp = 0.0;
    bool resolved = false;

    while (true) {
        if (tail <= 0.0L) { // finite support: sums are exact
            r1 = r2 = rp = 0.0;
            resolved = true;
            break;
        }
        const std::int64_t K = k - 1; // pmf(1..K) already accumulated
        if (K > 0) {
            const TailBound b = analysis.bound_at(K);
            const double t = static_cast<double>(tail);
            rp = t;
            bool mean_done = mean_inf;
            bool second_done = second_inf;
            if (b.usable) {
                r1 = mean_inf ? 0.0 : t * (static_cast<double>(K) + b.sum_g);
                const double Kd = static_cast<double>(K);
                r2 = second_inf ? 0.0
                                : t * ((Kd + 1.0) * (Kd + 1.0) +
                                       (2.0 * Kd + 1.0) * (b.sum_g - 1.0) +
                                       2.0 * b.sum_jg);
                mean_done = mean_done ||
                            r1 <= tol * std::max(1.0, static_cast<double>(m1));
                second_done = second_done ||
                              (std::isfinite(r2) &&
                               r2 <= tol * std::max(1.0, static_cast<double>(m2)));
            }
            if (mean_done && second_done && rp <= tol) {
                resolved = true;
                break;
            }
            if (K >= budget.max_iterations) break;
        }
        tail_sum += tail;
        if (static_cast<double>(tail_sum) > budget.divergence_threshold)
            mean_inf = second_inf = true;

        const long double c = spec.continuation(k);
        const long double pk = tail * (1.0L - c);
        const long double kd = static_cast<long double>(k);
        m1 += kd * pk;
        m2 += kd * kd * pk;
        if (k & 1) podd += pk;
        tail *= c;
        ++k;
    }

    if (!resolved) {
        // Budget exhausted. Values remain usable as long as the certified
        // remainders are small relative to what was accumulated.
        const double rel1 = mean_inf ? 0.0 : r1 / std::max(1.0, static_cast<double>(m1));
        const double rel2 =
            second_inf ? 0.0 : r2 / std::max(1.0, static_cast<double>(m2));
        if (!std::isfinite(rel1) || !std::isfinite(rel2) ||
            rel1 > budget.max_relative_error || rel2 > budget.max_relative_error) {
            std::ostringstream msg;
            msg << "moment summation for " << spec.family_string() << " (d = "
                << spec.dimension << ") not resolved within "
                << budget.max_iterations << " iterations";
            throw indeterminate_moment_error(msg.str());
        }
    }

    TimeLaw law;
    law.spec = spec;
    law.truncation_index = k - 1;
    const double inf = std::numeric_limits<double>::infinity();
    law.mean = mean_inf ? inf : static_cast<double>(m1);
    law.second_moment = second_inf ? inf : static_cast<double>(m2);
    law.p_odd = std::min(1.0, static_cast<double>(podd));
    law.mean_error = mean_inf ? 0.0 : r1;
    law.second_moment_error = second_inf ? 0.0 : r2;
    law.p_odd_error = rp;
    return law;
}

std::int64_t sample_time(const ReinforcementSpec& spec, RngStream& rng) {
    return sample_time(spec, rng, CapPolicy::Strict, nullptr);
}

std::int64_t sample_time(const ReinforcementSpec& spec, RngStream& rng,
                         CapPolicy policy, std::int64_t* breaches) {
    std::int64_t l = 1;
    for (;;) {
        if (l >= spec.t_cap) {
            if (policy == CapPolicy::Censor) {
                if (breaches) ++*breaches;
                return spec.t_cap;
            }
            std::ostringstream msg;
            msg << "sampled run time reached t_cap = " << spec.t_cap;
            throw cap_exceeded_error(msg.str());
        }
        if (!rng.bernoulli(spec.continuation(l))) return l;
        ++l;
    }
}

} // namespace srw
