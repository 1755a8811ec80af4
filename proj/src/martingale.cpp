#include "srw/martingale.hpp"

#include <cmath>
#include <sstream>

namespace srw {

namespace {

double pow_int(double base, std::int64_t n) {
    double result = 1.0;
    double b = base;
    for (std::int64_t e = n; e > 0; e >>= 1) {
        if (e & 1) result *= b;
        b *= b;
    }
    return result;
}

} // namespace

WalkConstants make_constants(WalkKind kind, int d, const TimeLaw& law) {
    WalkConstants c;
    c.kind = kind;
    c.dimension = d;
    if (kind == WalkKind::Persistent) {
        if (!law.second_moment_finite())
            throw regime_error("persistent diffusion constant requires E(T^2) < "
                               "infinity, violated by " +
                               law.spec.family_string());
        c.mean_time = law.mean;
        c.second_moment_time = law.second_moment;
        c.diffusion_constant =
            (d * law.second_moment - law.mean * law.mean) / d;
        c.correction_coefficient = law.mean / (2.0 * d);
    } else {
        const double p = law.p_odd;
        if (d == 1 && law.p_odd + law.p_odd_error >= 1.0)
            throw regime_error("reinforced diffusion constant requires p < 1 "
                               "when d = 1, violated by " +
                               law.spec.family_string());
        c.p_odd = p;
        c.diffusion_constant = d * p / (d - p);
        c.correction_coefficient = p / (2.0 * (d - p));
    }
    return c;
}

double diffusion_constant(WalkKind kind, int d, const TimeLaw& law) {
    return make_constants(kind, d, law).diffusion_constant;
}

double exact_second_moment(WalkKind kind, int d, const TimeLaw& law,
                           std::int64_t n) {
    if (n < 1) throw config_error("exact_second_moment requires n >= 1");
    const WalkConstants c = make_constants(kind, d, law);
    const double dd = d;
    if (kind == WalkKind::Persistent) {
        const double ratio = -1.0 / (2.0 * dd - 1.0);
        const double bracket = pow_int(ratio, n) - 1.0;
        return n * c.second_moment_time -
               c.mean_time * c.mean_time *
                   (n / dd + (2.0 * dd - 1.0) / (2.0 * dd * dd) * bracket);
    }
    const double p = c.p_odd;
    const double ratio = (2.0 * p - 1.0) / (2.0 * dd - 1.0);
    const double bracket = pow_int(ratio, n) - 1.0;
    return n * dd * p / (dd - p) +
           p * p * (2.0 * dd - 1.0) / (2.0 * (dd - p) * (dd - p)) * bracket;
}

MartingalePath to_martingale(const WalkPath& path, const WalkConstants& constants) {
    if (path.kind != constants.kind)
        throw config_error("walk kind does not match the constants kind");
    if (path.dimension != constants.dimension)
        throw config_error("walk dimension does not match the constants dimension");

    const int d = path.dimension;
    const double coeff = constants.correction_coefficient;
    MartingalePath out;
    out.dimension = d;
    out.values.resize(path.num_steps() * static_cast<std::size_t>(d));
    out.compensated_qv.resize(path.num_steps());
    for (std::size_t n = 1; n <= path.num_steps(); ++n) {
        const WalkStep& s = path.steps[n - 1];
        const auto w = path.position(n);
        double* m = out.values.data() + (n - 1) * static_cast<std::size_t>(d);
        for (int i = 0; i < d; ++i) m[i] = static_cast<double>(w[i]);
        if (constants.kind == WalkKind::Persistent) {
            m[s.dir.axis()] -= coeff * s.dir.sign();
        } else {
            m[s.dir.axis()] +=
                coeff * s.dir.sign() * (2.0 * static_cast<double>(s.length) - 1.0);
        }
        double norm2 = 0.0;
        for (int i = 0; i < d; ++i) norm2 += m[i] * m[i];
        out.compensated_qv[n - 1] =
            norm2 - static_cast<double>(n) * constants.diffusion_constant;
    }
    return out;
}

nlohmann::ordered_json exact_curve_json(const WalkConstants& constants,
                                        const TimeLaw& law,
                                        std::span<const std::int64_t> n_list) {
    nlohmann::ordered_json records = nlohmann::ordered_json::array();
    for (const std::int64_t n : n_list) {
        nlohmann::ordered_json rec;
        rec["kind"] = to_string(constants.kind);
        rec["d"] = constants.dimension;
        rec["C"] = constants.diffusion_constant;
        rec["correction"] = constants.correction_coefficient;
        rec["n"] = n;
        rec["exact_msd"] =
            exact_second_moment(constants.kind, constants.dimension, law, n);
        records.push_back(std::move(rec));
    }
    return records;
}

} // namespace srw
