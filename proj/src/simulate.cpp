#include "srw/simulate.hpp"

#include <fstream>
#include <sstream>

#include "srw/timechange.hpp"

namespace srw {

namespace {

std::ofstream open_for_write(const std::string& name) {
    std::ofstream out(name, std::ios::binary | std::ios::trunc);
    if (!out) throw config_error("cannot open output file '" + name + "'");
    return out;
}

} // namespace

std::vector<std::string> write_simulation_files(const SimulateJob& job,
                                                const std::string& prefix) {
    if ((job.n_steps > 0) == (job.horizon > 0))
        throw config_error("exactly one of n_steps and horizon must be positive");
    if (job.n_paths < 1) throw config_error("n_paths must be >= 1");
    if (job.coupled && job.horizon <= 0)
        throw config_error("coupled mode needs a senile horizon");
    job.spec.validate();
    const TimeLaw law = compute_time_law(job.spec);
    validate_walk_config(job.kind, job.spec, law);

    std::vector<std::string> written;
    for (std::uint64_t p = 0; p < job.n_paths; ++p) {
        RngStream rng = RngStream::for_path(job.seed, p);
        std::ostringstream stem;
        stem << prefix << "_p" << p;
        if (job.n_steps > 0) {
            const WalkPath walk =
                generate_walk(job.kind, job.spec, job.n_steps, rng, &law);
            const std::string name = stem.str() + "_walk.csv";
            auto out = open_for_write(name);
            write_csv(walk, out);
            written.push_back(name);
        } else if (!job.coupled) {
            const SenilePath senile =
                senile_direct(job.kind, job.spec, job.horizon, rng);
            const std::string name = stem.str() + "_senile.csv";
            auto out = open_for_write(name);
            write_csv(senile, out);
            written.push_back(name);
        } else {
            const CoupledPair pair =
                coupled_pair(job.kind, job.spec, job.horizon, rng, &law);
            const SenilePath from_walk =
                senile_from_timechange(pair.walk, job.horizon);
            const std::string direct_name = stem.str() + "_senile_direct.csv";
            {
                auto out = open_for_write(direct_name);
                write_csv(pair.direct, out);
            }
            const std::string tc_name = stem.str() + "_senile_timechange.csv";
            {
                auto out = open_for_write(tc_name);
                write_csv(from_walk, out);
            }
            written.push_back(direct_name);
            written.push_back(tc_name);
        }
    }
    return written;
}

} // namespace srw
