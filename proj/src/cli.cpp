#include "srw/cli.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "srw/simulate.hpp"
#include "srw/stats.hpp"
#include "srw/verify.hpp"

namespace srw {

namespace {

struct CliConfig {
    std::string model = "persistent";
    int dim = 1;
    std::string f_spec = "const:0";
    std::uint64_t paths = 1;
    std::int64_t steps = 0;
    std::int64_t horizon = 0;
    std::uint64_t seed = 1;
    std::string tgrid = "0.5,1.0";
    std::string out_path;
    std::string format = "json";
    int workers = 0;
    std::int64_t tcap = 10'000'000;
    std::string suite = "full";
    bool coupled = false;
    bool sabotage = false;
};

WalkKind parse_model(const std::string& model) {
    if (model == "persistent") return WalkKind::Persistent;
    if (model == "reinforced") return WalkKind::Reinforced;
    throw config_error("--model must be persistent or reinforced");
}

std::vector<double> parse_tgrid(const std::string& text) {
    std::vector<double> grid;
    std::stringstream in(text);
    std::string token;
    while (std::getline(in, token, ',')) {
        try {
            grid.push_back(std::stod(token));
        } catch (const std::exception&) {
            throw config_error("cannot parse --tgrid entry '" + token + "'");
        }
    }
    if (grid.empty()) throw config_error("--tgrid is empty");
    return grid;
}

nlohmann::ordered_json finite_or_inf(double v) {
    if (std::isinf(v)) return "inf";
    return v;
}

void emit(const nlohmann::ordered_json& doc, const std::string& path,
          std::ostream& fallback) {
    if (path.empty()) {
        fallback << doc.dump(2) << '\n';
        return;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw config_error("cannot open output file '" + path + "'");
    file << doc.dump(2) << '\n';
}

int run_moments(const CliConfig& cfg, std::ostream& out) {
    const auto spec = ReinforcementSpec::parse(cfg.dim, cfg.f_spec, cfg.tcap);
    const TimeLaw law = compute_time_law(spec);

    nlohmann::ordered_json doc;
    doc["family"] = cfg.f_spec;
    doc["dimension"] = spec.dimension;
    doc["t_cap"] = spec.t_cap;
    doc["mean"] = finite_or_inf(law.mean);
    doc["second_moment"] = finite_or_inf(law.second_moment);
    doc["p_odd"] = law.p_odd;
    doc["truncation_index"] = law.truncation_index;
    doc["persistent_regime"] = law.second_moment_finite()
                                   ? "diffusive"
                                   : "non-diffusive (E(T^2) = inf)";
    if (spec.dimension == 1 && law.p_odd + law.p_odd_error >= 1.0)
        doc["reinforced_regime"] = "excluded (d = 1, p = 1)";
    else if (law.mean_finite())
        doc["reinforced_regime"] = "diffusive";
    else
        doc["reinforced_regime"] = "subdiffusive (E(T) = inf)";
    if (law.second_moment_finite()) {
        const TimeLaw law_copy = law;
        doc["persistent_C"] =
            diffusion_constant(WalkKind::Persistent, spec.dimension, law_copy);
    }
    if (!(spec.dimension == 1 && law.p_odd + law.p_odd_error >= 1.0))
        doc["reinforced_C"] =
            diffusion_constant(WalkKind::Reinforced, spec.dimension, law);
    emit(doc, cfg.out_path, out);
    return 0;
}

int run_simulate(const CliConfig& cfg, std::ostream& err) {
    if (cfg.out_path.empty())
        throw config_error("simulate needs --out as an output file prefix");
    SimulateJob job;
    job.kind = parse_model(cfg.model);
    job.spec = ReinforcementSpec::parse(cfg.dim, cfg.f_spec, cfg.tcap);
    job.seed = cfg.seed;
    job.n_paths = cfg.paths;
    job.n_steps = cfg.steps;
    job.horizon = cfg.horizon;
    job.coupled = cfg.coupled;
    const auto files = write_simulation_files(job, cfg.out_path);
    err << "wrote " << files.size() << " file(s) under prefix " << cfg.out_path
        << '\n';
    return 0;
}

int run_verify(const CliConfig& cfg, std::ostream& out) {
    VerifyOptions options;
    options.seed = cfg.seed;
    options.workers = cfg.workers;
    if (cfg.suite == "quick")
        options.quick = true;
    else if (cfg.suite != "full")
        throw config_error("--suite must be full or quick");
    options.coefficient_scale = cfg.sabotage ? 0.5 : 1.0;
    options.clt_t_grid = parse_tgrid(cfg.tgrid);

    const auto results = run_acceptance(options);
    const int failures = print_results(results, out);
    if (!cfg.out_path.empty()) {
        if (cfg.format == "json") {
            emit(to_json(results), cfg.out_path, out);
        } else if (cfg.format == "csv") {
            std::ofstream file(cfg.out_path, std::ios::binary | std::ios::trunc);
            if (!file)
                throw config_error("cannot open output file '" + cfg.out_path + "'");
            file << "criterion,pass,label,detail\n";
            for (const CriterionResult& r : results)
                for (const CheckLine& c : r.checks)
                    file << r.id << ',' << (c.pass ? 1 : 0) << ',' << c.label << ",\""
                         << c.detail << "\"\n";
        } else {
            throw config_error("--format must be json or csv");
        }
    }
    return failures == 0 ? 0 : 1;
}

} // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err) {
    CLI::App app{"senile random walk simulation and verification laboratory"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "configuration file (INI sections per subcommand); "
                   "command-line flags override file values");

    CliConfig cfg;

    CLI::App* moments =
        app.add_subcommand("moments", "run-time law moments and regime report");
    moments->add_option("--dim", cfg.dim, "lattice dimension d")->check(CLI::PositiveNumber);
    moments->add_option("--f", cfg.f_spec, "reinforcement family: const:c | affine:a,b | table:path");
    moments->add_option("--tcap", cfg.tcap, "hard cap on sampled run times");
    moments->add_option("--out", cfg.out_path, "write the JSON report here instead of stdout");

    CLI::App* simulate =
        app.add_subcommand("simulate", "write walk or senile path CSV files");
    simulate->add_option("--model", cfg.model, "persistent | reinforced")
        ->check(CLI::IsMember({"persistent", "reinforced"}));
    simulate->add_option("--dim", cfg.dim, "lattice dimension d")->check(CLI::PositiveNumber);
    simulate->add_option("--f", cfg.f_spec, "reinforcement family");
    simulate->add_option("--paths", cfg.paths, "number of independent paths");
    simulate->add_option("--steps", cfg.steps, "macro steps of the time-changed walk");
    simulate->add_option("--horizon", cfg.horizon, "unit-time horizon of the senile walk");
    simulate->add_option("--seed", cfg.seed, "master seed");
    simulate->add_option("--tcap", cfg.tcap, "hard cap on sampled run times");
    simulate->add_flag("--coupled", cfg.coupled,
                       "with --horizon: write both senile constructions from one draw");
    simulate->add_option("--out", cfg.out_path, "output file prefix")->required();

    CLI::App* verify =
        app.add_subcommand("verify", "run the statistical acceptance suite");
    verify->add_option("--seed", cfg.seed, "master seed");
    verify->add_option("--workers", cfg.workers, "worker threads (0: hardware)");
    verify->add_option("--suite", cfg.suite, "full | quick")
        ->check(CLI::IsMember({"full", "quick"}));
    verify->add_option("--tgrid", cfg.tgrid,
                       "time grid for the Brownian-limit diagnostics");
    verify->add_flag("--sabotage", cfg.sabotage,
                     "halve the martingale correction coefficient (power self-check; "
                     "the suite is then expected to fail)");
    verify->add_option("--out", cfg.out_path, "write the report here as well");
    verify->add_option("--format", cfg.format, "report file format: json | csv")
        ->check(CLI::IsMember({"json", "csv"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (moments->parsed()) return run_moments(cfg, out);
        if (simulate->parsed()) return run_simulate(cfg, err);
        if (verify->parsed()) return run_verify(cfg, out);
        return 2;
    } catch (const config_error& e) {
        err << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const validation_error& e) {
        err << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const regime_error& e) {
        err << "regime error: " << e.what() << '\n';
        return 3;
    } catch (const cap_exceeded_error& e) {
        err << "numeric error: " << e.what() << '\n';
        return 3;
    } catch (const indeterminate_moment_error& e) {
        err << "numeric error: " << e.what() << '\n';
        return 3;
    } catch (const std::out_of_range& e) {
        err << "numeric error: " << e.what() << '\n';
        return 3;
    }
}

} // namespace srw
