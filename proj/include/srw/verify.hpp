#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace srw {

struct CheckLine {
    std::string label;
    bool pass = false;
    std::string detail;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = true;
    std::vector<CheckLine> checks;

    void add(CheckLine line) {
        pass = pass && line.pass;
        checks.push_back(std::move(line));
    }
};

struct VerifyOptions {
    std::uint64_t seed = 1;
    int workers = 0;
    bool quick = false;
    // != 1 deliberately mis-corrects the martingale transforms across the
    // suite; the martingale criterion is then expected to fail.
    double coefficient_scale = 1.0;
    // The reproducibility criterion re-runs a reduced suite twice; disabled
    // inside those nested runs.
    bool include_reproducibility = true;
    std::string scratch_dir; // empty: system temp directory
    // Time grid of the Brownian-limit diagnostics. The default is the pinned
    // acceptance grid; other grids are exploratory.
    std::vector<double> clt_t_grid = {0.5, 1.0};
};

// Runs the acceptance criteria at the configured scale, returning one result
// per criterion with per-check detail lines.
std::vector<CriterionResult> run_acceptance(const VerifyOptions& options);

nlohmann::ordered_json to_json(const std::vector<CriterionResult>& results);

// One PASS/FAIL line per criterion (plus failing checks); returns the number
// of failed criteria.
int print_results(const std::vector<CriterionResult>& results, std::ostream& out);

} // namespace srw
