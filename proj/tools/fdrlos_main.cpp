// Command-line front end: single-point queries, SNR sweeps, (m, k) grids,
// approximation-error surfaces, the built-in reference-table check and a
// fast self-test.  Exit codes: 0 success, 1 usage error, 2 numeric failure,
// 3 validation mismatch.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fdrlos/cli_runner.hpp"
#include "fdrlos/mathutil.hpp"

namespace {

std::vector<double> expand_range(const std::string& s) {
    double a = 0, b = 0, step = 0;
    if (std::sscanf(s.c_str(), "%lf:%lf:%lf", &a, &b, &step) != 3 || !(step > 0))
        throw std::invalid_argument("range must be start:stop:step with step > 0, got '" + s +
                                    "'");
    std::vector<double> v;
    for (double x = a; x <= b + 1e-9 * step; x += step) v.push_back(x);
    return v;
}

int write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::fputs(text.c_str(), stdout);
        return 0;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file '" + path + "'");
    f << text;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    using fdrlos::cli::RunSpec;

    CLI::App app{"Ergodic capacity of the fluctuating double-Rayleigh with LoS fading channel"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from a key=value file (# comments)");

    RunSpec spec;
    std::string snr_range, output, format = "csv", regime = "low_ratio";
    bool with_mc = false;

    app.add_option("--k", spec.ks, "Rician factor(s) of the LoS component, k >= 0")
        ->delimiter(',');
    app.add_option("--m", spec.ms, "Shadowing parameter(s), m >= 0.5")->delimiter(',');
    app.add_option("--snr-db", spec.snr_dbs, "Average SNR value(s) in dB")->delimiter(',');
    app.add_option("--snr-range", snr_range, "Average SNR sweep start:stop:step in dB");
    app.add_option("--policy", spec.policies,
                   "Power adaptation policy: ora (constant power) and/or opra (optimal "
                   "power with cutoff)")
        ->delimiter(',');
    app.add_option("--methods", spec.methods,
                   "Evaluation methods: closed_form, closed_integer, closed_series, "
                   "quadrature, approx_low, approx_high, high_snr, monte_carlo")
        ->delimiter(',');
    app.add_option("--terms", spec.terms,
                   "Series terms for approx_high (0 selects the simplified single-sum form)")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--seed", spec.seed, "Seed for Monte-Carlo sampling");
    app.add_option("--samples", spec.samples, "Monte-Carlo sample count")
        ->check(CLI::PositiveNumber);
    app.add_option("--streams", spec.streams,
                   "Monte-Carlo worker streams (does not affect the estimate)")
        ->check(CLI::PositiveNumber);
    app.add_option("--jobs", spec.jobs, "Worker threads for sweeps and grids")
        ->check(CLI::PositiveNumber);
    app.add_option("--output", output, "Write records to this file instead of stdout");
    app.add_option("--format", format, "Record format")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_flag("--mc", with_mc, "Add a Monte-Carlo method (table1: extra checked column)");
    app.add_flag("--timings", spec.timings,
                 "Include per-record runtime_ms (output then varies between runs)");
    app.add_option("--regime", regime, "Approximation regime for the errors command")
        ->check(CLI::IsMember({"low_ratio", "high_ratio"}));
    app.add_option("--laguerre-order", spec.numerics.grid.laguerre_order,
                   "Base order of the tail quadrature rule");
    app.add_option("--contour-tol", spec.numerics.contour_tol,
                   "Relative tolerance for contour integrals");
    app.add_option("--series-tol", spec.numerics.series_tol,
                   "Stopping tolerance for series methods");
    app.add_option("--cutoff-tol", spec.numerics.cutoff_tol,
                   "Residual tolerance for the opra cutoff solve");
    app.add_option("--opra-n-max", spec.numerics.opra_n_max,
                   "Maximum series terms for opra closed_series");

    auto* cmd_point = app.add_subcommand("point", "Evaluate one (k, m, snr) cell");
    auto* cmd_sweep = app.add_subcommand("sweep", "Capacity versus average SNR");
    auto* cmd_grid =
        app.add_subcommand("grid", "Capacity over an (m, k) grid at fixed average SNR");
    auto* cmd_errors =
        app.add_subcommand("errors", "Relative error of an approximation against quadrature");
    auto* cmd_table1 =
        app.add_subcommand("table1", "Check the built-in reference table (exit 3 on mismatch)");
    auto* cmd_validate = app.add_subcommand("validate", "Fast internal consistency checks");
    for (auto* c : {cmd_point, cmd_sweep, cmd_grid, cmd_errors, cmd_table1, cmd_validate})
        c->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (!snr_range.empty()) {
            const auto r = expand_range(snr_range);
            spec.snr_dbs.insert(spec.snr_dbs.end(), r.begin(), r.end());
        }

        if (cmd_validate->parsed()) {
            std::string report;
            const int fails = fdrlos::cli::run_validate(spec.seed, report);
            std::fputs(report.c_str(), stdout);
            if (!output.empty()) write_output(output, report);
            return fails > 0 ? 3 : 0;
        }

        if (cmd_table1->parsed()) {
            std::string report;
            const int bad = fdrlos::cli::run_table1(with_mc, spec.seed, spec.samples,
                                                    spec.jobs, report);
            std::fputs(report.c_str(), stdout);
            if (!output.empty()) write_output(output, report);
            return bad > 0 ? 3 : 0;
        }

        if (cmd_errors->parsed()) {
            if (spec.ks.empty()) spec.ks = {regime == "low_ratio" ? 0.01 : 200.0};
            if (spec.ms.empty()) spec.ms = {2.0};
            if (spec.snr_dbs.empty()) spec.snr_dbs = expand_range("0:40:5");
            const auto recs = fdrlos::cli::run_errors(spec, regime);
            write_output(output, format == "json" ? fdrlos::cli::to_json(recs)
                                                  : fdrlos::cli::to_csv(recs));
            return fdrlos::cli::any_failed(recs) ? 2 : 0;
        }

        if (with_mc) spec.methods.push_back("monte_carlo");

        if (cmd_point->parsed()) {
            if (spec.ks.size() != 1 || spec.ms.size() != 1 || spec.snr_dbs.size() != 1)
                throw std::invalid_argument(
                    "point requires exactly one --k, one --m and one --snr-db value");
            fdrlos::ChannelParams p{spec.ks[0], spec.ms[0],
                                    fdrlos::db_to_linear(spec.snr_dbs[0])};
            p.validate();  // reject invalid single-point parameters as a usage error
        } else if (cmd_sweep->parsed()) {
            if (spec.ks.empty()) spec.ks = {20.0, 200.0};
            if (spec.ms.empty()) spec.ms = {2.0};
            if (spec.snr_dbs.empty()) spec.snr_dbs = expand_range("0:40:5");
        } else if (cmd_grid->parsed()) {
            if (spec.ms.empty())
                for (double m = 0.5; m <= 6.0 + 1e-9; m += 0.5) spec.ms.push_back(m);
            if (spec.ks.empty())
                for (double e = -2.0; e <= 3.0 + 1e-9; e += 0.5)
                    spec.ks.push_back(std::pow(10.0, e));
            if (spec.snr_dbs.empty()) spec.snr_dbs = {10.0};
            if (spec.snr_dbs.size() != 1)
                throw std::invalid_argument("grid runs at a single fixed --snr-db");
        }

        const auto recs = fdrlos::cli::run_cells(spec);
        write_output(output, format == "json" ? fdrlos::cli::to_json(recs, spec.timings)
                                              : fdrlos::cli::to_csv(recs, spec.timings));
        return fdrlos::cli::any_failed(recs) ? 2 : 0;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
