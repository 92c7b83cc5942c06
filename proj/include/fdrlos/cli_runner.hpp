#pragma once

// Batch evaluation layer behind the command-line tool.  Expands parameter
// axes into cells, evaluates every requested (policy, method) combination,
// and serializes records as CSV or JSON.  Cells are dispatched to a worker
// pool; the record layout is fixed up front, so output bytes do not depend
// on the job count.

#include <cstdint>
#include <string>
#include <vector>

#include "fdrlos/capacity.hpp"

namespace fdrlos::cli {

struct RunSpec {
    std::vector<double> ks;
    std::vector<double> ms;
    std::vector<double> snr_dbs;
    std::vector<std::string> policies{"ora"};
    std::vector<std::string> methods{"closed_form"};
    int terms = 1;              // series terms for approx_high (0 = simplified form)
    std::uint64_t seed = 1;
    long long samples = 1000000;
    int streams = 1;            // Monte-Carlo worker streams (result-invariant)
    int jobs = 1;
    bool timings = false;       // emit runtime_ms (output then varies run to run)
    NumericsConfig numerics{};
};

struct CellRecord {
    double k = 0.0;
    double m = 0.0;
    double snr_db = 0.0;
    std::string policy;
    std::string method;
    bool ok = false;
    double value = 0.0;    // capacity, bit/s/Hz
    double err_est = 0.0;
    double runtime_ms = 0.0;
    std::string note;      // diagnostics on success, error message on failure
};

// Relative deviation of one approximation from the quadrature baseline.
struct ErrorRecord {
    double snr_db = 0.0;
    double k = 0.0;
    double m = 0.0;
    double delta = 0.0;
    bool ok = false;
    std::string note;
};

bool known_policy(const std::string& tag);
bool known_method(const std::string& tag);

// Evaluates methods x policies over the cross product of the axes.  Records
// come back sorted by (k, m, snr_db, policy, method); failed cells carry
// ok=false and a note instead of aborting the run.
std::vector<CellRecord> run_cells(const RunSpec& spec);

// regime is "low_ratio" or "high_ratio"; delta compares the corresponding
// approximation against quadrature at each cell.
std::vector<ErrorRecord> run_errors(const RunSpec& spec, const std::string& regime);

bool any_failed(const std::vector<CellRecord>& recs);
bool any_failed(const std::vector<ErrorRecord>& recs);

std::string to_csv(const std::vector<CellRecord>& recs, bool timings = false);
std::string to_json(const std::vector<CellRecord>& recs, bool timings = false);
std::string to_csv(const std::vector<ErrorRecord>& recs);
std::string to_json(const std::vector<ErrorRecord>& recs);

// Built-in regression over the reference table (m=2, k in {20, 200},
// 0..40 dB): closed form, quadrature and the simplified high-ratio
// approximation against stored reference values, +-0.01 each.  Appends a
// human-readable report; returns the number of mismatched comparisons.
int run_table1(bool with_mc, std::uint64_t seed, long long samples, int jobs,
               std::string& report);

// Fast internal consistency checks (identities, normalization, method
// agreement, determinism).  Returns the number of failed checks.
int run_validate(std::uint64_t seed, std::string& report);

}  // namespace fdrlos::cli
