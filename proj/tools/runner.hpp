// Orchestration of `run`, `sweep` and `table1`: jobs, derived figure data,
// artifacts and the manifest.
#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "config.hpp"
#include "su2dual/variational.hpp"

namespace su2dual::cli {

// ---- state-count certification ----

struct Table1Ladder {
    SweepMode mode = SweepMode::Ansatz;
    std::vector<int> lmax;
    std::vector<double> energy;   // NaN where the point failed
    std::vector<double> rel_err;  // |E - E_ref| / |E_ref|
    std::vector<std::string> errors;
    int lmax_needed = 0;          // smallest lmax within threshold, 0 if none
};

struct Table1Beta {
    double beta = 0.0;
    double reference = 0.0;
    OptimizationTrace reference_trace;
    std::vector<Table1Ladder> ladders;  // electric, ansatz, variational
    const Table1Ladder& ladder(SweepMode m) const;
};

// Reference: variational optimum at (R,R,R,1,1) with R = reference_lmax. Ladders
// scan (L,L,L,1,1) for L = 1..max_lmax in each mode. Throws if the reference fails.
Table1Beta table1_point(double beta, const RunConfig& c, TableCache& cache, std::ostream* log = nullptr);

// Target state counts per method: {beta, electric, ansatz, variational}.
// Negative entries mean "more than |n|".
struct Table1Target {
    double beta;
    int electric, ansatz, variational;
};
const std::vector<Table1Target>& table1_targets();

struct Table1Check {
    std::string name;
    double beta = 0.0;
    bool pass = false;
    std::string detail;
};
// The state-count claims that a run can settle, for the target betas present in `rows`.
std::vector<Table1Check> certify_table1(const std::vector<Table1Beta>& rows, double threshold);

// ---- sweep derived data ----

std::string results_csv(const std::vector<SweepPoint>& pts);
nlohmann::json results_json(const std::vector<SweepPoint>& pts);
std::string traces_jsonl(const std::vector<SweepPoint>& pts);
std::string plaquette_csv(const std::vector<SweepPoint>& pts);
// Ansatz vs variational at equal (beta, truncation), with the electric baseline when present.
std::string energy_gain_csv(const std::vector<SweepPoint>& pts);
// Consecutive truncations of the configured list, per (beta, mode): delta E and infidelity.
struct TruncationStep {
    double beta = 0.0;
    SweepMode mode = SweepMode::Ansatz;
    Truncation from{}, to{};
    double delta_e = 0.0;
    double infidelity = 0.0;
};
std::vector<TruncationStep> truncation_steps(const std::vector<SweepPoint>& pts, const std::vector<Truncation>& order,
                                             TableCache& cache);
std::string truncation_csv(const std::vector<TruncationStep>& steps);
std::string couplings_csv(const std::vector<SweepPoint>& pts);

// ---- running ----

struct RunOutcome {
    int exit_code = kExitOk;
    std::vector<std::filesystem::path> outputs;
    std::vector<std::string> failures;
};

std::string job_plan(const RunConfig& c);
// Computes, writes every artifact into c.output_dir and finishes with manifest.json.
RunOutcome execute(const RunConfig& c, std::ostream& log);

std::string version_string();

}  // namespace su2dual::cli
