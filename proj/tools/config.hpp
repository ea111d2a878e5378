// Run configuration: TOML schema, validation with line numbers, flag overrides.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "su2dual/variational.hpp"

namespace su2dual::cli {

inline constexpr int kSchemaVersion = 1;

// Exit statuses of every subcommand.
enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitNumerical = 2, kExitPartial = 3 };

// "<source>:<line>: <message>"; line 0 when no position applies.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& source, int line, const std::string& message);
    int line() const { return line_; }

private:
    int line_;
};

enum class Task { Sweep, Table1 };
const char* task_name(Task t);

struct RunConfig {
    int schema = kSchemaVersion;
    Task task = Task::Sweep;

    // [beta]
    double beta_min = 0.01;
    double beta_max = 100.0;
    int beta_points = 24;
    bool log_spacing = true;
    std::vector<double> beta_values;  // replaces the range when set

    // [sweep]
    std::vector<SweepMode> modes{SweepMode::Ansatz, SweepMode::Variational, SweepMode::ElectricBaseline};
    std::vector<Truncation> truncations{{1, 1, 1, 1, 1}, {4, 4, 4, 1, 1}, {5, 5, 5, 1, 1}};

    // [table1]
    std::vector<double> table1_betas{0.01, 1.0, 100.0};
    int reference_lmax = 6;
    int max_lmax = 6;
    double threshold = 0.01;

    OptimizerOptions optimizer;
    SolverOptions solver;
    RadialOptions radial;
    TableOptions table;

    std::uint64_t seed = 0;
    int workers = 1;
    std::string output_dir = "out";
    std::string cache_dir;
    bool svg = true;

    std::vector<double> betas() const;
    // Throws ConfigError (line 0) for out-of-range values.
    void validate(const std::string& source = "config") const;
};

RunConfig default_config(Task task);
// Parses and validates; unknown keys are errors.
RunConfig parse_config(const std::string& text, const std::string& source);
RunConfig load_config(const std::string& path);

// Command-line values; set fields win over the file. The cache directory
// resolves as flag, then SU2DUAL_CACHE_DIR, then the file.
struct Overrides {
    std::optional<std::string> output_dir;
    std::optional<std::string> cache_dir;
    std::optional<int> workers;
    std::optional<std::uint64_t> seed;
    std::optional<bool> svg;
    std::optional<int> beta_points;
    std::optional<double> beta_min, beta_max;
    std::optional<std::vector<SweepMode>> modes;
    std::optional<std::vector<Truncation>> truncations;
    std::optional<int> max_lmax;
};
void apply_overrides(RunConfig& c, const Overrides& o);

// Parses "1,4,5" (each L as (L,L,L,1,1)) or "4x4x4x1x1;5x5x5x1x1".
std::vector<Truncation> parse_truncation_list(const std::string& s);
std::vector<SweepMode> parse_mode_list(const std::string& s);
std::string truncation_label(const Truncation& t);

// Every field that can change a numerical result.
nlohmann::json physics_json(const RunConfig& c);
// physics_json plus output, workers and cache settings.
nlohmann::json config_json(const RunConfig& c);

}  // namespace su2dual::cli
