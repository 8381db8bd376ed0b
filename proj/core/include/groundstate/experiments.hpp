#pragma once

// Sweep orchestration behind the command-line driver: each command turns a
// RunConfig into tables of results plus a list of named checks, and
// write_report emits them as CSV files with JSON metadata sidecars.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "groundstate/flows.hpp"

namespace groundstate {

enum class Command { SweepMax, Profiles, SlopeCheck, Critical, EpsilonCurve, Crossing, Validate, OracleCompare };

std::string_view command_name(Command command) noexcept;
std::optional<Command> parse_command(std::string_view name);
std::vector<Command> all_commands();

struct SigmaRange {
    double lo;
    double hi;
    int count;
};

/// Parses "lo:hi:n" (n evenly spaced values, endpoints included).
/// Throws InvalidConfiguration on malformed input.
SigmaRange parse_sigma_range(std::string_view text);

struct RunConfig {
    Command command = Command::Validate;
    /// Empty means the command's default dimensions.
    std::vector<int> dims;
    /// Explicit powers; takes precedence over sigma_range. Both empty means
    /// the command's default sampling.
    std::vector<double> sigmas;
    std::optional<SigmaRange> sigma_range;

    // Overrides of the per-command flow defaults.
    std::optional<double> R;
    std::optional<int> M;
    std::optional<double> tau;
    std::optional<double> tol;
    std::optional<long> max_iter;

    std::filesystem::path out_dir = ".";
    int threads = 1;

    /// Throws InvalidConfiguration on an unusable setting and DomainError when
    /// a requested power lies outside (0, sigma*(d)).
    void validate() const;

    /// sigmas, or the expanded sigma_range, or empty.
    std::vector<double> requested_sigmas() const;

    /// `defaults` with the explicit overrides applied.
    FlowConfig flow_config(FlowConfig defaults) const;
};

/// Outcome of one (d, sigma) point. Failed points carry `error` and no values.
struct RunRecord {
    int d = 0;
    double sigma = 0.0;
    std::map<std::string, double> values;
    long iterations = 0;
    double wall_seconds = 0.0;
    std::optional<std::string> error;
};

/// Empty cell, integer, real or text.
using Cell = std::variant<std::monostate, long long, double, std::string>;

struct Table {
    /// File stem suffix; empty for the command's main table.
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

struct Check {
    std::string name;
    bool passed = false;
    /// Reported-only checks do not affect the exit status.
    bool enforced = true;
    double measured = 0.0;
    double reference = 0.0;
    std::string detail;
};

struct ExperimentReport {
    Command command = Command::Validate;
    std::vector<Table> tables;
    std::vector<RunRecord> records;
    std::vector<Check> checks;

    bool has_solver_failures() const;
    bool has_failed_checks() const;
};

/// Runs one command. Per-point solver failures become error records; invalid
/// configuration throws.
ExperimentReport run_experiment(const RunConfig& config);

/// Formats a real with 17 significant digits in scientific notation.
std::string format_real(double value);

/// RFC 4180 CSV with a header row.
std::string to_csv(const Table& table);

/// Writes <command>[-<table>].csv and a matching .json sidecar per table into
/// config.out_dir (created when missing). Returns the written paths.
std::vector<std::filesystem::path> write_report(const ExperimentReport& report, const RunConfig& config,
                                                std::string_view started_at, std::string_view finished_at);

/// Current UTC time as ISO-8601 (YYYY-MM-DDTHH:MM:SSZ).
std::string iso8601_now();

const char* library_version() noexcept;

}  // namespace groundstate
