#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "toposon/recovery.hpp"

namespace toposon {

enum class ScenarioKind { frequency, energy, recovery };

ScenarioKind parse_kind(const std::string& name);
std::string to_string(ScenarioKind kind);

/// Raised for malformed or inconsistent scenario configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Flat scenario description. Lengths are in the units of `side`; a radius
/// bound of 0 selects the scenario default.
struct ScenarioConfig {
    ScenarioKind kind = ScenarioKind::frequency;
    std::size_t seeds = 2000;
    std::uint64_t seed0 = 1;
    unsigned threads = 0; // 0: hardware concurrency

    // frequency and energy
    double lambda = 12.0;
    double side = 2.0;
    double r_min = 0.0; // 0: side / 10
    double r_max = 0.0; // 0: 2 / sqrt(pi * lambda)

    // frequency
    int resolution = 256;
    bool greedy_random_order = false;

    // energy
    double boundary_spacing = 0.5;
    double boundary_radius = 0.0; // 0: side / 3
    double shrink_factor = 0.95;
    double radius_floor = 0.0;    // 0: side / 20
    bool halt_on_first_quota = false;

    // recovery
    std::vector<double> coverage_fractions{0.2, 0.4, 0.6, 0.8};
    std::vector<Planner> planners{Planner::homology, Planner::set_cover};
    double r = 0.5;
    double sigma = 0.1;
    double grid_step = 0.0; // 0: r / 5
    std::size_t mcmc_steps = 0;
    std::size_t n_modes = 0;
    int max_doublings = 30;

    /// Throws ConfigError when a numeric field is out of range.
    void validate() const;
};

/// Defaults for `kind`: lambda 12 for frequency, 6 for energy.
ScenarioConfig default_config(ScenarioKind kind);

/// `key = value` lines; `#` starts a comment. `kind` must come first and
/// only keys that belong to that kind are accepted. List values are comma
/// separated.
ScenarioConfig parse_config(std::istream& in);
ScenarioConfig load_config(const std::filesystem::path& path);

/// A CSV cell: text or a number. NaN numbers print as empty cells.
using Value = std::variant<std::string, double>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Value>> rows;

    std::size_t column(const std::string& name) const;
    const Value& at(std::size_t row, const std::string& name) const;
    double number(std::size_t row, const std::string& name) const;
    std::string text(std::size_t row, const std::string& name) const;
};

/// Per-seed records plus the table-shaped aggregate derived from them.
struct RunReport {
    ScenarioKind kind = ScenarioKind::frequency;
    Table aggregate;
    Table records;
    std::size_t failures = 0; // records flagged as failed
};

/// Per-seed record table for one seed of the scenario. A run that throws
/// yields a record with failed = 1 and the message in `error`.
Table run_seed(const ScenarioConfig& cfg, std::uint64_t seed);

/// Runs seeds seed0 .. seed0 + seeds - 1 on a worker pool and folds the
/// records in seed order.
RunReport run_batch(const ScenarioConfig& cfg);

/// The aggregate table for `kind` computed from raw records alone.
Table aggregate(ScenarioKind kind, const Table& records);

/// RFC 4180 output; numbers use the shortest round-trip form.
void write_csv(std::ostream& out, const Table& t);

/// Inverse of write_csv: cells that parse completely as numbers become
/// doubles, empty cells become NaN, everything else stays text.
Table read_csv(std::istream& in);

/// Writes `path` (aggregate) and `<stem>_raw<ext>` (per-seed records) next
/// to it. Throws std::runtime_error when a file cannot be written.
void emit_csv(const RunReport& rep, const std::filesystem::path& path);

std::filesystem::path raw_path(const std::filesystem::path& path);

} // namespace toposon
