#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gf/agents.hpp"
#include "gf/config.hpp"
#include "gf/metrics.hpp"
#include "gf/session.hpp"
#include "gf/stats.hpp"

namespace gf {

struct ExperimentMatrix {
    GameConfig base_config;  // condition is overridden per cell
    std::vector<Condition> conditions{Condition::Certain, Condition::Uncertain};
    std::vector<AgentProfile> profiles;
    std::vector<std::uint64_t> seeds;  // shared by every cell
    SessionOptions session;
    std::size_t resamples = 10000;
    double level = 0.95;
    std::uint64_t bootstrap_seed = 0;
    ExertionModelParams exertion;
};

std::vector<std::uint64_t> seeds_from_master(std::uint64_t master, std::size_t n);

// {"conditions": [...], "profiles": [name | profile object], "seeds": [...]}
// or {"n": N, "master_seed": S} in place of "seeds"; optional "with_training",
// "time_cap", "resamples", "level", "config". Throws "invalid-config".
ExperimentMatrix matrix_from_json(const Json& j, const GameConfig& base = {});

struct CellResult {
    Condition condition = Condition::Uncertain;
    std::string profile;
    std::vector<Metrics> sessions;  // in seed order
};

// Runs every (condition, profile, seed) session. Output does not depend on jobs.
// Throws "insufficient-samples" for fewer than two seeds; session errors are
// rethrown with the cell coordinates prepended.
std::vector<CellResult> run_cells(const ExperimentMatrix& matrix, unsigned jobs = 1);

enum class RowKind : std::uint8_t { Cell, Difference };
std::string_view to_string(RowKind k) noexcept;
RowKind parse_row_kind(std::string_view s);

inline constexpr std::string_view kDifferenceLabel = "uncertain-certain";

struct SummaryRow {
    RowKind kind = RowKind::Cell;
    std::string condition;  // condition name, or kDifferenceLabel
    std::string profile;
    std::string metric;
    std::int64_t n = 0;  // sessions where the metric is defined (difference: smaller side)
    double mean = 0.0;
    double sd = 0.0;  // sample SD; difference rows carry the standard error of the difference
    std::optional<ConfidenceInterval> ci;
    bool operator==(const SummaryRow&) const = default;
};

struct SummaryTable {
    std::vector<SummaryRow> rows;

    const SummaryRow* find(RowKind kind, std::string_view condition, std::string_view profile,
                           std::string_view metric) const;
    const SummaryRow* difference(std::string_view profile, std::string_view metric) const {
        return find(RowKind::Difference, kDifferenceLabel, profile, metric);
    }
    bool operator==(const SummaryTable&) const = default;
};

SummaryTable summarize(const ExperimentMatrix& matrix, const std::vector<CellResult>& cells);
SummaryTable run_experiment(const ExperimentMatrix& matrix, unsigned jobs = 1);

enum class TableFormat : std::uint8_t { Csv, Jsonl };
TableFormat parse_table_format(std::string_view s);

std::string to_csv(const SummaryTable& t);
std::string to_jsonl(const SummaryTable& t);
SummaryTable table_from_csv(std::string_view text);    // "malformed-table"
SummaryTable table_from_jsonl(std::string_view text);  // "malformed-table"

void export_table(const SummaryTable& t, TableFormat format, const std::filesystem::path& path);  // "io-failure"
SummaryTable import_table(const std::filesystem::path& path, TableFormat format);

} // namespace gf
