#pragma once

#include "ogrl/harness/run_config.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace ogrl::harness {

struct MetricRow {
    std::string run_id;
    std::string algo;
    std::string config_hash; // 16 hex digits
    std::size_t pool_episodes = 0;
    std::string regime;
    double learning_rate = 0.0;
    int width = 0;
    double gamma = 0.0;
    std::int64_t explore_duration = 0;
    std::uint64_t seed = 0;
    std::int64_t step = 0;
    double train_loss = 0.0;
    double eval_success = 0.0; // in [0, 1]
    double wall_seconds = 0.0;
    std::string status = "ok"; // "ok" or "failed: <reason>"

    bool ok() const { return status == "ok"; }
    /// Equality ignoring wall-clock time.
    bool same_outcome(const MetricRow& other) const;
};

/// Row identity and hyperparameter columns filled from a run configuration.
MetricRow row_template(const RunConfig& config);

/// Fixed CSV header, in column order.
const std::string& metrics_header();
std::string format_row(const MetricRow& row);
MetricRow parse_row(const std::string& line);

/// Reads a metrics file written by write_metrics / append_rows. Throws on a wrong header.
std::vector<MetricRow> read_metrics(const std::filesystem::path& path);
void write_metrics(const std::filesystem::path& path, const std::vector<MetricRow>& rows);
/// Appends rows, writing the header first when the file is new or empty.
void append_rows(const std::filesystem::path& path, const std::vector<MetricRow>& rows);

/// The row with the largest step for every run id, in first-appearance order.
std::vector<MetricRow> final_rows(const std::vector<MetricRow>& rows);

} // namespace ogrl::harness
