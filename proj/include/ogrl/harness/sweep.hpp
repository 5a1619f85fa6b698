#pragma once

#include "ogrl/harness/metrics.hpp"
#include "ogrl/harness/run_config.hpp"

#include <filesystem>
#include <functional>
#include <vector>

namespace ogrl::harness {

struct SweepGrid {
    std::vector<double> learning_rates{0.01, 0.001, 0.0001};
    std::vector<int> widths{32, 64};
    std::vector<double> gammas{0.9, 0.95};
    std::vector<std::int64_t> explore_durations{5000, 10000};
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9};

    void validate() const;
};

/// One configuration per grid point and seed. Every hidden layer takes the grid width.
/// The gamma axis is dropped (base gamma kept) for kinds that do not discount.
std::vector<RunConfig> expand_grid(const SweepGrid& grid, const RunConfig& base);

/// Number of runs expand_grid produces.
std::size_t grid_cardinality(const SweepGrid& grid, algo::EstimatorKind kind);

/// Produces the final metric row of one run.
using RunFn = std::function<MetricRow(const RunConfig&)>;

/// Trains the run and returns its last history row.
MetricRow train_and_report(const RunConfig& config);

struct SweepOptions {
    std::filesystem::path metrics_path;
    int workers = 1;
    RunFn runner = train_and_report;
    /// Stop after this many newly executed runs (for interruption tests); 0 = no limit.
    std::size_t max_new_runs = 0;
};

struct SweepSummary {
    std::size_t total = 0;
    std::size_t skipped = 0; // already present in the metrics file
    std::size_t executed = 0;
    std::size_t failed = 0;
};

/// Runs every configuration of the grid not yet recorded in the metrics file. Each run
/// writes a part file that is appended to the metrics file under a lock and then removed;
/// leftover part files from an interrupted sweep are merged first. The resolved config of
/// every run is saved as `<metrics>.configs/<run id>.cfg`. A run that throws is
/// recorded as a failed row and the sweep continues.
SweepSummary run_sweep(const SweepGrid& grid, const RunConfig& base, const SweepOptions& options);

} // namespace ogrl::harness
