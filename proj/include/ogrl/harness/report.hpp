#pragma once

#include "ogrl/harness/metrics.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ogrl::harness {

struct StabilityCurve {
    std::string algo;
    std::vector<double> success; // final success of every run, sorted descending
    double median = 0.0;
    double q1 = 0.0; // 25th percentile
    double q3 = 0.0; // 75th percentile

    double iqr() const { return q3 - q1; }
};

/// Linear-interpolation quantile of an ascending-sorted sample, q in [0, 1].
double quantile_sorted(const std::vector<double>& ascending, double q);

/// One curve per algorithm over the final rows of successful runs, in order of first appearance.
/// Throws std::invalid_argument when no successful run is present.
std::vector<StabilityCurve> stability_report(const std::vector<MetricRow>& rows);

/// Writes stability.csv (algo, rank, success), stability_summary.csv and stability.svg.
void write_stability_report(const std::vector<StabilityCurve>& curves, const std::filesystem::path& out_dir);

struct BarCell {
    std::string algo;
    std::size_t pool_episodes = 0;
    std::string regime;
    std::size_t n = 0; // seeds aggregated; 0 marks a missing cell
    double mean = 0.0;
    std::optional<double> stddev; // sample standard deviation; absent for fewer than 2 seeds
};

/// Mean and standard deviation of final success per (algo, pool size, regime) over seeds.
/// Every combination of the algorithms, pool sizes and regimes seen is reported; cells
/// without runs come back with n = 0. Throws std::invalid_argument on empty input.
std::vector<BarCell> barplot_report(const std::vector<MetricRow>& rows);

/// Writes bars.csv (algo, pool_episodes, regime, n, mean, std; "NA" for absent values) and bars.svg.
void write_barplot_report(const std::vector<BarCell>& cells, const std::filesystem::path& out_dir);

} // namespace ogrl::harness
