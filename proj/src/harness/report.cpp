#include "ogrl/harness/report.hpp"

#include "ogrl/core/kv_config.hpp"
#include "ogrl/harness/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

namespace ogrl::harness {

double quantile_sorted(const std::vector<double>& a, double q)
{
    if (a.empty())
        throw std::invalid_argument("quantile of an empty sample");
    const double pos = q * static_cast<double>(a.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, a.size() - 1);
    return a[lo] + (pos - static_cast<double>(lo)) * (a[hi] - a[lo]);
}

std::vector<StabilityCurve> stability_report(const std::vector<MetricRow>& rows)
{
    std::vector<StabilityCurve> curves;
    std::map<std::string, std::size_t> index;
    for (const auto& r : final_rows(rows)) {
        if (!r.ok())
            continue;
        auto it = index.find(r.algo);
        if (it == index.end()) {
            it = index.emplace(r.algo, curves.size()).first;
            curves.push_back({r.algo, {}, 0, 0, 0});
        }
        curves[it->second].success.push_back(r.eval_success);
    }
    if (curves.empty())
        throw std::invalid_argument("stability report needs at least one successful run");
    for (auto& c : curves) {
        std::vector<double> asc = c.success;
        std::sort(asc.begin(), asc.end());
        c.median = quantile_sorted(asc, 0.5);
        c.q1 = quantile_sorted(asc, 0.25);
        c.q3 = quantile_sorted(asc, 0.75);
        c.success.assign(asc.rbegin(), asc.rend());
    }
    return curves;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    return out;
}

} // namespace

void write_stability_report(const std::vector<StabilityCurve>& curves, const std::filesystem::path& out_dir)
{
    auto csv = open_out(out_dir / "stability.csv");
    csv << "algo,rank,success\n";
    for (const auto& c : curves)
        for (std::size_t i = 0; i < c.success.size(); ++i)
            csv << c.algo << ',' << i + 1 << ',' << format_double(c.success[i]) << '\n';
    auto summary = open_out(out_dir / "stability_summary.csv");
    summary << "algo,runs,median,q1,q3,iqr\n";
    for (const auto& c : curves)
        summary << c.algo << ',' << c.success.size() << ',' << format_double(c.median) << ',' << format_double(c.q1)
                << ',' << format_double(c.q3) << ',' << format_double(c.iqr()) << '\n';
    std::vector<LineSeries> series;
    for (const auto& c : curves)
        series.push_back({c.algo, c.success});
    open_out(out_dir / "stability.svg") << line_chart_svg("Final held-out success, sorted", "run rank",
                                                         "success rate", series);
}

std::vector<BarCell> barplot_report(const std::vector<MetricRow>& rows)
{
    if (rows.empty())
        throw std::invalid_argument("bar report needs at least one metrics row");
    std::vector<std::string> algos, regimes;
    std::set<std::size_t> pools;
    std::map<std::tuple<std::string, std::size_t, std::string>, std::vector<double>> groups;
    auto remember = [](std::vector<std::string>& seen, const std::string& v) {
        if (std::find(seen.begin(), seen.end(), v) == seen.end())
            seen.push_back(v);
    };
    for (const auto& r : final_rows(rows)) {
        remember(algos, r.algo);
        remember(regimes, r.regime);
        pools.insert(r.pool_episodes);
        if (r.ok())
            groups[{r.algo, r.pool_episodes, r.regime}].push_back(r.eval_success);
    }
    std::vector<BarCell> cells;
    for (const auto& algo : algos)
        for (auto pool : pools)
            for (const auto& regime : regimes) {
                BarCell cell{algo, pool, regime, 0, 0.0, std::nullopt};
                const auto it = groups.find({algo, pool, regime});
                if (it != groups.end()) {
                    const auto& v = it->second;
                    cell.n = v.size();
                    double sum = 0.0;
                    for (double x : v)
                        sum += x;
                    cell.mean = sum / static_cast<double>(v.size());
                    if (v.size() >= 2) {
                        double ss = 0.0;
                        for (double x : v)
                            ss += (x - cell.mean) * (x - cell.mean);
                        cell.stddev = std::sqrt(ss / static_cast<double>(v.size() - 1));
                    }
                }
                cells.push_back(cell);
            }
    return cells;
}

void write_barplot_report(const std::vector<BarCell>& cells, const std::filesystem::path& out_dir)
{
    auto csv = open_out(out_dir / "bars.csv");
    csv << "algo,pool_episodes,regime,n,mean,std\n";
    for (const auto& c : cells)
        csv << c.algo << ',' << c.pool_episodes << ',' << c.regime << ',' << c.n << ','
            << (c.n ? format_double(c.mean) : "NA") << ',' << (c.stddev ? format_double(*c.stddev) : "NA") << '\n';

    std::vector<std::string> algos;
    std::vector<BarGroup> groups;
    std::map<std::pair<std::size_t, std::string>, std::size_t> group_index;
    for (const auto& c : cells)
        if (std::find(algos.begin(), algos.end(), c.algo) == algos.end())
            algos.push_back(c.algo);
    for (const auto& c : cells) {
        const auto key = std::make_pair(c.pool_episodes, c.regime);
        auto it = group_index.find(key);
        if (it == group_index.end()) {
            it = group_index.emplace(key, groups.size()).first;
            groups.push_back({std::to_string(c.pool_episodes) + " " + c.regime,
                              std::vector<std::optional<double>>(algos.size()),
                              std::vector<std::optional<double>>(algos.size())});
        }
        const auto k = static_cast<std::size_t>(std::find(algos.begin(), algos.end(), c.algo) - algos.begin());
        if (c.n) {
            groups[it->second].values[k] = c.mean;
            groups[it->second].errors[k] = c.stddev;
        }
    }
    open_out(out_dir / "bars.svg") << grouped_bar_svg("Held-out success by pool size and regime", algos, groups);
}

} // namespace ogrl::harness
