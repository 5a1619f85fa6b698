#include "ogrl/harness/sweep.hpp"

#include "ogrl/harness/training.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

namespace ogrl::harness {

void SweepGrid::validate() const
{
    if (learning_rates.empty() || widths.empty() || gammas.empty() || explore_durations.empty() || seeds.empty())
        throw std::invalid_argument("every sweep axis needs at least one value");
}

std::vector<RunConfig> expand_grid(const SweepGrid& grid, const RunConfig& base)
{
    grid.validate();
    const std::vector<double> gammas = algo::uses_gamma(base.algo) ? grid.gammas : std::vector<double>{base.hyper.gamma};
    std::vector<RunConfig> out;
    for (double lr : grid.learning_rates)
        for (int width : grid.widths)
            for (double gamma : gammas)
                for (auto duration : grid.explore_durations)
                    for (auto seed : grid.seeds) {
                        RunConfig c = base;
                        c.hyper.optimizer.learning_rate = lr;
                        for (auto& h : c.hyper.hidden)
                            h = width;
                        c.hyper.gamma = gamma;
                        c.exploration.duration_steps = duration;
                        c.seed = seed;
                        out.push_back(std::move(c));
                    }
    return out;
}

std::size_t grid_cardinality(const SweepGrid& grid, algo::EstimatorKind kind)
{
    const std::size_t gammas = algo::uses_gamma(kind) ? grid.gammas.size() : 1;
    return grid.learning_rates.size() * grid.widths.size() * gammas * grid.explore_durations.size() *
           grid.seeds.size();
}

MetricRow train_and_report(const RunConfig& config)
{
    auto result = run_training(config);
    if (result.history.empty())
        throw std::runtime_error("run produced no metrics");
    return result.history.back();
}

namespace {

std::filesystem::path parts_dir(const std::filesystem::path& metrics)
{
    return std::filesystem::path(metrics.string() + ".parts");
}

void merge_leftover_parts(const std::filesystem::path& metrics, std::set<std::string>& done)
{
    const auto dir = parts_dir(metrics);
    if (!std::filesystem::exists(dir))
        return;
    std::vector<std::filesystem::path> parts;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.path().extension() == ".csv")
            parts.push_back(entry.path());
    std::sort(parts.begin(), parts.end());
    for (const auto& p : parts) {
        std::vector<MetricRow> rows;
        try {
            rows = read_metrics(p);
        } catch (const std::exception&) {
            std::filesystem::remove(p); // incomplete part: the run will simply be redone
            continue;
        }
        std::vector<MetricRow> fresh;
        for (auto& r : rows)
            if (done.insert(r.run_id).second)
                fresh.push_back(std::move(r));
        append_rows(metrics, fresh);
        std::filesystem::remove(p);
    }
}

} // namespace

SweepSummary run_sweep(const SweepGrid& grid, const RunConfig& base, const SweepOptions& options)
{
    if (options.metrics_path.empty())
        throw std::invalid_argument("sweep needs a metrics path");
    const auto runs = expand_grid(grid, base);
    SweepSummary summary;
    summary.total = runs.size();

    std::set<std::string> done;
    if (std::filesystem::exists(options.metrics_path) && std::filesystem::file_size(options.metrics_path) > 0)
        for (const auto& r : read_metrics(options.metrics_path))
            done.insert(r.run_id);
    merge_leftover_parts(options.metrics_path, done);

    std::vector<const RunConfig*> todo;
    for (const auto& c : runs)
        if (done.count(c.run_id()) == 0)
            todo.push_back(&c);
    summary.skipped = runs.size() - todo.size();
    if (options.max_new_runs > 0 && todo.size() > options.max_new_runs)
        todo.resize(options.max_new_runs);

    const auto dir = parts_dir(options.metrics_path);
    std::filesystem::create_directories(dir);
    const auto configs_dir = std::filesystem::path(options.metrics_path.string() + ".configs");
    std::filesystem::create_directories(configs_dir);
    std::mutex merge_mutex;
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> executed{0};
    std::atomic<std::size_t> failed{0};

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= todo.size())
                return;
            const RunConfig& cfg = *todo[i];
            cfg.to_kv().save(configs_dir / (cfg.run_id() + ".cfg"));
            MetricRow row;
            try {
                row = options.runner(cfg);
            } catch (const std::exception& ex) {
                row = row_template(cfg);
                row.status = std::string("failed: ") + ex.what();
            }
            if (!row.ok())
                ++failed;
            const auto part = dir / (cfg.run_id() + ".csv");
            write_metrics(part, {row});
            {
                std::lock_guard lock(merge_mutex);
                append_rows(options.metrics_path, {row});
                std::filesystem::remove(part);
            }
            ++executed;
        }
    };

    const int n_workers = std::max(1, std::min<int>(options.workers, static_cast<int>(todo.size())));
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (int w = 0; w < n_workers; ++w)
            threads.emplace_back(worker);
        for (auto& t : threads)
            t.join();
    }
    std::error_code ec;
    std::filesystem::remove(dir, ec); // only succeeds when empty
    summary.executed = executed;
    summary.failed = failed;
    return summary;
}

} // namespace ogrl::harness
