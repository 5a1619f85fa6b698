#include "ogrl/harness/metrics.hpp"

#include "ogrl/core/kv_config.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace ogrl::harness {

bool MetricRow::same_outcome(const MetricRow& o) const
{
    return run_id == o.run_id && algo == o.algo && config_hash == o.config_hash && pool_episodes == o.pool_episodes &&
           regime == o.regime && learning_rate == o.learning_rate && width == o.width && gamma == o.gamma &&
           explore_duration == o.explore_duration && seed == o.seed && step == o.step && train_loss == o.train_loss &&
           eval_success == o.eval_success && status == o.status;
}

MetricRow row_template(const RunConfig& c)
{
    MetricRow r;
    r.run_id = c.run_id();
    r.algo = algo::to_string(c.algo);
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(c.config_hash()));
    r.config_hash = hex;
    r.pool_episodes = c.pool_episodes;
    r.regime = to_string(c.regime);
    r.learning_rate = c.hyper.optimizer.learning_rate;
    r.width = c.hyper.hidden.empty() ? 0 : c.hyper.hidden.front();
    r.gamma = c.hyper.gamma;
    r.explore_duration = c.exploration.duration_steps;
    r.seed = c.seed;
    return r;
}

const std::string& metrics_header()
{
    static const std::string header = "run_id,algo,config_hash,pool_episodes,regime,learning_rate,width,gamma,"
                                      "explore_duration,seed,step,train_loss,eval_success,wall_seconds,status";
    return header;
}

std::string format_row(const MetricRow& r)
{
    std::string status = r.status;
    for (char& ch : status)
        if (ch == ',' || ch == '\n' || ch == '\r')
            ch = ';';
    std::ostringstream out;
    out << r.run_id << ',' << r.algo << ',' << r.config_hash << ',' << r.pool_episodes << ',' << r.regime << ','
        << format_double(r.learning_rate) << ',' << r.width << ',' << format_double(r.gamma) << ','
        << r.explore_duration << ',' << r.seed << ',' << r.step << ',' << format_double(r.train_loss) << ','
        << format_double(r.eval_success) << ',' << format_double(r.wall_seconds) << ',' << status;
    return out.str();
}

MetricRow parse_row(const std::string& line)
{
    std::vector<std::string> f;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ','))
        f.push_back(cell);
    if (!line.empty() && line.back() == ',')
        f.emplace_back();
    if (f.size() != 15)
        throw std::invalid_argument("metrics row has " + std::to_string(f.size()) + " fields, expected 15: " + line);
    try {
        MetricRow r;
        r.run_id = f[0];
        r.algo = f[1];
        r.config_hash = f[2];
        r.pool_episodes = std::stoull(f[3]);
        r.regime = f[4];
        r.learning_rate = std::stod(f[5]);
        r.width = std::stoi(f[6]);
        r.gamma = std::stod(f[7]);
        r.explore_duration = std::stoll(f[8]);
        r.seed = std::stoull(f[9]);
        r.step = std::stoll(f[10]);
        r.train_loss = std::stod(f[11]);
        r.eval_success = std::stod(f[12]);
        r.wall_seconds = std::stod(f[13]);
        r.status = f[14];
        return r;
    } catch (const std::logic_error&) {
        throw std::invalid_argument("malformed metrics row: " + line);
    }
}

std::vector<MetricRow> read_metrics(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open metrics file " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != metrics_header())
        throw std::invalid_argument("metrics file " + path.string() + " lacks the expected header");
    std::vector<MetricRow> rows;
    while (std::getline(in, line))
        if (!line.empty())
            rows.push_back(parse_row(line));
    return rows;
}

void write_metrics(const std::filesystem::path& path, const std::vector<MetricRow>& rows)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::trunc);
    out << metrics_header() << '\n';
    for (const auto& r : rows)
        out << format_row(r) << '\n';
    if (!out)
        throw std::runtime_error("failed writing " + path.string());
}

void append_rows(const std::filesystem::path& path, const std::vector<MetricRow>& rows)
{
    const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
    if (fresh && path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::app);
    if (fresh)
        out << metrics_header() << '\n';
    for (const auto& r : rows)
        out << format_row(r) << '\n';
    out.flush();
    if (!out)
        throw std::runtime_error("failed appending to " + path.string());
}

std::vector<MetricRow> final_rows(const std::vector<MetricRow>& rows)
{
    std::vector<MetricRow> out;
    std::map<std::string, std::size_t> index;
    for (const auto& r : rows) {
        auto it = index.find(r.run_id);
        if (it == index.end()) {
            index.emplace(r.run_id, out.size());
            out.push_back(r);
        } else if (r.step >= out[it->second].step) {
            out[it->second] = r;
        }
    }
    return out;
}

} // namespace ogrl::harness
