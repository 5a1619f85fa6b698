#include "ogrl/replay/replay_pool.hpp"

#include <algorithm>
#include <mutex>

namespace ogrl::replay {

ReplayPool::ReplayPool(std::optional<std::size_t> capacity, std::uint64_t env_hash)
    : capacity_(capacity), env_hash_(env_hash), mutex_(std::make_unique<std::shared_mutex>())
{
    if (capacity_ && *capacity_ == 0)
        throw std::invalid_argument("replay capacity must be positive");
}

ReplayPool::ReplayPool(ReplayPool&&) noexcept = default;
ReplayPool& ReplayPool::operator=(ReplayPool&&) noexcept = default;
ReplayPool::~ReplayPool() = default;

void ReplayPool::add_episode(Episode episode)
{
    validate_episode(episode);
    std::unique_lock lock(*mutex_);
    if (capacity_ && episodes_.size() == *capacity_)
        evict_oldest();
    const std::size_t prev = ends_.empty() ? 0 : ends_.back();
    if (episode.provenance == Provenance::on_policy)
        ++counters_.on_policy_added;
    else
        ++counters_.initial_random;
    ends_.push_back(prev + episode.size());
    episodes_.push_back(std::move(episode));
}

void ReplayPool::evict_oldest()
{
    const auto& old = episodes_.front();
    if (old.provenance == Provenance::on_policy)
        --counters_.on_policy_added;
    else
        --counters_.initial_random;
    const std::size_t removed = old.size();
    episodes_.pop_front();
    ends_.erase(ends_.begin());
    for (auto& e : ends_)
        e -= removed;
}

std::vector<const Transition*> ReplayPool::sample_transitions(std::size_t batch_size, Rng& rng) const
{
    std::shared_lock lock(*mutex_);
    if (ends_.empty())
        throw EmptyPool();
    std::uniform_int_distribution<std::size_t> pick(0, ends_.back() - 1);
    std::vector<const Transition*> batch;
    batch.reserve(batch_size);
    for (std::size_t i = 0; i < batch_size; ++i) {
        const std::size_t flat = pick(rng);
        const auto ep = static_cast<std::size_t>(std::upper_bound(ends_.begin(), ends_.end(), flat) - ends_.begin());
        const std::size_t start = ep == 0 ? 0 : ends_[ep - 1];
        batch.push_back(&episodes_[ep].transitions[flat - start]);
    }
    return batch;
}

std::vector<const Episode*> ReplayPool::sample_episodes(std::size_t n, Rng& rng) const
{
    std::shared_lock lock(*mutex_);
    if (episodes_.empty())
        throw EmptyPool();
    std::uniform_int_distribution<std::size_t> pick(0, episodes_.size() - 1);
    std::vector<const Episode*> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(&episodes_[pick(rng)]);
    return out;
}

std::size_t ReplayPool::episode_count() const
{
    std::shared_lock lock(*mutex_);
    return episodes_.size();
}

std::size_t ReplayPool::transition_count() const
{
    std::shared_lock lock(*mutex_);
    return ends_.empty() ? 0 : ends_.back();
}

PoolCounters ReplayPool::counters() const
{
    std::shared_lock lock(*mutex_);
    return counters_;
}

double ReplayPool::success_rate() const
{
    std::shared_lock lock(*mutex_);
    if (episodes_.empty())
        return 0.0;
    double successes = 0.0;
    for (const auto& ep : episodes_)
        successes += ep.outcome > 0.0 ? 1.0 : 0.0;
    return successes / static_cast<double>(episodes_.size());
}

} // namespace ogrl::replay
