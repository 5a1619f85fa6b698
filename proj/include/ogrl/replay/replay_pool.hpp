#pragma once

#include "ogrl/core/rng.hpp"
#include "ogrl/replay/episode.hpp"

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <vector>

namespace ogrl::replay {

class EmptyPool : public std::runtime_error {
public:
    EmptyPool() : std::runtime_error("cannot sample from an empty replay pool") {}
};

struct PoolCounters {
    std::uint64_t initial_random = 0;
    std::uint64_t on_policy_added = 0;

    bool operator==(const PoolCounters&) const = default;
};

/// Append-only episode store with uniform sampling.
///
/// One writer may call add_episode while readers sample; an episode becomes visible
/// only after it has been validated and fully appended.
class ReplayPool {
public:
    /// `capacity` caps the number of stored episodes (oldest evicted first); unset keeps everything.
    explicit ReplayPool(std::optional<std::size_t> capacity = std::nullopt, std::uint64_t env_hash = 0);

    ReplayPool(ReplayPool&&) noexcept;
    ReplayPool& operator=(ReplayPool&&) noexcept;
    ~ReplayPool();

    /// Validates and appends; throws InvalidEpisode without modifying the pool.
    void add_episode(Episode episode);

    std::vector<const Transition*> sample_transitions(std::size_t batch_size, Rng& rng) const;
    std::vector<const Episode*> sample_episodes(std::size_t n, Rng& rng) const;

    std::size_t episode_count() const;
    std::size_t transition_count() const;
    PoolCounters counters() const;
    std::optional<std::size_t> capacity() const noexcept { return capacity_; }
    std::uint64_t env_hash() const noexcept { return env_hash_; }
    double success_rate() const;

    const Episode& episode(std::size_t i) const { return episodes_.at(i); }
    const std::deque<Episode>& episodes() const noexcept { return episodes_; }

private:
    void evict_oldest();

    std::deque<Episode> episodes_;
    std::vector<std::size_t> ends_; // cumulative transition counts
    std::optional<std::size_t> capacity_;
    std::uint64_t env_hash_;
    PoolCounters counters_;
    std::unique_ptr<std::shared_mutex> mutex_;
};

} // namespace ogrl::replay
