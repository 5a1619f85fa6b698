#pragma once

#include <stdexcept>

namespace ogrl::nn {

/// Periodically refreshed snapshot of a value (typically a network) used for target estimates.
///
/// The shadow is always a whole copy of some earlier source; between syncs it never changes.
template <typename T>
class LaggedCopy {
public:
    static constexpr int default_lag = 50;

    explicit LaggedCopy(const T& source, int lag_period = default_lag) : shadow_(source), lag_period_(lag_period)
    {
        if (lag_period_ <= 0)
            throw std::invalid_argument("lag period must be positive");
    }

    /// Call once per optimizer step on the source. Returns true when the shadow was refreshed.
    bool maybe_sync(const T& source)
    {
        if (++updates_since_sync_ < lag_period_)
            return false;
        shadow_ = source;
        updates_since_sync_ = 0;
        return true;
    }

    const T& shadow() const noexcept { return shadow_; }
    T& shadow_mut() noexcept { return shadow_; }
    int updates_since_sync() const noexcept { return updates_since_sync_; }
    int lag_period() const noexcept { return lag_period_; }

private:
    T shadow_;
    int updates_since_sync_ = 0;
    int lag_period_;
};

} // namespace ogrl::nn
