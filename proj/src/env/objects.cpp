#include "ogrl/env/objects.hpp"

#include "ogrl/core/rng.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace ogrl::env {

std::string to_string(ObjectKind kind)
{
    switch (kind) {
    case ObjectKind::random_blob: return "random_blob";
    case ObjectKind::target_cross: return "target_cross";
    case ObjectKind::distractor: return "distractor";
    }
    return "unknown";
}

std::string to_string(Split split) { return split == Split::train ? "train" : "test"; }

Split parse_split(const std::string& text)
{
    if (text == "train")
        return Split::train;
    if (text == "test")
        return Split::test;
    throw std::invalid_argument("unknown split '" + text + "' (expected train or test)");
}

Extent shape_from_seed(std::uint64_t shape_seed, ObjectKind kind, const GraspGeometry& geometry)
{
    auto rng = make_rng(shape_seed);
    Extent e;
    e.major = uniform(rng, geometry.min_extent, geometry.max_extent);
    if (kind == ObjectKind::target_cross) {
        e.minor = e.major;
        return e;
    }
    const bool round = uniform(rng, 0.0, 1.0) < 0.5;
    const double aspect = round ? uniform(rng, 1.0, 1.3) : uniform(rng, 1.6, 3.0);
    e.minor = e.major / aspect;
    return e;
}

bool ObjectSpec::covers(const Eigen::Vector2d& p) const
{
    const Eigen::Vector2d d = p - position;
    const double c = std::cos(rotation);
    const double s = std::sin(rotation);
    const double u = c * d.x() + s * d.y();
    const double v = -s * d.x() + c * d.y();
    if (kind == ObjectKind::target_cross) {
        const double arm = extent.major;
        const double half_width = extent.major / 3.0;
        return (std::abs(u) <= arm && std::abs(v) <= half_width) || (std::abs(v) <= arm && std::abs(u) <= half_width);
    }
    const double a = u / extent.major;
    const double b = v / extent.minor;
    return a * a + b * b <= 1.0;
}

ObjectSplits generate_object_splits(int n_train, int n_test, std::uint64_t master_seed)
{
    if (n_train <= 0 || n_test <= 0)
        throw std::invalid_argument("object split sizes must be positive");
    auto rng = make_rng(master_seed);
    std::unordered_set<std::uint64_t> seen;
    auto draw = [&](int n) {
        std::vector<std::uint64_t> out;
        out.reserve(static_cast<std::size_t>(n));
        while (static_cast<int>(out.size()) < n) {
            const auto s = rng();
            if (seen.insert(s).second)
                out.push_back(s);
        }
        return out;
    };
    ObjectSplits splits;
    splits.train = draw(n_train);
    splits.test = draw(n_test);
    return splits;
}

ObjectSchedule::ObjectSchedule(const EnvConfig& config, std::vector<std::uint64_t> split_seeds,
                               std::uint64_t stream_seed)
    : task_(config.task),
      per_bin_(config.objects_per_bin()),
      period_(config.switch_period),
      seeds_(std::move(split_seeds)),
      stream_seed_(stream_seed)
{
    if (static_cast<int>(seeds_.size()) < per_bin_)
        throw std::invalid_argument("object split has " + std::to_string(seeds_.size()) + " shapes, need at least " +
                                    std::to_string(per_bin_));
}

std::size_t ObjectSchedule::block_of(std::size_t episode) const
{
    return task_ == Task::targeted ? 0 : episode / static_cast<std::size_t>(period_);
}

std::vector<ObjectIdentity> ObjectSchedule::identities_for_episode(std::size_t episode) const
{
    std::vector<ObjectIdentity> out;
    if (task_ == Task::targeted) {
        for (int i = 0; i < per_bin_; ++i)
            out.push_back({seeds_[static_cast<std::size_t>(i)], i < 3 ? ObjectKind::target_cross : ObjectKind::distractor});
        return out;
    }
    auto rng = make_rng(derive_seed(stream_seed_, block_of(episode)));
    std::vector<std::uint64_t> pool = seeds_;
    for (int i = 0; i < per_bin_; ++i) {
        std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(i), pool.size() - 1);
        std::swap(pool[static_cast<std::size_t>(i)], pool[pick(rng)]);
        out.push_back({pool[static_cast<std::size_t>(i)], ObjectKind::random_blob});
    }
    return out;
}

} // namespace ogrl::env
