#pragma once

#include "ogrl/env/env_config.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace ogrl::env {

enum class ObjectKind : std::uint8_t { random_blob, target_cross, distractor };

std::string to_string(ObjectKind kind);

struct ObjectIdentity {
    std::uint64_t shape_seed = 0;
    ObjectKind kind = ObjectKind::random_blob;

    bool operator==(const ObjectIdentity&) const = default;
};

/// Half-lengths of the object's principal axes.
struct Extent {
    double major = 0.0;
    double minor = 0.0;
};

/// Shape is a pure function of (seed, kind): about half the blobs are roundish
/// (aspect < 1.3), the rest elongated (aspect 1.6 to 3). Crosses have aspect 1.
Extent shape_from_seed(std::uint64_t shape_seed, ObjectKind kind, const GraspGeometry& geometry);

struct ObjectSpec {
    std::uint64_t shape_seed = 0;
    ObjectKind kind = ObjectKind::random_blob;
    Eigen::Vector2d position = Eigen::Vector2d::Zero();
    double rotation = 0.0;
    Extent extent;

    double aspect() const { return extent.major / extent.minor; }
    /// Radius of the disk used for overlap checks and pushing.
    double collision_radius() const { return 0.5 * (extent.major + extent.minor); }
    /// Whether the footprint covers point p. Blobs are ellipses; crosses are two bars.
    bool covers(const Eigen::Vector2d& p) const;
};

struct ObjectSplits {
    std::vector<std::uint64_t> train;
    std::vector<std::uint64_t> test;
};

/// Disjoint train/test shape seeds, deterministic in master_seed.
ObjectSplits generate_object_splits(int n_train, int n_test, std::uint64_t master_seed);

enum class Split { train, test };

std::string to_string(Split split);
Split parse_split(const std::string& text);

/// Which objects populate the bin in each episode.
///
/// Regular task: a fresh draw of distinct shapes from the split every `switch_period`
/// episodes. Targeted task: the first three split seeds as crosses and the next four as
/// distractors, fixed for all episodes.
class ObjectSchedule {
public:
    ObjectSchedule(const EnvConfig& config, std::vector<std::uint64_t> split_seeds, std::uint64_t stream_seed);

    std::vector<ObjectIdentity> identities_for_episode(std::size_t episode) const;
    std::size_t block_of(std::size_t episode) const;

private:
    Task task_;
    int per_bin_;
    int period_;
    std::vector<std::uint64_t> seeds_;
    std::uint64_t stream_seed_;
};

} // namespace ogrl::env
