#pragma once

#include "ogrl/core/rng.hpp"
#include "ogrl/env/env_config.hpp"
#include "ogrl/env/objects.hpp"
#include "ogrl/replay/episode.hpp"

#include <Eigen/Dense>

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ogrl::env {

using replay::Pose;

/// Bin could not be populated without overlaps.
class PlacementError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int max_placement_attempts = 1000;

struct BinWorld {
    Task task = Task::regular;
    std::vector<ObjectSpec> objects;
    Pose gripper;
    int step = 0;
    int horizon = 15;
    bool done = false;
    Rng rng;
};

/// Layout of the observation vector.
struct ObservationDescriptor {
    int grid_size = 0;
    std::string frame = "gripper";
    double view_width = 0.5;
    int channels = 2;     // any-object occupancy, target-kind occupancy
    int pose_features = 5; // x, y, z, cos 2phi, sin 2phi
    int time_features = 1; // t / T

    int size() const { return channels * grid_size * grid_size + pose_features + time_features; }
    std::string to_string() const;
};

ObservationDescriptor describe_observation(const EnvConfig& config);

struct StepResult {
    Eigen::VectorXd observation;
    double reward = 0.0;
    bool done = false;
};

/// Wrap to (-pi, pi].
double wrap_angle(double a);

/// Sequential bin-grasping simulator with kinematic pushing.
///
/// The gripper starts centered above the bin. Each step moves it by a clipped, scaled
/// [dx, dy, dz, dphi] displacement. Dropping below the close threshold closes the
/// gripper and ends the episode with reward 1 on a successful grasp; otherwise the
/// episode ends with reward 0 after `horizon` steps.
class GraspEnv {
public:
    GraspEnv(EnvConfig config, std::span<const ObjectIdentity> identities, std::uint64_t seed);

    /// Objects drawn from the training split (episode 0 of a schedule keyed by `seed`).
    static GraspEnv with_training_objects(const EnvConfig& config, std::uint64_t seed);

    Eigen::VectorXd observe() const;
    StepResult step(const Eigen::Vector4d& action);

    /// True iff the gripper is closed and an eligible object sits between the fingers.
    bool grasp_success() const;

    const BinWorld& world() const noexcept { return world_; }
    BinWorld& world_mut() noexcept { return world_; }
    const EnvConfig& config() const noexcept { return config_; }
    std::vector<std::uint64_t> object_seeds() const;

private:
    void place_objects(std::span<const ObjectIdentity> identities);
    void push_objects();
    void separate_objects();
    void clamp_into_bin(ObjectSpec& obj) const;

    EnvConfig config_;
    BinWorld world_;
};

} // namespace ogrl::env
