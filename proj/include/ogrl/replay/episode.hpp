#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

namespace ogrl::replay {

/// Immutable observation feature vector. Consecutive transitions share the same buffer
/// (next_obs of step t is obs of step t+1), which halves pool memory.
using Features = std::shared_ptr<const Eigen::VectorXd>;

inline Features make_features(Eigen::VectorXd v) { return std::make_shared<const Eigen::VectorXd>(std::move(v)); }

/// Gripper pose (x, y, z, phi).
struct Pose {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double phi = 0.0;

    bool operator==(const Pose&) const = default;
};

enum class Provenance : std::uint8_t { initial_random = 0, on_policy = 1 };

struct Transition {
    Features obs;
    int timestep = 0;       // 1-based within the episode
    Eigen::VectorXd action; // continuous components, or a single discrete index
    double reward = 0.0;
    Features next_obs;
    bool done = false;
    std::optional<Pose> gripper_pose; // pose at obs, before the action
    std::uint64_t episode_id = 0;
};

struct Episode {
    std::uint64_t episode_id = 0;
    std::vector<Transition> transitions;
    double outcome = 0.0;
    std::optional<Pose> final_pose;       // pose when the episode ended
    std::vector<std::uint64_t> object_seeds; // shape seeds present in the bin
    Provenance provenance = Provenance::initial_random;

    std::size_t size() const noexcept { return transitions.size(); }
};

class InvalidEpisode : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Throws InvalidEpisode naming the first broken invariant: non-empty, shared episode_id,
/// timesteps 1..n, done exactly on the last transition, outcome equal to the last reward,
/// finite rewards and present observations.
void validate_episode(const Episode& episode);

/// Incrementally assembles an episode, threading next_obs into the following obs.
class EpisodeBuilder {
public:
    EpisodeBuilder(std::uint64_t episode_id, Features first_obs, std::vector<std::uint64_t> object_seeds = {});

    void add(Eigen::VectorXd action, double reward, Features next_obs, bool done,
             std::optional<Pose> pose_before = std::nullopt);

    const Features& current_obs() const noexcept { return current_; }
    std::size_t size() const noexcept { return episode_.transitions.size(); }

    Episode finish(std::optional<Pose> final_pose = std::nullopt, Provenance provenance = Provenance::initial_random) &&;

private:
    Episode episode_;
    Features current_;
};

} // namespace ogrl::replay
