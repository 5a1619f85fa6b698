#include "ogrl/replay/episode.hpp"

#include <cmath>
#include <string>

namespace ogrl::replay {

void validate_episode(const Episode& episode)
{
    const auto& ts = episode.transitions;
    const std::string id = "episode " + std::to_string(episode.episode_id);
    if (ts.empty())
        throw InvalidEpisode(id + ": no transitions");
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const auto& t = ts[i];
        const std::string where = id + " step " + std::to_string(i + 1);
        if (t.episode_id != episode.episode_id)
            throw InvalidEpisode(where + ": episode_id " + std::to_string(t.episode_id) + " differs");
        if (t.timestep != static_cast<int>(i + 1))
            throw InvalidEpisode(where + ": timestep " + std::to_string(t.timestep) + " out of sequence");
        if (!t.obs || !t.next_obs)
            throw InvalidEpisode(where + ": missing observation");
        if (!std::isfinite(t.reward))
            throw InvalidEpisode(where + ": non-finite reward");
        if (t.done && i + 1 != ts.size())
            throw InvalidEpisode(where + ": done before the final transition");
    }
    if (!ts.back().done)
        throw InvalidEpisode(id + ": final transition is not marked done");
    if (episode.outcome != ts.back().reward)
        throw InvalidEpisode(id + ": outcome does not match the final reward");
}

EpisodeBuilder::EpisodeBuilder(std::uint64_t episode_id, Features first_obs, std::vector<std::uint64_t> object_seeds)
    : current_(std::move(first_obs))
{
    episode_.episode_id = episode_id;
    episode_.object_seeds = std::move(object_seeds);
}

void EpisodeBuilder::add(Eigen::VectorXd action, double reward, Features next_obs, bool done,
                         std::optional<Pose> pose_before)
{
    Transition t;
    t.obs = current_;
    t.timestep = static_cast<int>(episode_.transitions.size()) + 1;
    t.action = std::move(action);
    t.reward = reward;
    t.next_obs = next_obs;
    t.done = done;
    t.gripper_pose = pose_before;
    t.episode_id = episode_.episode_id;
    episode_.transitions.push_back(std::move(t));
    current_ = std::move(next_obs);
}

Episode EpisodeBuilder::finish(std::optional<Pose> final_pose, Provenance provenance) &&
{
    if (!episode_.transitions.empty())
        episode_.outcome = episode_.transitions.back().reward;
    episode_.final_pose = final_pose;
    episode_.provenance = provenance;
    return std::move(episode_);
}

} // namespace ogrl::replay
