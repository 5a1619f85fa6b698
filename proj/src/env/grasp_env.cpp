#include "ogrl/env/grasp_env.hpp"

#include "ogrl/core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ogrl::env {

namespace {

constexpr int subsamples = 3; // per cell edge
constexpr int separation_passes = 4;

} // namespace

std::string ObservationDescriptor::to_string() const
{
    return "grid " + std::to_string(grid_size) + "x" + std::to_string(grid_size) + " (" + frame + " frame) x " +
           std::to_string(channels) +
           " channels + " + std::to_string(pose_features) + " pose + " + std::to_string(time_features) +
           " time = " + std::to_string(size()) + " features";
}

ObservationDescriptor describe_observation(const EnvConfig& config)
{
    ObservationDescriptor d;
    d.grid_size = config.grid_size;
    d.frame = to_string(config.observation_frame);
    d.view_width = config.observation_frame == ObservationFrame::bin ? config.geometry.bin_width : config.view_width;
    return d;
}

double wrap_angle(double a)
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    a = std::fmod(a, two_pi);
    if (a <= -std::numbers::pi)
        a += two_pi;
    else if (a > std::numbers::pi)
        a -= two_pi;
    return a;
}

GraspEnv::GraspEnv(EnvConfig config, std::span<const ObjectIdentity> identities, std::uint64_t seed)
    : config_(std::move(config))
{
    config_.validate();
    const auto& g = config_.geometry;
    world_.task = config_.task;
    world_.horizon = config_.horizon;
    world_.rng = make_rng(seed);
    world_.gripper = Pose{0.5 * g.bin_width, 0.5 * g.bin_width, g.start_height, 0.0};
    place_objects(identities);
}

GraspEnv GraspEnv::with_training_objects(const EnvConfig& config, std::uint64_t seed)
{
    const auto splits = generate_object_splits(config.n_train_objects, config.n_test_objects, config.master_seed);
    const ObjectSchedule schedule(config, splits.train, seed);
    const auto ids = schedule.identities_for_episode(0);
    return GraspEnv(config, ids, seed);
}

void GraspEnv::place_objects(std::span<const ObjectIdentity> identities)
{
    const auto& g = config_.geometry;
    const std::size_t expected = static_cast<std::size_t>(config_.objects_per_bin());
    if (identities.size() != expected)
        throw std::invalid_argument(to_string(config_.task) + " task needs " + std::to_string(expected) +
                                    " objects, got " + std::to_string(identities.size()));
    if (config_.task == Task::targeted) {
        const auto targets = std::count_if(identities.begin(), identities.end(),
                                           [](const auto& id) { return id.kind == ObjectKind::target_cross; });
        if (targets != 3)
            throw std::invalid_argument("targeted task needs exactly 3 target objects");
    }

    for (const auto& id : identities) {
        ObjectSpec obj;
        obj.shape_seed = id.shape_seed;
        obj.kind = id.kind;
        obj.extent = shape_from_seed(id.shape_seed, id.kind, g);
        const double margin = obj.extent.major;
        bool placed = false;
        for (int attempt = 0; attempt < max_placement_attempts && !placed; ++attempt) {
            obj.position = {uniform(world_.rng, margin, g.bin_width - margin),
                            uniform(world_.rng, margin, g.bin_width - margin)};
            obj.rotation = uniform(world_.rng, -std::numbers::pi, std::numbers::pi);
            placed = std::all_of(world_.objects.begin(), world_.objects.end(), [&](const ObjectSpec& other) {
                const double min_dist =
                    (1.0 - g.overlap_tolerance) * (obj.collision_radius() + other.collision_radius());
                return (obj.position - other.position).norm() >= min_dist;
            });
        }
        if (!placed)
            throw PlacementError("could not place object " + std::to_string(world_.objects.size()) + " after " +
                                 std::to_string(max_placement_attempts) + " attempts (bin too crowded)");
        world_.objects.push_back(obj);
    }
}

std::vector<std::uint64_t> GraspEnv::object_seeds() const
{
    std::vector<std::uint64_t> out;
    for (const auto& o : world_.objects)
        out.push_back(o.shape_seed);
    return out;
}

Eigen::VectorXd GraspEnv::observe() const
{
    const int grid = config_.grid_size;
    const int fine = grid * subsamples;
    const double bin = config_.geometry.bin_width;
    const double cell = bin / fine;
    std::vector<unsigned char> any(static_cast<std::size_t>(fine * fine), 0);
    std::vector<unsigned char> target(any.size(), 0);

    if (config_.observation_frame == ObservationFrame::bin) {
        for (const auto& obj : world_.objects) {
            const double reach = obj.extent.major;
            const int i0 = std::max(0, static_cast<int>(std::floor((obj.position.x() - reach) / cell)));
            const int i1 = std::min(fine - 1, static_cast<int>(std::floor((obj.position.x() + reach) / cell)));
            const int j0 = std::max(0, static_cast<int>(std::floor((obj.position.y() - reach) / cell)));
            const int j1 = std::min(fine - 1, static_cast<int>(std::floor((obj.position.y() + reach) / cell)));
            for (int i = i0; i <= i1; ++i) {
                for (int j = j0; j <= j1; ++j) {
                    const Eigen::Vector2d p{(i + 0.5) * cell, (j + 0.5) * cell};
                    if (!obj.covers(p))
                        continue;
                    const auto k = static_cast<std::size_t>(i * fine + j);
                    any[k] = 1;
                    if (obj.kind == ObjectKind::target_cross)
                        target[k] = 1;
                }
            }
        }
    } else {
        const double step = config_.view_width / fine;
        const Eigen::Vector2d centre{world_.gripper.x, world_.gripper.y};
        const Eigen::Rotation2Dd rot(world_.gripper.phi);
        const Eigen::Vector2d ex = rot * Eigen::Vector2d::UnitX() * step;
        const Eigen::Vector2d ey = rot * Eigen::Vector2d::UnitY() * step;
        const Eigen::Vector2d origin = centre - 0.5 * fine * (ex + ey);
        for (const auto& obj : world_.objects) {
            const double r2 = obj.extent.major * obj.extent.major;
            for (int i = 0; i < fine; ++i) {
                for (int j = 0; j < fine; ++j) {
                    const Eigen::Vector2d p = origin + (i + 0.5) * ex + (j + 0.5) * ey;
                    if ((p - obj.position).squaredNorm() > r2 || !obj.covers(p))
                        continue;
                    const auto k = static_cast<std::size_t>(i * fine + j);
                    any[k] = 1;
                    if (obj.kind == ObjectKind::target_cross)
                        target[k] = 1;
                }
            }
        }
    }

    const auto desc = describe_observation(config_);
    Eigen::VectorXd features = Eigen::VectorXd::Zero(desc.size());
    const double norm = 1.0 / (subsamples * subsamples);
    const int plane = grid * grid;
    for (int ci = 0; ci < grid; ++ci) {
        for (int cj = 0; cj < grid; ++cj) {
            int n_any = 0;
            int n_target = 0;
            for (int si = 0; si < subsamples; ++si) {
                for (int sj = 0; sj < subsamples; ++sj) {
                    const auto k = static_cast<std::size_t>((ci * subsamples + si) * fine + cj * subsamples + sj);
                    n_any += any[k];
                    n_target += target[k];
                }
            }
            features(ci * grid + cj) = n_any * norm;
            features(plane + ci * grid + cj) = n_target * norm;
        }
    }
    const auto& g = config_.geometry;
    const auto& p = world_.gripper;
    const int base = 2 * plane;
    features(base + 0) = p.x / g.bin_width;
    features(base + 1) = p.y / g.bin_width;
    features(base + 2) = p.z / g.max_height;
    features(base + 3) = std::cos(2.0 * p.phi);
    features(base + 4) = std::sin(2.0 * p.phi);
    features(base + 5) = static_cast<double>(world_.step) / world_.horizon;
    return features;
}

void GraspEnv::clamp_into_bin(ObjectSpec& obj) const
{
    const double r = obj.collision_radius();
    const double w = config_.geometry.bin_width;
    obj.position.x() = std::clamp(obj.position.x(), r, w - r);
    obj.position.y() = std::clamp(obj.position.y(), r, w - r);
}

void GraspEnv::push_objects()
{
    const auto& g = config_.geometry;
    const Eigen::Vector2d axis{world_.gripper.x, world_.gripper.y};
    bool moved = false;
    for (auto& obj : world_.objects) {
        const Eigen::Vector2d d = obj.position - axis;
        const double dist = d.norm();
        // Objects between the fingers stay put; the fingers shove the ring around them outward.
        if (dist <= g.grasp_radius || dist >= g.push_radius)
            continue;
        obj.position = axis + d * (g.push_radius / dist);
        clamp_into_bin(obj);
        moved = true;
    }
    if (moved)
        separate_objects();
}

void GraspEnv::separate_objects()
{
    auto& objs = world_.objects;
    for (int pass = 0; pass < separation_passes; ++pass) {
        bool any = false;
        for (std::size_t i = 0; i < objs.size(); ++i) {
            for (std::size_t j = i + 1; j < objs.size(); ++j) {
                Eigen::Vector2d d = objs[j].position - objs[i].position;
                const double dist = d.norm();
                const double min_dist = objs[i].collision_radius() + objs[j].collision_radius();
                if (dist >= min_dist)
                    continue;
                const Eigen::Vector2d normal = dist > 1e-12 ? Eigen::Vector2d(d / dist) : Eigen::Vector2d(1.0, 0.0);
                const double half = 0.5 * (min_dist - dist);
                objs[i].position -= half * normal;
                objs[j].position += half * normal;
                clamp_into_bin(objs[i]);
                clamp_into_bin(objs[j]);
                any = true;
            }
        }
        if (!any)
            break;
    }
}

StepResult GraspEnv::step(const Eigen::Vector4d& action)
{
    if (world_.done)
        throw ContractViolation("GraspEnv::step called after the episode finished");
    if (!action.allFinite())
        throw std::invalid_argument("action has non-finite components");

    const auto& g = config_.geometry;
    const Eigen::Vector4d a = action.cwiseMax(-1.0).cwiseMin(1.0);
    auto& p = world_.gripper;
    p.x = std::clamp(p.x + a(0) * g.dxy_scale(), 0.0, g.bin_width);
    p.y = std::clamp(p.y + a(1) * g.dxy_scale(), 0.0, g.bin_width);
    p.z = std::clamp(p.z + a(2) * g.dz_scale, 0.0, g.max_height);
    p.phi = wrap_angle(p.phi + a(3) * g.dphi_scale);
    if (p.z < g.push_height)
        push_objects();

    ++world_.step;
    StepResult result;
    if (p.z < g.close_threshold) {
        world_.done = true;
        result.reward = grasp_success() ? 1.0 : 0.0;
    } else if (world_.step >= world_.horizon) {
        world_.done = true;
    }
    result.done = world_.done;
    result.observation = observe();
    return result;
}

bool GraspEnv::grasp_success() const
{
    const auto& g = config_.geometry;
    const auto& p = world_.gripper;
    if (!(p.z < g.close_threshold))
        return false;
    const Eigen::Vector2d axis{p.x, p.y};
    for (const auto& obj : world_.objects) {
        if ((obj.position - axis).norm() > g.grasp_radius)
            continue;
        if (world_.task == Task::targeted && obj.kind != ObjectKind::target_cross)
            continue;
        if (obj.aspect() > g.aspect_threshold) {
            // Parallel jaws are symmetric under a half turn.
            double diff = wrap_angle(2.0 * (p.phi - obj.rotation)) / 2.0;
            if (std::abs(diff) > g.align_tolerance)
                continue;
        }
        return true;
    }
    return false;
}

} // namespace ogrl::env
