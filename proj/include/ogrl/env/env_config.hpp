#pragma once

#include "ogrl/action/action_space.hpp"
#include "ogrl/core/kv_config.hpp"

#include <cstdint>
#include <numbers>
#include <string>

namespace ogrl::env {

enum class Task { regular, targeted };

std::string to_string(Task task);
Task parse_task(const std::string& text);

/// Frame of the occupancy grid: fixed over the whole bin, or centred on the gripper and
/// rotated with it (a wrist-camera view of width view_width).
enum class ObservationFrame { bin, gripper };

std::string to_string(ObservationFrame frame);
ObservationFrame parse_observation_frame(const std::string& text);

/// Geometry of the bin, gripper motion and the grasp-success predicate.
/// Lengths are in bin units (the bin spans [0, bin_width] in x and y).
struct GraspGeometry {
    double bin_width = 1.0;
    double max_height = 1.0;
    double start_height = 1.0;
    double close_threshold = 0.15; // gripper closes when z drops below this
    double dz_scale = 0.25;         // max |dz| per step
    double dphi_scale = std::numbers::pi / 4.0;
    double grasp_radius = 0.07;     // centroid must lie this close to the gripper axis
    double align_tolerance = std::numbers::pi / 6.0;
    double aspect_threshold = 1.5;  // alignment only matters above this aspect ratio
    double push_height = 0.4;       // below this the fingers push objects aside
    double push_radius = 0.12;      // pushed objects end up at least this far from the axis
    double min_extent = 0.04;
    double max_extent = 0.08;
    double overlap_tolerance = 0.1; // allowed fractional overlap of collision disks at reset

    /// Max lateral displacement per step: a sixth of the bin.
    double dxy_scale() const { return bin_width / 6.0; }
};

struct EnvConfig {
    Task task = Task::regular;
    int grid_size = 6;
    ObservationFrame observation_frame = ObservationFrame::gripper;
    double view_width = 0.5; // gripper frame only, in bin units
    int horizon = 15;
    GraspGeometry geometry;
    int n_train_objects = 90;
    int n_test_objects = 10;
    std::uint64_t master_seed = 7;
    int switch_period = 20;     // regular task: episodes between object swaps
    double random_drift = 0.5;  // downward bias of the scripted random policy's dz

    int objects_per_bin() const { return task == Task::regular ? 5 : 7; }
    /// Two occupancy channels, the gripper pose (x, y, z, cos 2phi, sin 2phi) and t/T.
    int feature_size() const { return 2 * grid_size * grid_size + 6; }
    action::ActionSpace action_space() const { return action::ActionSpace::unit_box(4); }

    void validate() const;
    KvConfig to_kv() const;
    /// Keys not present in `kv` keep their defaults.
    static EnvConfig from_kv(const KvConfig& kv);
    std::uint64_t descriptor_hash() const;
};

/// FNV-1a over arbitrary bytes.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

} // namespace ogrl::env
