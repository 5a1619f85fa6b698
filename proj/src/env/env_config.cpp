#include "ogrl/env/env_config.hpp"

#include <stdexcept>

namespace ogrl::env {

std::string to_string(Task task) { return task == Task::regular ? "regular" : "targeted"; }

Task parse_task(const std::string& text)
{
    if (text == "regular")
        return Task::regular;
    if (text == "targeted")
        return Task::targeted;
    throw std::invalid_argument("unknown task '" + text + "' (expected regular or targeted)");
}

std::string to_string(ObservationFrame frame) { return frame == ObservationFrame::bin ? "bin" : "gripper"; }

ObservationFrame parse_observation_frame(const std::string& text)
{
    if (text == "bin")
        return ObservationFrame::bin;
    if (text == "gripper")
        return ObservationFrame::gripper;
    throw std::invalid_argument("unknown observation frame '" + text + "' (expected bin or gripper)");
}

void EnvConfig::validate() const
{
    if (grid_size < 2)
        throw std::invalid_argument("grid_size must be at least 2");
    if (!(view_width > 0.0))
        throw std::invalid_argument("view_width must be positive");
    if (horizon < 1)
        throw std::invalid_argument("horizon must be positive");
    if (n_train_objects <= 0 || n_test_objects <= 0)
        throw std::invalid_argument("object split sizes must be positive");
    if (switch_period < 1)
        throw std::invalid_argument("switch_period must be positive");
    const auto& g = geometry;
    if (!(g.bin_width > 0 && g.max_height > 0 && g.close_threshold > 0 && g.dz_scale > 0 && g.grasp_radius > 0 &&
          g.min_extent > 0 && g.max_extent >= g.min_extent && g.push_radius >= g.grasp_radius))
        throw std::invalid_argument("inconsistent grasp geometry");
    if (g.start_height < g.close_threshold || g.start_height > g.max_height)
        throw std::invalid_argument("start height must lie between close threshold and max height");
}

KvConfig EnvConfig::to_kv() const
{
    KvConfig kv;
    kv.set("task", to_string(task));
    kv.set("grid_size", grid_size);
    kv.set("observation_frame", to_string(observation_frame));
    kv.set("view_width", view_width);
    kv.set("horizon", horizon);
    kv.set("n_train_objects", n_train_objects);
    kv.set("n_test_objects", n_test_objects);
    kv.set("master_seed", master_seed);
    kv.set("switch_period", switch_period);
    kv.set("random_drift", random_drift);
    const auto& g = geometry;
    kv.set("bin_width", g.bin_width);
    kv.set("max_height", g.max_height);
    kv.set("start_height", g.start_height);
    kv.set("close_threshold", g.close_threshold);
    kv.set("dz_scale", g.dz_scale);
    kv.set("dphi_scale", g.dphi_scale);
    kv.set("grasp_radius", g.grasp_radius);
    kv.set("align_tolerance", g.align_tolerance);
    kv.set("aspect_threshold", g.aspect_threshold);
    kv.set("push_height", g.push_height);
    kv.set("push_radius", g.push_radius);
    kv.set("min_extent", g.min_extent);
    kv.set("max_extent", g.max_extent);
    kv.set("overlap_tolerance", g.overlap_tolerance);
    return kv;
}

EnvConfig EnvConfig::from_kv(const KvConfig& kv)
{
    EnvConfig c;
    c.task = parse_task(kv.get_string("task", to_string(c.task)));
    c.grid_size = static_cast<int>(kv.get_int("grid_size", c.grid_size));
    c.observation_frame = parse_observation_frame(kv.get_string("observation_frame", to_string(c.observation_frame)));
    c.view_width = kv.get_double("view_width", c.view_width);
    c.horizon = static_cast<int>(kv.get_int("horizon", c.horizon));
    c.n_train_objects = static_cast<int>(kv.get_int("n_train_objects", c.n_train_objects));
    c.n_test_objects = static_cast<int>(kv.get_int("n_test_objects", c.n_test_objects));
    c.master_seed = kv.get_uint("master_seed", c.master_seed);
    c.switch_period = static_cast<int>(kv.get_int("switch_period", c.switch_period));
    c.random_drift = kv.get_double("random_drift", c.random_drift);
    auto& g = c.geometry;
    g.bin_width = kv.get_double("bin_width", g.bin_width);
    g.max_height = kv.get_double("max_height", g.max_height);
    g.start_height = kv.get_double("start_height", g.start_height);
    g.close_threshold = kv.get_double("close_threshold", g.close_threshold);
    g.dz_scale = kv.get_double("dz_scale", g.dz_scale);
    g.dphi_scale = kv.get_double("dphi_scale", g.dphi_scale);
    g.grasp_radius = kv.get_double("grasp_radius", g.grasp_radius);
    g.align_tolerance = kv.get_double("align_tolerance", g.align_tolerance);
    g.aspect_threshold = kv.get_double("aspect_threshold", g.aspect_threshold);
    g.push_height = kv.get_double("push_height", g.push_height);
    g.push_radius = kv.get_double("push_radius", g.push_radius);
    g.min_extent = kv.get_double("min_extent", g.min_extent);
    g.max_extent = kv.get_double("max_extent", g.max_extent);
    g.overlap_tolerance = kv.get_double("overlap_tolerance", g.overlap_tolerance);
    c.validate();
    return c;
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t EnvConfig::descriptor_hash() const { return fnv1a64(to_kv().to_string()); }

} // namespace ogrl::env
