#pragma once

#include "ogrl/nn/mlp.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace ogrl::nn {

inline constexpr char checkpoint_magic[4] = {'O', 'G', 'R', 'L'};
inline constexpr std::uint32_t checkpoint_version = 1;

struct Checkpoint {
    std::string role; // e.g. "q_net", "actor_net"
    Mlp net;
};

/// Layout (little-endian):
///   "OGRL" | u32 version | string role | u32 n | n x u32 layer size | u8 hidden | u8 output |
///   per layer: weight f64 row-major, bias f64 | u32 CRC-32 of all preceding bytes
std::string encode_checkpoint(const Mlp& net, std::string_view role);
Checkpoint decode_checkpoint(std::string_view bytes);

void save_checkpoint(const std::filesystem::path& path, const Mlp& net, std::string_view role);
Checkpoint load_checkpoint(const std::filesystem::path& path);

} // namespace ogrl::nn
