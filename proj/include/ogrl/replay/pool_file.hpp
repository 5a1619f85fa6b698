#pragma once

#include "ogrl/replay/replay_pool.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace ogrl::replay {

inline constexpr char pool_magic[4] = {'O', 'G', 'R', 'P'};
inline constexpr std::uint32_t pool_version = 1;

/// Binary pool format (little-endian, 64-bit floats):
///
///   "OGRP" | u32 version | u64 env hash | u64 episode count |
///   u64 initial_random | u64 on_policy_added | u64 capacity (0 = none) |
///   per episode: u64 byte length, then the episode record |
///   u32 CRC-32 of all preceding bytes
///
/// An episode record stores its distinct observation frames once; transitions refer to
/// frames by index, which preserves the obs/next_obs sharing on reload.
std::string encode_pool(const ReplayPool& pool);
ReplayPool decode_pool(std::string_view bytes);

void save_pool(const ReplayPool& pool, const std::filesystem::path& path);
ReplayPool load_pool(const std::filesystem::path& path);

} // namespace ogrl::replay
