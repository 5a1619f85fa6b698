#include "ogrl/core/rng.hpp"

#include "ogrl/core/errors.hpp"

namespace ogrl {

std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept
{
    return splitmix64(splitmix64(base) ^ (stream * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL));
}

const char* to_string(FormatErrorKind kind) noexcept
{
    switch (kind) {
    case FormatErrorKind::io: return "io error";
    case FormatErrorKind::bad_magic: return "bad magic";
    case FormatErrorKind::version_mismatch: return "version mismatch";
    case FormatErrorKind::truncated: return "truncated";
    case FormatErrorKind::checksum_mismatch: return "checksum mismatch";
    case FormatErrorKind::malformed: return "malformed";
    }
    return "unknown";
}

} // namespace ogrl
