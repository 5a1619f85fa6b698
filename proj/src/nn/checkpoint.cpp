#include "ogrl/nn/checkpoint.hpp"

#include "ogrl/core/binary_io.hpp"
#include "ogrl/core/errors.hpp"

#include <cstring>

namespace ogrl::nn {

std::string encode_checkpoint(const Mlp& net, std::string_view role)
{
    ByteWriter w;
    w.put_bytes(std::string_view(checkpoint_magic, 4));
    w.put_u32(checkpoint_version);
    w.put_string(role);
    w.put_u32(static_cast<std::uint32_t>(net.layer_sizes().size()));
    for (int n : net.layer_sizes())
        w.put_u32(static_cast<std::uint32_t>(n));
    w.put_u8(static_cast<std::uint8_t>(net.hidden_activation()));
    w.put_u8(static_cast<std::uint8_t>(net.output_activation()));
    for (const auto& layer : net.params()) {
        for (Eigen::Index r = 0; r < layer.weight.rows(); ++r)
            for (Eigen::Index c = 0; c < layer.weight.cols(); ++c)
                w.put_f64(layer.weight(r, c));
        w.put_f64s({layer.bias.data(), static_cast<std::size_t>(layer.bias.size())});
    }
    w.seal();
    return std::move(w).take();
}

Checkpoint decode_checkpoint(std::string_view bytes)
{
    {
        ByteReader header(bytes);
        if (header.get_bytes(4) != std::string_view(checkpoint_magic, 4))
            throw FormatError(FormatErrorKind::bad_magic, "not a checkpoint file");
        const auto version = header.get_u32();
        if (version != checkpoint_version)
            throw FormatError(FormatErrorKind::version_mismatch,
                              "checkpoint version " + std::to_string(version) + ", expected " +
                                  std::to_string(checkpoint_version));
    }
    ByteReader r(verify_sealed(bytes));
    r.get_bytes(8);
    auto role = r.get_string();
    const auto n = r.get_u32();
    if (n < 2 || n > 64)
        throw FormatError(FormatErrorKind::malformed, "implausible layer count " + std::to_string(n));
    std::vector<int> sizes(n);
    for (auto& s : sizes) {
        s = static_cast<int>(r.get_u32());
        if (s <= 0)
            throw FormatError(FormatErrorKind::malformed, "non-positive layer size");
    }
    const auto hidden = r.get_u8();
    const auto output = r.get_u8();
    if (hidden > 1 || output > 1)
        throw FormatError(FormatErrorKind::malformed, "unknown activation code");
    Mlp net(std::move(sizes), static_cast<HiddenActivation>(hidden), static_cast<OutputActivation>(output));
    for (auto& layer : net.params()) {
        for (Eigen::Index row = 0; row < layer.weight.rows(); ++row)
            for (Eigen::Index c = 0; c < layer.weight.cols(); ++c)
                layer.weight(row, c) = r.get_f64();
        r.get_f64s({layer.bias.data(), static_cast<std::size_t>(layer.bias.size())});
    }
    if (r.remaining() != 0)
        throw FormatError(FormatErrorKind::malformed, "trailing bytes after parameters");
    return {std::move(role), std::move(net)};
}

void save_checkpoint(const std::filesystem::path& path, const Mlp& net, std::string_view role)
{
    write_file_atomic(path, encode_checkpoint(net, role));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) { return decode_checkpoint(read_file(path)); }

} // namespace ogrl::nn
