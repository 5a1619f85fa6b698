#include "ogrl/core/binary_io.hpp"

#include "ogrl/core/errors.hpp"

#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

namespace ogrl {

static_assert(std::endian::native == std::endian::little, "binary formats assume a little-endian host");

void ByteWriter::put_u32(std::uint32_t v)
{
    char raw[4];
    std::memcpy(raw, &v, 4);
    buffer_.append(raw, 4);
}

void ByteWriter::put_u64(std::uint64_t v)
{
    char raw[8];
    std::memcpy(raw, &v, 8);
    buffer_.append(raw, 8);
}

void ByteWriter::put_f64(double v) { put_u64(std::bit_cast<std::uint64_t>(v)); }

void ByteWriter::put_f64s(std::span<const double> values)
{
    buffer_.append(reinterpret_cast<const char*>(values.data()), values.size() * sizeof(double));
}

void ByteWriter::put_string(std::string_view s)
{
    put_u32(static_cast<std::uint32_t>(s.size()));
    buffer_.append(s);
}

void ByteWriter::seal() { put_u32(crc32(buffer_)); }

void ByteReader::require(std::size_t n) const
{
    if (data_.size() - pos_ < n) {
        throw FormatError(FormatErrorKind::truncated,
                          "need " + std::to_string(n) + " bytes at offset " + std::to_string(pos_) + ", have " +
                              std::to_string(data_.size() - pos_));
    }
}

std::uint8_t ByteReader::get_u8()
{
    require(1);
    return static_cast<std::uint8_t>(data_[pos_++]);
}

std::uint32_t ByteReader::get_u32()
{
    require(4);
    std::uint32_t v;
    std::memcpy(&v, data_.data() + pos_, 4);
    pos_ += 4;
    return v;
}

std::uint64_t ByteReader::get_u64()
{
    require(8);
    std::uint64_t v;
    std::memcpy(&v, data_.data() + pos_, 8);
    pos_ += 8;
    return v;
}

double ByteReader::get_f64() { return std::bit_cast<double>(get_u64()); }

void ByteReader::get_f64s(std::span<double> out)
{
    const std::size_t n = out.size() * sizeof(double);
    require(n);
    std::memcpy(out.data(), data_.data() + pos_, n);
    pos_ += n;
}

std::string_view ByteReader::get_bytes(std::size_t n)
{
    require(n);
    auto view = data_.substr(pos_, n);
    pos_ += n;
    return view;
}

std::string ByteReader::get_string()
{
    const auto n = get_u32();
    return std::string(get_bytes(n));
}

std::uint32_t crc32(std::string_view data) noexcept
{
    uLong crc = ::crc32(0L, Z_NULL, 0);
    // zlib takes a uInt length; feed large buffers in chunks.
    constexpr std::size_t chunk = 1U << 30;
    for (std::size_t off = 0; off < data.size(); off += chunk) {
        const std::size_t n = std::min(chunk, data.size() - off);
        crc = ::crc32(crc, reinterpret_cast<const Bytef*>(data.data() + off), static_cast<uInt>(n));
    }
    return static_cast<std::uint32_t>(crc);
}

std::string_view verify_sealed(std::string_view data)
{
    if (data.size() < 4)
        throw FormatError(FormatErrorKind::truncated, "file shorter than its checksum");
    const auto payload = data.substr(0, data.size() - 4);
    std::uint32_t stored;
    std::memcpy(&stored, data.data() + payload.size(), 4);
    if (stored != crc32(payload))
        throw FormatError(FormatErrorKind::checksum_mismatch, "stored CRC does not match contents");
    return payload;
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FormatError(FormatErrorKind::io, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::move(ss).str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents)
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw FormatError(FormatErrorKind::io, "cannot write " + tmp.string());
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out)
            throw FormatError(FormatErrorKind::io, "short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

} // namespace ogrl
