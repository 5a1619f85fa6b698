#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

namespace ogrl {

/// Little-endian serializer backing the checkpoint and pool formats.
class ByteWriter {
public:
    void put_u8(std::uint8_t v) { buffer_.push_back(static_cast<char>(v)); }
    void put_u32(std::uint32_t v);
    void put_u64(std::uint64_t v);
    void put_i64(std::int64_t v) { put_u64(static_cast<std::uint64_t>(v)); }
    void put_f64(double v);
    void put_f64s(std::span<const double> values);
    void put_bytes(std::string_view bytes) { buffer_.append(bytes); }
    void put_string(std::string_view s);

    /// Appends the CRC-32 of everything written so far.
    void seal();

    const std::string& bytes() const noexcept { return buffer_; }
    std::string take() && { return std::move(buffer_); }

private:
    std::string buffer_;
};

/// Bounds-checked reader; running off the end raises FormatError{truncated}.
class ByteReader {
public:
    explicit ByteReader(std::string_view data) : data_(data) {}

    std::uint8_t get_u8();
    std::uint32_t get_u32();
    std::uint64_t get_u64();
    std::int64_t get_i64() { return static_cast<std::int64_t>(get_u64()); }
    double get_f64();
    void get_f64s(std::span<double> out);
    std::string_view get_bytes(std::size_t n);
    std::string get_string();

    std::size_t remaining() const noexcept { return data_.size() - pos_; }
    std::size_t position() const noexcept { return pos_; }

private:
    void require(std::size_t n) const;

    std::string_view data_;
    std::size_t pos_ = 0;
};

std::uint32_t crc32(std::string_view data) noexcept;

/// Checks the trailing CRC-32 written by ByteWriter::seal and returns the payload without it.
std::string_view verify_sealed(std::string_view data);

std::string read_file(const std::filesystem::path& path);

/// Writes via a temporary sibling and rename so readers never see a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

} // namespace ogrl
