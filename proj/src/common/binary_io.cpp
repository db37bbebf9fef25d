#include "pdsc/common/binary_io.hpp"

#include <array>
#include <bit>
#include <cstring>

namespace pdsc {

namespace {

template <typename U>
void store_le(std::ostream& out, U v) {
    std::array<char, sizeof(U)> buf{};
    for (std::size_t i = 0; i < sizeof(U); ++i) {
        buf[i] = static_cast<char>((v >> (8 * i)) & 0xFFu);
    }
    out.write(buf.data(), buf.size());
}

template <typename U>
U load_le(std::istream& in) {
    std::array<unsigned char, sizeof(U)> buf{};
    in.read(reinterpret_cast<char*>(buf.data()), buf.size());
    if (in.gcount() != static_cast<std::streamsize>(buf.size())) {
        throw TruncatedError("checkpoint truncated");
    }
    U v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) {
        v |= static_cast<U>(buf[i]) << (8 * i);
    }
    return v;
}

}  // namespace

void BinaryWriter::write_bytes(std::span<const char> bytes) {
    out_.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

void BinaryWriter::write_u8(std::uint8_t v) { store_le(out_, v); }
void BinaryWriter::write_u32(std::uint32_t v) { store_le(out_, v); }
void BinaryWriter::write_u64(std::uint64_t v) { store_le(out_, v); }
void BinaryWriter::write_f64(double v) { store_le(out_, std::bit_cast<std::uint64_t>(v)); }

void BinaryWriter::write_string(const std::string& s) {
    write_u32(static_cast<std::uint32_t>(s.size()));
    write_bytes(std::span<const char>(s.data(), s.size()));
}

void BinaryWriter::write_f64s(std::span<const double> values) {
    for (double v : values) write_f64(v);
}

void BinaryReader::read_bytes(std::span<char> bytes) {
    in_.read(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (in_.gcount() != static_cast<std::streamsize>(bytes.size())) {
        throw TruncatedError("checkpoint truncated");
    }
}

std::uint8_t BinaryReader::read_u8() { return load_le<std::uint8_t>(in_); }
std::uint32_t BinaryReader::read_u32() { return load_le<std::uint32_t>(in_); }
std::uint64_t BinaryReader::read_u64() { return load_le<std::uint64_t>(in_); }
double BinaryReader::read_f64() { return std::bit_cast<double>(load_le<std::uint64_t>(in_)); }

std::string BinaryReader::read_string(std::size_t max_length) {
    const std::uint32_t n = read_u32();
    if (n > max_length) {
        throw FormatError("checkpoint string length " + std::to_string(n) + " exceeds limit");
    }
    std::string s(n, '\0');
    read_bytes(std::span<char>(s.data(), s.size()));
    return s;
}

std::vector<double> BinaryReader::read_f64s(std::size_t count) {
    std::vector<double> values(count);
    for (auto& v : values) v = read_f64();
    return values;
}

}  // namespace pdsc
