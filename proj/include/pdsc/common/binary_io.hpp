#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdsc {

// Base for every checkpoint read/write failure.
class CheckpointError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad magic bytes or unsupported format version.
class FormatError : public CheckpointError {
public:
    using CheckpointError::CheckpointError;
};

// Stream ended before the declared payload was read.
class TruncatedError : public CheckpointError {
public:
    using CheckpointError::CheckpointError;
};

// Stored shapes disagree with the shapes the caller expects.
class ShapeMismatchError : public CheckpointError {
public:
    using CheckpointError::CheckpointError;
};

// Little-endian primitive writer.
class BinaryWriter {
public:
    explicit BinaryWriter(std::ostream& out) : out_(out) {}

    void write_bytes(std::span<const char> bytes);
    void write_u8(std::uint8_t v);
    void write_u32(std::uint32_t v);
    void write_u64(std::uint64_t v);
    void write_f64(double v);
    void write_string(const std::string& s);
    void write_f64s(std::span<const double> values);

private:
    std::ostream& out_;
};

class BinaryReader {
public:
    explicit BinaryReader(std::istream& in) : in_(in) {}

    void read_bytes(std::span<char> bytes);
    std::uint8_t read_u8();
    std::uint32_t read_u32();
    std::uint64_t read_u64();
    double read_f64();
    std::string read_string(std::size_t max_length = 1u << 20);
    std::vector<double> read_f64s(std::size_t count);

private:
    std::istream& in_;
};

}  // namespace pdsc
