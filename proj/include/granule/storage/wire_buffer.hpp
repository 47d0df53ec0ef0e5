// SPDX-FileCopyrightText: The granule authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <bit>
#include <cstdint>
#include <utility>
#include <vector>

#include "granule/core/error.hpp"
#include "granule/core/types.hpp"

namespace granule::storage {

/// Growable byte buffer with little-endian scalar encoding and a read
/// cursor. Reads past the end throw WireError. The byte layout written here
/// is the compatibility contract between the generated pack/unpack code and
/// the synchronization protocol.
class WireBuffer {
 public:
  WireBuffer() = default;
  explicit WireBuffer(std::vector<std::uint8_t> bytes)
      : bytes_(std::move(bytes)) {}

  void writeByte(std::uint8_t v) { bytes_.push_back(v); }

  void writeUint32(std::uint32_t v) { writeLittleEndian(v, 4); }
  void writeInt32(std::int32_t v) {
    writeLittleEndian(static_cast<std::uint32_t>(v), 4);
  }
  void writeUint64(std::uint64_t v) { writeLittleEndian(v, 8); }
  void writeInt64(std::int64_t v) {
    writeLittleEndian(static_cast<std::uint64_t>(v), 8);
  }
  void writeReal64(double v) { writeUint64(std::bit_cast<std::uint64_t>(v)); }
  void writeVec3(const Vec3& v) {
    writeReal64(v.x());
    writeReal64(v.y());
    writeReal64(v.z());
  }

  std::uint8_t readByte() { return static_cast<std::uint8_t>(readLittleEndian(1)); }
  std::uint32_t readUint32() { return static_cast<std::uint32_t>(readLittleEndian(4)); }
  std::int32_t readInt32() {
    return static_cast<std::int32_t>(static_cast<std::uint32_t>(readLittleEndian(4)));
  }
  std::uint64_t readUint64() { return readLittleEndian(8); }
  std::int64_t readInt64() { return static_cast<std::int64_t>(readLittleEndian(8)); }
  double readReal64() { return std::bit_cast<double>(readUint64()); }
  Vec3 readVec3() {
    const double x = readReal64();
    const double y = readReal64();
    const double z = readReal64();
    return Vec3(x, y, z);
  }

  std::size_t size() const { return bytes_.size(); }
  std::size_t remaining() const { return bytes_.size() - cursor_; }
  bool exhausted() const { return cursor_ == bytes_.size(); }

  const std::vector<std::uint8_t>& bytes() const { return bytes_; }
  std::vector<std::uint8_t> takeBytes() && { return std::move(bytes_); }

 private:
  void writeLittleEndian(std::uint64_t v, int width) {
    for (int i = 0; i < width; ++i)
      bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }

  std::uint64_t readLittleEndian(int width) {
    if (remaining() < static_cast<std::size_t>(width))
      throw WireError("read past end of wire buffer");
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i)
      v |= static_cast<std::uint64_t>(bytes_[cursor_ + i]) << (8 * i);
    cursor_ += static_cast<std::size_t>(width);
    return v;
  }

  std::vector<std::uint8_t> bytes_;
  std::size_t cursor_ = 0;
};

}  // namespace granule::storage
