#pragma once

#include "gri/common.hpp"

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

namespace gri::io {

/// Little-endian byte sink. All file formats in this project are written
/// through this, so layouts do not depend on host endianness.
class BinaryWriter {
public:
  void u8(std::uint8_t v) { buf_.push_back(v); }

  void u16(std::uint16_t v) {
    buf_.push_back(static_cast<std::uint8_t>(v));
    buf_.push_back(static_cast<std::uint8_t>(v >> 8));
  }

  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }

  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }

  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

  void bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const std::uint8_t*>(data);
    buf_.insert(buf_.end(), p, p + n);
  }

  void magic(const char tag[4]) { bytes(tag, 4); }

  void str16(const std::string& s);

  const std::vector<std::uint8_t>& data() const { return buf_; }

  /// Writes the accumulated bytes to `path`, replacing any existing file.
  void write_file(const std::string& path) const;

private:
  std::vector<std::uint8_t> buf_;
};

/// Little-endian byte source over an in-memory buffer. Every decode checks
/// remaining length and throws FormatError carrying the failing byte offset.
class BinaryReader {
public:
  explicit BinaryReader(std::vector<std::uint8_t> data) : buf_(std::move(data)) {}

  static BinaryReader from_file(const std::string& path);

  std::uint8_t u8() {
    need(1, "u8");
    return buf_[pos_++];
  }

  std::uint16_t u16() {
    need(2, "u16");
    std::uint16_t v = static_cast<std::uint16_t>(buf_[pos_]) |
                      static_cast<std::uint16_t>(buf_[pos_ + 1]) << 8;
    pos_ += 2;
    return v;
  }

  std::uint32_t u32() {
    need(4, "u32");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(buf_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }

  std::uint64_t u64() {
    need(8, "u64");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return v;
  }

  double f64() { return std::bit_cast<double>(u64()); }

  std::string str16();

  /// Reads 4 bytes and checks them against `expect`.
  void magic(const char expect[4]);

  std::uint64_t offset() const { return pos_; }
  bool exhausted() const { return pos_ == buf_.size(); }
  std::size_t size() const { return buf_.size(); }

  [[noreturn]] void fail(const std::string& what) const { throw FormatError(what, pos_); }

private:
  void need(std::size_t n, const char* what) {
    if (pos_ + n > buf_.size())
      throw FormatError(std::string("truncated file: expected ") + what, pos_);
  }

  std::vector<std::uint8_t> buf_;
  std::size_t pos_ = 0;
};

}  // namespace gri::io
