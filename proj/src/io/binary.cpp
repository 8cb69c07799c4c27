#include "gri/io/binary.hpp"

#include <cstring>
#include <fstream>

namespace gri::io {

void BinaryWriter::str16(const std::string& s) {
  if (s.size() > 0xffff) throw ValidationError("string too long for u16 length prefix");
  u16(static_cast<std::uint16_t>(s.size()));
  bytes(s.data(), s.size());
}

void BinaryWriter::write_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot open for writing: " + path);
  out.write(reinterpret_cast<const char*>(buf_.data()),
            static_cast<std::streamsize>(buf_.size()));
  if (!out) throw ValidationError("write failed: " + path);
}

BinaryReader BinaryReader::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw ValidationError("cannot open: " + path);
  auto size = in.tellg();
  in.seekg(0);
  std::vector<std::uint8_t> data(static_cast<std::size_t>(size));
  in.read(reinterpret_cast<char*>(data.data()), size);
  if (!in) throw ValidationError("read failed: " + path);
  return BinaryReader(std::move(data));
}

std::string BinaryReader::str16() {
  std::uint16_t n = u16();
  need(n, "string body");
  std::string s(reinterpret_cast<const char*>(buf_.data() + pos_), n);
  pos_ += n;
  return s;
}

void BinaryReader::magic(const char expect[4]) {
  need(4, "magic");
  if (std::memcmp(buf_.data() + pos_, expect, 4) != 0)
    throw FormatError(std::string("bad magic, expected \"") + std::string(expect, 4) + "\"",
                      pos_);
  pos_ += 4;
}

}  // namespace gri::io
