#pragma once

// Little-endian fixed-width helpers shared by the file formats.

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <string_view>

#include "ddh/errors.hpp"

namespace ddh::detail {

constexpr std::uint8_t kFormatVersion = 0x01;

class BinaryWriter {
 public:
  explicit BinaryWriter(const std::string& path) : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw IoError("cannot open " + path + " for writing");
  }

  void magic(std::string_view tag) {
    raw(tag.data(), tag.size());
    u8(kFormatVersion);
  }
  void u8(std::uint8_t v) { raw(&v, 1); }
  void u32(std::uint32_t v) { le(v); }
  void u64(std::uint64_t v) { le(v); }
  void f32(float v) { le(std::bit_cast<std::uint32_t>(v)); }
  void raw(const void* data, std::size_t n) { out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(n)); }

  void close() {
    out_.flush();
    if (!out_) throw IoError("write failed for " + path_);
    out_.close();
  }

 private:
  template <typename T>
  void le(T v) {
    std::array<unsigned char, sizeof(T)> b{};
    for (std::size_t k = 0; k < sizeof(T); ++k) b[k] = static_cast<unsigned char>((v >> (8 * k)) & 0xFFu);
    raw(b.data(), b.size());
  }

  std::string path_;
  std::ofstream out_;
};

class BinaryReader {
 public:
  explicit BinaryReader(const std::string& path) : path_(path), in_(path, std::ios::binary) {
    if (!in_) throw IoError("cannot open " + path);
  }

  // Checks the 4-byte tag and version byte.
  void expect_magic(std::string_view tag) {
    char got[4] = {};
    in_.read(got, 4);
    if (in_.gcount() != 4 || std::string_view(got, 4) != tag) {
      throw FormatError(path_ + ": bad magic, expected \"" + std::string(tag) + "\"");
    }
    const std::uint8_t version = u8();
    if (version != kFormatVersion) {
      throw FormatError(path_ + ": unsupported format version " + std::to_string(version));
    }
  }
  std::uint8_t u8() {
    std::uint8_t v = 0;
    raw(&v, 1);
    return v;
  }
  std::uint32_t u32() { return le<std::uint32_t>(); }
  std::uint64_t u64() { return le<std::uint64_t>(); }
  float f32() { return std::bit_cast<float>(le<std::uint32_t>()); }
  void raw(void* data, std::size_t n) {
    in_.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) throw FormatError(path_ + ": truncated file");
  }
  void expect_eof() {
    if (in_.peek() != std::char_traits<char>::eof()) throw FormatError(path_ + ": trailing bytes after payload");
  }
  const std::string& path() const { return path_; }

 private:
  template <typename T>
  T le() {
    std::array<unsigned char, sizeof(T)> b{};
    raw(b.data(), b.size());
    T v = 0;
    for (std::size_t k = 0; k < sizeof(T); ++k) v |= static_cast<T>(b[k]) << (8 * k);
    return v;
  }

  std::string path_;
  std::ifstream in_;
};

}  // namespace ddh::detail
