#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ddh {

// N x D real matrix, row-major, one row per item. Row index is the item id.
// Values are held in double; the on-disk payload is float32.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  // Throws DataError if the shape is empty, values.size() != n*d, or any
  // value is non-finite.
  FeatureMatrix(std::size_t n_items, std::size_t dim, std::vector<double> values);

  std::size_t n_items() const { return n_items_; }
  std::size_t dim() const { return dim_; }

  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * dim_, dim_};
  }
  const std::vector<double>& values() const { return values_; }

  // Rows picked in the given order.
  FeatureMatrix select_rows(std::span<const std::size_t> rows) const;

  friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;

 private:
  std::size_t n_items_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> values_;
};

// A single hash code in {-1,+1}^L, bit-packed MSB-first. Bit 1 is +1, bit 0
// is -1. Padding bits of the final byte are always zero.
class BinaryCode {
 public:
  BinaryCode() = default;
  explicit BinaryCode(std::size_t code_len);
  // From a +-1 vector. Any value >= 0 maps to bit 1.
  static BinaryCode from_signs(std::span<const int> signs);

  std::size_t size() const { return code_len_; }
  std::span<const std::uint8_t> bytes() const { return bytes_; }

  bool bit(std::size_t k) const {
    return (bytes_[k >> 3] >> (7 - (k & 7))) & 1u;
  }
  int sign(std::size_t k) const { return bit(k) ? 1 : -1; }
  void set(std::size_t k, bool value);

  std::vector<int> to_signs() const;

  friend bool operator==(const BinaryCode&, const BinaryCode&) = default;

 private:
  std::size_t code_len_ = 0;
  std::vector<std::uint8_t> bytes_;
};

inline std::size_t packed_bytes(std::size_t code_len) { return (code_len + 7) / 8; }

// N codes of identical length L stored contiguously.
class BinaryCodeSet {
 public:
  BinaryCodeSet() = default;
  // Throws DataError if n_items or code_len is zero, or the packed buffer has
  // the wrong size or nonzero padding bits.
  BinaryCodeSet(std::size_t n_items, std::size_t code_len, std::vector<std::uint8_t> packed);
  static BinaryCodeSet from_codes(std::span<const BinaryCode> codes);

  std::size_t n_items() const { return n_items_; }
  std::size_t code_len() const { return code_len_; }
  std::size_t row_bytes() const { return packed_bytes(code_len_); }

  std::span<const std::uint8_t> row(std::size_t i) const {
    return {packed_.data() + i * row_bytes(), row_bytes()};
  }
  BinaryCode code(std::size_t i) const;
  const std::vector<std::uint8_t>& packed() const { return packed_; }

  BinaryCodeSet select_rows(std::span<const std::size_t> rows) const;

  friend bool operator==(const BinaryCodeSet&, const BinaryCodeSet&) = default;

 private:
  std::size_t n_items_ = 0;
  std::size_t code_len_ = 0;
  std::vector<std::uint8_t> packed_;
};

// One integer class id per item. Evaluation ground truth only.
struct LabelSet {
  std::vector<std::int64_t> labels;

  std::size_t n_items() const { return labels.size(); }
  std::int64_t operator[](std::size_t i) const { return labels[i]; }

  LabelSet select_rows(std::span<const std::size_t> rows) const;

  friend bool operator==(const LabelSet&, const LabelSet&) = default;
};

}  // namespace ddh
