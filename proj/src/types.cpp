#include "ddh/types.hpp"

#include <cmath>
#include <string>

#include "ddh/errors.hpp"

namespace ddh {

FeatureMatrix::FeatureMatrix(std::size_t n_items, std::size_t dim, std::vector<double> values)
    : n_items_(n_items), dim_(dim), values_(std::move(values)) {
  if (n_items_ == 0 || dim_ == 0) {
    throw DataError("feature matrix must have at least one item and one dimension");
  }
  if (values_.size() != n_items_ * dim_) {
    throw DataError("feature matrix holds " + std::to_string(values_.size()) + " values, expected " +
                    std::to_string(n_items_ * dim_));
  }
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(values_[k])) {
      throw DataError("non-finite feature value at row " + std::to_string(k / dim_) + ", column " +
                      std::to_string(k % dim_));
    }
  }
}

FeatureMatrix FeatureMatrix::select_rows(std::span<const std::size_t> rows) const {
  std::vector<double> out;
  out.reserve(rows.size() * dim_);
  for (std::size_t r : rows) {
    auto src = row(r);
    out.insert(out.end(), src.begin(), src.end());
  }
  return FeatureMatrix(rows.size(), dim_, std::move(out));
}

BinaryCode::BinaryCode(std::size_t code_len) : code_len_(code_len), bytes_(packed_bytes(code_len), 0) {}

BinaryCode BinaryCode::from_signs(std::span<const int> signs) {
  BinaryCode code(signs.size());
  for (std::size_t k = 0; k < signs.size(); ++k) code.set(k, signs[k] >= 0);
  return code;
}

void BinaryCode::set(std::size_t k, bool value) {
  const std::uint8_t mask = static_cast<std::uint8_t>(0x80u >> (k & 7));
  if (value) {
    bytes_[k >> 3] |= mask;
  } else {
    bytes_[k >> 3] &= static_cast<std::uint8_t>(~mask);
  }
}

std::vector<int> BinaryCode::to_signs() const {
  std::vector<int> out(code_len_);
  for (std::size_t k = 0; k < code_len_; ++k) out[k] = sign(k);
  return out;
}

BinaryCodeSet::BinaryCodeSet(std::size_t n_items, std::size_t code_len, std::vector<std::uint8_t> packed)
    : n_items_(n_items), code_len_(code_len), packed_(std::move(packed)) {
  if (n_items_ == 0 || code_len_ == 0) {
    throw DataError("code set must have at least one item and one bit");
  }
  const std::size_t rb = row_bytes();
  if (packed_.size() != n_items_ * rb) {
    throw DataError("code buffer holds " + std::to_string(packed_.size()) + " bytes, expected " +
                    std::to_string(n_items_ * rb));
  }
  const unsigned pad = static_cast<unsigned>(rb * 8 - code_len_);
  if (pad > 0) {
    const std::uint8_t pad_mask = static_cast<std::uint8_t>((1u << pad) - 1u);
    for (std::size_t i = 0; i < n_items_; ++i) {
      if (packed_[i * rb + rb - 1] & pad_mask) {
        throw DataError("nonzero padding bits in code row " + std::to_string(i));
      }
    }
  }
}

BinaryCodeSet BinaryCodeSet::from_codes(std::span<const BinaryCode> codes) {
  if (codes.empty()) throw DataError("code set must have at least one item");
  const std::size_t len = codes.front().size();
  std::vector<std::uint8_t> packed;
  packed.reserve(codes.size() * packed_bytes(len));
  for (const auto& c : codes) {
    if (c.size() != len) throw ShapeError("codes of differing length in one code set");
    packed.insert(packed.end(), c.bytes().begin(), c.bytes().end());
  }
  return BinaryCodeSet(codes.size(), len, std::move(packed));
}

BinaryCode BinaryCodeSet::code(std::size_t i) const {
  BinaryCode c(code_len_);
  auto src = row(i);
  for (std::size_t k = 0; k < code_len_; ++k) c.set(k, (src[k >> 3] >> (7 - (k & 7))) & 1u);
  return c;
}

BinaryCodeSet BinaryCodeSet::select_rows(std::span<const std::size_t> rows) const {
  std::vector<std::uint8_t> out;
  out.reserve(rows.size() * row_bytes());
  for (std::size_t r : rows) {
    auto src = row(r);
    out.insert(out.end(), src.begin(), src.end());
  }
  return BinaryCodeSet(rows.size(), code_len_, std::move(out));
}

LabelSet LabelSet::select_rows(std::span<const std::size_t> rows) const {
  LabelSet out;
  out.labels.reserve(rows.size());
  for (std::size_t r : rows) out.labels.push_back(labels[r]);
  return out;
}

}  // namespace ddh
