#pragma once

#include <string>

#include "ddh/types.hpp"

namespace ddh {

enum class FeatureFormat { kBinary, kCsv };

// ".csv" selects kCsv, anything else kBinary.
FeatureFormat feature_format_from_path(const std::string& path);

// Binary layout (.ddhf): "DDHF", version 0x01, u64 n_items, u32 dim, then
// n_items*dim little-endian float32 values row-major.
// CSV: no header, comma separated, all numeric, one row per item.
// Throws FormatError on bad magic/version or unparsable text, DataError on
// non-finite values or ragged rows, IoError if the file cannot be opened.
FeatureMatrix load_features(const std::string& path, FeatureFormat format);
void write_features(const FeatureMatrix& m, const std::string& path, FeatureFormat format = FeatureFormat::kBinary);

// Binary layout (.ddhb): "DDHB", version 0x01, u64 n_items, u32 code_len, then
// each row packed MSB-first with the final byte zero-padded.
BinaryCodeSet load_codes(const std::string& path);
void write_codes(const BinaryCodeSet& codes, const std::string& path);

// Plain text, one integer per line.
LabelSet load_labels(const std::string& path);
void write_labels(const LabelSet& labels, const std::string& path);

}  // namespace ddh
