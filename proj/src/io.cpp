#include "ddh/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <string_view>

#include "binary_stream.hpp"
#include "ddh/errors.hpp"

namespace ddh {

namespace {

constexpr std::string_view kFeatureMagic = "DDHF";
constexpr std::string_view kCodeMagic = "DDHB";

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

FeatureMatrix load_features_binary(const std::string& path) {
  detail::BinaryReader in(path);
  in.expect_magic(kFeatureMagic);
  const std::uint64_t n = in.u64();
  const std::uint32_t d = in.u32();
  if (n == 0 || d == 0) throw FormatError(path + ": header declares an empty matrix");
  std::vector<double> values;
  values.reserve(n * d);
  for (std::uint64_t k = 0; k < n * d; ++k) {
    const float v = in.f32();
    if (!std::isfinite(v)) {
      throw DataError(path + ": non-finite value at row " + std::to_string(k / d) + ", column " +
                      std::to_string(k % d));
    }
    values.push_back(v);
  }
  in.expect_eof();
  return FeatureMatrix(n, d, std::move(values));
}

FeatureMatrix load_features_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<double> values;
  std::size_t dim = 0;
  std::size_t rows = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view rest = trim(line);
    if (rest.empty()) continue;
    std::size_t cols = 0;
    while (true) {
      const auto comma = rest.find(',');
      std::string_view field = trim(rest.substr(0, comma));
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (field.empty() || ec == std::errc::invalid_argument || ptr != field.data() + field.size()) {
        throw FormatError(path + ":" + std::to_string(line_no) + ": non-numeric field \"" + std::string(field) + "\"");
      }
      if (ec == std::errc::result_out_of_range || !std::isfinite(v)) {
        throw DataError(path + ":" + std::to_string(line_no) + ": non-finite value");
      }
      values.push_back(v);
      ++cols;
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    if (rows == 0) {
      dim = cols;
    } else if (cols != dim) {
      throw DataError(path + ":" + std::to_string(line_no) + ": ragged row with " + std::to_string(cols) +
                      " columns, expected " + std::to_string(dim));
    }
    ++rows;
  }
  if (rows == 0) throw DataError(path + ": no rows");
  return FeatureMatrix(rows, dim, std::move(values));
}

void write_features_csv(const FeatureMatrix& m, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  char buf[64];
  for (std::size_t i = 0; i < m.n_items(); ++i) {
    auto row = m.row(i);
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out.put(',');
      auto res = std::to_chars(buf, buf + sizeof(buf), row[k]);
      out.write(buf, res.ptr - buf);
    }
    out.put('\n');
  }
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace

FeatureFormat feature_format_from_path(const std::string& path) {
  const auto dot = path.rfind('.');
  if (dot != std::string::npos && path.substr(dot) == ".csv") return FeatureFormat::kCsv;
  return FeatureFormat::kBinary;
}

FeatureMatrix load_features(const std::string& path, FeatureFormat format) {
  return format == FeatureFormat::kCsv ? load_features_csv(path) : load_features_binary(path);
}

void write_features(const FeatureMatrix& m, const std::string& path, FeatureFormat format) {
  if (format == FeatureFormat::kCsv) {
    write_features_csv(m, path);
    return;
  }
  if (m.dim() > std::numeric_limits<std::uint32_t>::max()) throw DataError("dimension exceeds u32");
  detail::BinaryWriter out(path);
  out.magic(kFeatureMagic);
  out.u64(m.n_items());
  out.u32(static_cast<std::uint32_t>(m.dim()));
  for (double v : m.values()) out.f32(static_cast<float>(v));
  out.close();
}

BinaryCodeSet load_codes(const std::string& path) {
  detail::BinaryReader in(path);
  in.expect_magic(kCodeMagic);
  const std::uint64_t n = in.u64();
  const std::uint32_t len = in.u32();
  if (n == 0 || len == 0) throw FormatError(path + ": header declares an empty code set");
  std::vector<std::uint8_t> packed(n * packed_bytes(len));
  in.raw(packed.data(), packed.size());
  in.expect_eof();
  return BinaryCodeSet(n, len, std::move(packed));
}

void write_codes(const BinaryCodeSet& codes, const std::string& path) {
  if (codes.n_items() == 0) throw DataError("refusing to write an empty code set");
  detail::BinaryWriter out(path);
  out.magic(kCodeMagic);
  out.u64(codes.n_items());
  out.u32(static_cast<std::uint32_t>(codes.code_len()));
  out.raw(codes.packed().data(), codes.packed().size());
  out.close();
}

LabelSet load_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  LabelSet out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view s = trim(line);
    if (s.empty()) continue;
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
      throw FormatError(path + ":" + std::to_string(line_no) + ": not an integer label \"" + std::string(s) + "\"");
    }
    out.labels.push_back(v);
  }
  if (out.labels.empty()) throw DataError(path + ": no labels");
  return out;
}

void write_labels(const LabelSet& labels, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  for (auto v : labels.labels) out << v << '\n';
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace ddh
