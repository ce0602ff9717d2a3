#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <random>

#include "ddh/errors.hpp"
#include "ddh/io.hpp"
#include "ddh/types.hpp"
#include "ddh/vector_math.hpp"
#include "oracles.hpp"

using namespace ddh;
using ddh::oracle::TempDir;

namespace {

void write_raw(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  out << bytes;
}

std::string feature_header(std::uint64_t n, std::uint32_t d) {
  std::string s = "DDHF";
  s.push_back('\x01');
  for (int k = 0; k < 8; ++k) s.push_back(static_cast<char>((n >> (8 * k)) & 0xFF));
  for (int k = 0; k < 4; ++k) s.push_back(static_cast<char>((d >> (8 * k)) & 0xFF));
  return s;
}

void append_f32(std::string& s, float v) {
  std::uint32_t u = 0;
  std::memcpy(&u, &v, 4);
  for (int k = 0; k < 4; ++k) s.push_back(static_cast<char>((u >> (8 * k)) & 0xFF));
}

}  // namespace

TEST(FeatureMatrix, RejectsEmptyAndNonFinite) {
  EXPECT_THROW(FeatureMatrix(0, 3, {}), DataError);
  EXPECT_THROW(FeatureMatrix(1, 0, {}), DataError);
  EXPECT_THROW(FeatureMatrix(1, 2, {1.0}), DataError);
  EXPECT_THROW(FeatureMatrix(1, 2, {1.0, std::nan("")}), DataError);
  EXPECT_THROW(FeatureMatrix(1, 1, {std::numeric_limits<double>::infinity()}), DataError);
}

TEST(FeatureIo, BinaryHeaderAndValuesBitExact) {
  TempDir tmp;
  const std::string path = tmp.file("m.ddhf");
  std::string bytes = feature_header(2, 3);
  const float vals[] = {1.5f, -0.0f, 3.25e-7f, 42.0f, -1.0f, 0.1f};
  for (float v : vals) append_f32(bytes, v);
  write_raw(path, bytes);

  const auto m = load_features(path, FeatureFormat::kBinary);
  ASSERT_EQ(m.n_items(), 2u);
  ASSERT_EQ(m.dim(), 3u);
  for (std::size_t k = 0; k < 6; ++k) {
    const float back = static_cast<float>(m.values()[k]);
    EXPECT_EQ(std::memcmp(&back, &vals[k], 4), 0) << k;
  }
  EXPECT_TRUE(std::signbit(m.row(0)[1]));
}

TEST(FeatureIo, BinaryRewriteIsByteIdentical) {
  TempDir tmp;
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::size_t> size(1, 20);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = size(rng);
    const std::size_t d = size(rng);
    std::string bytes = feature_header(n, static_cast<std::uint32_t>(d));
    std::normal_distribution<float> g(0.0f, 100.0f);
    for (std::size_t k = 0; k < n * d; ++k) append_f32(bytes, g(rng));
    const auto src = tmp.file("src.ddhf");
    const auto dst = tmp.file("dst.ddhf");
    write_raw(src, bytes);
    write_features(load_features(src, FeatureFormat::kBinary), dst);
    EXPECT_EQ(oracle::read_bytes(dst), bytes);
  }
}

TEST(FeatureIo, CsvParse) {
  TempDir tmp;
  const auto path = tmp.file("m.csv");
  write_raw(path, "1,0\n0,1\n");
  const auto m = load_features(path, FeatureFormat::kCsv);
  ASSERT_EQ(m.n_items(), 2u);
  ASSERT_EQ(m.dim(), 2u);
  EXPECT_EQ(m.values(), (std::vector<double>{1, 0, 0, 1}));
  EXPECT_EQ(feature_format_from_path(path), FeatureFormat::kCsv);
  EXPECT_EQ(feature_format_from_path("x.ddhf"), FeatureFormat::kBinary);
}

TEST(FeatureIo, CsvRoundTripExact) {
  TempDir tmp;
  std::mt19937_64 rng(3);
  const auto m = oracle::random_features(7, 5, rng);
  const auto path = tmp.file("r.csv");
  write_features(m, path, FeatureFormat::kCsv);
  EXPECT_EQ(load_features(path, FeatureFormat::kCsv), m);
}

TEST(FeatureIo, Errors) {
  TempDir tmp;
  const auto ragged = tmp.file("ragged.csv");
  write_raw(ragged, "1,2\n3\n");
  EXPECT_THROW(load_features(ragged, FeatureFormat::kCsv), DataError);

  const auto text = tmp.file("text.csv");
  write_raw(text, "1,abc\n");
  EXPECT_THROW(load_features(text, FeatureFormat::kCsv), FormatError);

  const auto nan_csv = tmp.file("nan.csv");
  write_raw(nan_csv, "1,nan\n");
  EXPECT_THROW(load_features(nan_csv, FeatureFormat::kCsv), DataError);

  const auto magic = tmp.file("bad.ddhf");
  write_raw(magic, "XXXX\x01");
  EXPECT_THROW(load_features(magic, FeatureFormat::kBinary), FormatError);

  std::string wrong_version = feature_header(1, 1);
  wrong_version[4] = '\x02';
  append_f32(wrong_version, 1.0f);
  const auto ver = tmp.file("ver.ddhf");
  write_raw(ver, wrong_version);
  EXPECT_THROW(load_features(ver, FeatureFormat::kBinary), FormatError);

  std::string truncated = feature_header(2, 2);
  append_f32(truncated, 1.0f);
  const auto trunc = tmp.file("trunc.ddhf");
  write_raw(trunc, truncated);
  EXPECT_THROW(load_features(trunc, FeatureFormat::kBinary), FormatError);

  std::string inf = feature_header(1, 1);
  append_f32(inf, std::numeric_limits<float>::infinity());
  const auto infp = tmp.file("inf.ddhf");
  write_raw(infp, inf);
  EXPECT_THROW(load_features(infp, FeatureFormat::kBinary), DataError);

  EXPECT_THROW(load_features(tmp.file("missing.ddhf"), FeatureFormat::kBinary), IoError);
}

TEST(CodeIo, PackingIsMsbFirstWithZeroPadding) {
  const std::vector<int> signs = {+1, -1, +1, +1};
  const auto set = BinaryCodeSet::from_codes(std::vector<BinaryCode>{BinaryCode::from_signs(signs)});
  ASSERT_EQ(set.packed().size(), 1u);
  EXPECT_EQ(set.packed()[0], 0b10110000);

  TempDir tmp;
  const auto path = tmp.file("c.ddhb");
  write_codes(set, path);
  const std::string bytes = oracle::read_bytes(path);
  const std::string expected = std::string("DDHB\x01", 5) + std::string("\x01\0\0\0\0\0\0\0", 8) +
                               std::string("\x04\0\0\0", 4) + std::string("\xB0", 1);
  EXPECT_EQ(bytes, expected);
}

TEST(CodeIo, EmptyCodeSetRejected) {
  EXPECT_THROW(BinaryCodeSet(0, 4, {}), DataError);
  EXPECT_THROW(BinaryCodeSet::from_codes(std::vector<BinaryCode>{}), DataError);
}

TEST(CodeIo, NonzeroPaddingRejected) {
  EXPECT_THROW(BinaryCodeSet(1, 4, {0b10110001}), DataError);
}

TEST(CodeIo, RandomOddLengthRoundTrip) {
  TempDir tmp;
  std::mt19937_64 rng(33);
  std::vector<BinaryCode> codes;
  for (int i = 0; i < 50; ++i) codes.push_back(BinaryCode::from_signs(oracle::random_signs(33, rng)));
  const auto set = BinaryCodeSet::from_codes(codes);
  const auto path = tmp.file("c33.ddhb");
  write_codes(set, path);
  const auto back = load_codes(path);
  EXPECT_EQ(back, set);
  for (std::size_t i = 0; i < codes.size(); ++i) {
    EXPECT_EQ(back.code(i), codes[i]);
    EXPECT_EQ(back.code(i).to_signs(), codes[i].to_signs());
  }
}

TEST(LabelIo, RoundTripAndErrors) {
  TempDir tmp;
  LabelSet labels{{3, -1, 0, 1234567890123}};
  const auto path = tmp.file("l.txt");
  write_labels(labels, path);
  EXPECT_EQ(oracle::read_bytes(path), "3\n-1\n0\n1234567890123\n");
  EXPECT_EQ(load_labels(path), labels);

  const auto bad = tmp.file("bad.txt");
  write_raw(bad, "1\nx\n");
  EXPECT_THROW(load_labels(bad), FormatError);
}

TEST(Cosine, Examples) {
  const std::vector<double> e1 = {1, 0}, e2 = {0, 1}, d = {1, 1};
  EXPECT_DOUBLE_EQ(cosine_similarity(e1, e1), 1.0);
  EXPECT_DOUBLE_EQ(cosine_similarity(e1, e2), 0.0);
  EXPECT_NEAR(cosine_similarity(d, e1), 0.70710678, 1e-8);
  EXPECT_NEAR(cosine_similarity(d, e1), 1.0 / std::sqrt(2.0), 1e-12);
}

TEST(Cosine, Errors) {
  const std::vector<double> z = {0, 0}, a = {1, 0}, b = {1, 0, 0};
  EXPECT_THROW(cosine_similarity(z, a), DomainError);
  EXPECT_THROW(cosine_similarity(a, b), ShapeError);
}

TEST(Cosine, SymmetricBoundedScaleFree) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> k(1e-3, 1e3);
  for (int t = 0; t < 500; ++t) {
    std::vector<double> a(9), b(9), ka(9);
    for (auto& v : a) v = g(rng);
    for (auto& v : b) v = g(rng);
    const double scale = k(rng);
    for (std::size_t i = 0; i < a.size(); ++i) ka[i] = scale * a[i];
    const double ab = cosine_similarity(a, b);
    EXPECT_NEAR(ab, cosine_similarity(b, a), 1e-12);
    EXPECT_LE(std::abs(ab), 1.0 + 1e-12);
    EXPECT_NEAR(cosine_similarity(a, ka), 1.0, 1e-9);
  }
}
