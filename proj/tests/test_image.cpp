#include <gtest/gtest.h>

#include <random>
#include <string>
#include <vector>

#include "support.hpp"
#include "wmark/image.hpp"

namespace wmark {
namespace {

std::vector<std::uint8_t> bytes(const std::string& s) { return {s.begin(), s.end()}; }

Errc error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return Errc::Io;
}

TEST(ReadPgm, MinimalBinaryWhitePixel) {
  auto in = bytes("P5\n1 1\n255\n");
  in.push_back(0xFF);
  EXPECT_EQ(read_pgm(in), GrayImage(1, 1, std::vector<std::uint8_t>{255}));
}

TEST(ReadPgm, AsciiVariant) {
  EXPECT_EQ(read_pgm(bytes("P2\n2 1\n255\n0 128\n")), GrayImage(2, 1, std::vector<std::uint8_t>{0, 128}));
}

TEST(ReadPgm, CommentsBetweenHeaderTokens) {
  auto in = bytes("P5\n# made by hand\n2 # width\n1\n#maxval next\n255\n");
  in.push_back(3);
  in.push_back(4);
  EXPECT_EQ(read_pgm(in), GrayImage(2, 1, std::vector<std::uint8_t>{3, 4}));
}

TEST(ReadPgm, BinaryRasterMayStartWithWhitespaceOrHashBytes) {
  auto in = bytes("P5\n3 1\n255\n");
  in.insert(in.end(), {'\n', '#', ' '});
  EXPECT_EQ(read_pgm(in), GrayImage(3, 1, std::vector<std::uint8_t>{'\n', '#', ' '}));
}

TEST(ReadPgm, ShortBinaryRasterIsTruncated) {
  auto in = bytes("P5\n2 2\n255\n");
  in.insert(in.end(), {1, 2, 3});
  EXPECT_EQ(error_of([&] { read_pgm(in); }), Errc::TruncatedData);
}

TEST(ReadPgm, ShortAsciiRasterIsTruncated) {
  EXPECT_EQ(error_of([&] { read_pgm(bytes("P2\n2 2\n255\n1 2 3\n")); }), Errc::TruncatedData);
}

TEST(ReadPgm, RejectsBadMagicAndTokens) {
  EXPECT_EQ(error_of([&] { read_pgm(bytes("P6\n1 1\n255\n\xff")); }), Errc::MalformedHeader);
  EXPECT_EQ(error_of([&] { read_pgm(bytes("")); }), Errc::MalformedHeader);
  EXPECT_EQ(error_of([&] { read_pgm(bytes("P5\nx 1\n255\n")); }), Errc::MalformedHeader);
  EXPECT_EQ(error_of([&] { read_pgm(bytes("P5\n0 1\n255\n")); }), Errc::MalformedHeader);
  EXPECT_EQ(error_of([&] { read_pgm(bytes("P5\n1 1\n")); }), Errc::MalformedHeader);
  EXPECT_EQ(error_of([&] { read_pgm(bytes("P2\n1 1\n255\n300\n")); }), Errc::MalformedHeader);
}

TEST(ReadPgm, RejectsMaxvalOtherThan255) {
  EXPECT_EQ(error_of([&] { read_pgm(bytes("P5\n1 1\n65535\n\0\0")); }), Errc::UnsupportedMaxval);
  EXPECT_EQ(error_of([&] { read_pgm(bytes("P2\n1 1\n15\n3\n")); }), Errc::UnsupportedMaxval);
}

TEST(WritePgm, ExactBytes) {
  auto expected = bytes("P5\n1 1\n255\n");
  expected.push_back(0);
  EXPECT_EQ(write_pgm(GrayImage(1, 1, std::vector<std::uint8_t>{0})), expected);

  expected = bytes("P5\n2 1\n255\n");
  expected.insert(expected.end(), {7, 8});
  EXPECT_EQ(write_pgm(GrayImage(2, 1, std::vector<std::uint8_t>{7, 8})), expected);
}

TEST(WritePgm, RoundTripsRandomImages) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::size_t> dim(1, 40);
  for (int trial = 0; trial < 100; ++trial) {
    const GrayImage img = test::random_image(rng, dim(rng), dim(rng));
    ASSERT_EQ(read_pgm(write_pgm(img)), img);
  }
}

TEST(GrayImage, RejectsInconsistentPixelCount) {
  EXPECT_EQ(error_of([] { GrayImage(2, 2, std::vector<std::uint8_t>(3)); }), Errc::LengthMismatch);
  EXPECT_EQ(error_of([] { GrayImage(0, 2); }), Errc::InvalidArgument);
}

TEST(Payload, HeaderAndThreshold) {
  const BitPayload white = payload_from_image(GrayImage(1, 1, std::vector<std::uint8_t>{255}));
  const std::vector<std::uint8_t> header{0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1,
                                         0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1};
  ASSERT_EQ(white.declared_len(), 33u);
  EXPECT_TRUE(std::equal(header.begin(), header.end(), white.bits.begin()));
  EXPECT_EQ(white.bits.back(), 1);

  EXPECT_EQ(payload_from_image(GrayImage(1, 1, std::vector<std::uint8_t>{127})).bits.back(), 0);

  const BitPayload two = payload_from_image(GrayImage(2, 1, std::vector<std::uint8_t>{128, 0}));
  ASSERT_EQ(two.size(), 34u);
  EXPECT_EQ(two.bits[15], 0);  // width 2 = ...10
  EXPECT_EQ(two.bits[14], 1);
  EXPECT_EQ(two.bits[32], 1);
  EXPECT_EQ(two.bits[33], 0);
}

TEST(Payload, DimensionOverflow) {
  EXPECT_EQ(error_of([] { payload_from_image(GrayImage(65536, 1)); }), Errc::DimensionOverflow);
}

TEST(Payload, ImageFromPayloadBinarizes) {
  EXPECT_EQ(image_from_payload(payload_from_image(GrayImage(1, 1, std::vector<std::uint8_t>{255}))),
            GrayImage(1, 1, std::vector<std::uint8_t>{255}));
  EXPECT_EQ(image_from_payload(payload_from_image(GrayImage(1, 1, std::vector<std::uint8_t>{127}))),
            GrayImage(1, 1, std::vector<std::uint8_t>{0}));
}

TEST(Payload, ImageFromPayloadErrors) {
  EXPECT_EQ(error_of([] { image_from_payload(BitPayload{std::vector<std::uint8_t>(31)}); }), Errc::BadHeader);
  EXPECT_EQ(error_of([] { image_from_payload(BitPayload{std::vector<std::uint8_t>(40)}); }), Errc::BadHeader);
  BitPayload p = payload_from_image(GrayImage(3, 2));
  p.bits.push_back(1);
  EXPECT_EQ(error_of([&] { image_from_payload(p); }), Errc::LengthMismatch);
  p.bits.resize(p.size() - 2);
  EXPECT_EQ(error_of([&] { image_from_payload(p); }), Errc::LengthMismatch);
}

TEST(Payload, PayloadImagePayloadIsIdentity) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<std::size_t> dim(1, 30);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t w = dim(rng), h = dim(rng);
    BitPayload p = payload_from_image(GrayImage(w, h));
    const BitPayload body = test::random_bits(rng, w * h);
    std::copy(body.bits.begin(), body.bits.end(), p.bits.begin() + kPayloadHeaderBits);
    ASSERT_EQ(p.size(), kPayloadHeaderBits + w * h);
    ASSERT_EQ(payload_from_image(image_from_payload(p)), p);
  }
}

}  // namespace
}  // namespace wmark
