#pragma once

#include <cctype>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wmark/error.hpp"

namespace wmark {

/// 8-bit single channel raster, row-major, top-left first.
class GrayImage {
 public:
  GrayImage() = default;

  GrayImage(std::size_t width, std::size_t height, std::uint8_t fill = 0)
      : GrayImage(width, height, std::vector<std::uint8_t>(width * height, fill)) {}

  GrayImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> pixels)
      : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (width_ == 0 || height_ == 0)
      throw Error(Errc::InvalidArgument, "image dimensions must be at least 1x1");
    if (pixels_.size() != width_ * height_)
      throw Error(Errc::LengthMismatch, "pixel count " + std::to_string(pixels_.size()) +
                                            " does not match " + std::to_string(width_) + "x" +
                                            std::to_string(height_));
  }

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return pixels_.size(); }
  bool empty() const noexcept { return pixels_.empty(); }

  std::uint8_t& at(std::size_t x, std::size_t y) { return pixels_[y * width_ + x]; }
  std::uint8_t at(std::size_t x, std::size_t y) const { return pixels_[y * width_ + x]; }

  std::uint8_t& operator[](std::size_t i) { return pixels_[i]; }
  std::uint8_t operator[](std::size_t i) const { return pixels_[i]; }

  std::span<std::uint8_t> pixels() noexcept { return pixels_; }
  std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

/// Ordered bit sequence; each element is 0 or 1.
struct BitPayload {
  std::vector<std::uint8_t> bits;

  std::uint32_t declared_len() const noexcept { return static_cast<std::uint32_t>(bits.size()); }
  std::size_t size() const noexcept { return bits.size(); }

  friend bool operator==(const BitPayload&, const BitPayload&) = default;
};

/// Bits in the serialized watermark header: 16-bit width then 16-bit height.
inline constexpr std::size_t kPayloadHeaderBits = 32;

namespace detail {

class PgmTokenizer {
 public:
  explicit PgmTokenizer(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  // Skips whitespace and '#' comments, then reads one unsigned decimal token.
  std::size_t next_number(const char* what) {
    skip_space_and_comments();
    if (pos_ >= bytes_.size())
      throw Error(Errc::MalformedHeader, std::string("missing ") + what);
    if (!std::isdigit(bytes_[pos_]))
      throw Error(Errc::MalformedHeader, std::string("expected a number for ") + what);
    std::size_t value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + static_cast<std::size_t>(bytes_[pos_] - '0');
      if (value > 0xFFFFFFFFu)
        throw Error(Errc::MalformedHeader, std::string(what) + " out of range");
      ++pos_;
    }
    if (pos_ < bytes_.size() && !std::isspace(bytes_[pos_]) && bytes_[pos_] != '#')
      throw Error(Errc::MalformedHeader, std::string("garbage after ") + what);
    return value;
  }

  std::size_t pos() const noexcept { return pos_; }
  void advance(std::size_t n) noexcept { pos_ += n; }
  bool at_end() const noexcept { return pos_ >= bytes_.size(); }

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
      } else {
        break;
      }
    }
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses a binary (P5) or ASCII (P2) graymap with maxval 255.
inline GrayImage read_pgm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '2'))
    throw Error(Errc::MalformedHeader, "expected magic P5 or P2");
  const bool binary = bytes[1] == '5';

  detail::PgmTokenizer tok(bytes.subspan(2));
  if (!tok.at_end() && !std::isspace(bytes[2]) && bytes[2] != '#')
    throw Error(Errc::MalformedHeader, "no separator after magic");
  const std::size_t width = tok.next_number("width");
  const std::size_t height = tok.next_number("height");
  const std::size_t maxval = tok.next_number("maxval");
  if (width == 0 || height == 0) throw Error(Errc::MalformedHeader, "zero image dimension");
  if (maxval != 255)
    throw Error(Errc::UnsupportedMaxval, "maxval " + std::to_string(maxval) + " is not 255");

  const std::size_t count = width * height;
  std::vector<std::uint8_t> pixels;
  pixels.reserve(count);

  if (binary) {
    // Exactly one whitespace byte separates maxval from the raster.
    const std::size_t start = 2 + tok.pos() + 1;
    if (start > bytes.size() || bytes.size() - start < count)
      throw Error(Errc::TruncatedData, "expected " + std::to_string(count) + " samples");
    pixels.assign(bytes.begin() + static_cast<std::ptrdiff_t>(start),
                  bytes.begin() + static_cast<std::ptrdiff_t>(start + count));
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      tok.skip_space_and_comments();
      if (tok.at_end())
        throw Error(Errc::TruncatedData, "expected " + std::to_string(count) + " samples, got " +
                                             std::to_string(i));
      const std::size_t v = tok.next_number("sample");
      if (v > 255) throw Error(Errc::MalformedHeader, "sample exceeds maxval");
      pixels.push_back(static_cast<std::uint8_t>(v));
    }
  }
  return GrayImage(width, height, std::move(pixels));
}

/// Serializes as "P5\n{w} {h}\n255\n" followed by the raw raster.
inline std::vector<std::uint8_t> write_pgm(const GrayImage& img) {
  const std::string header =
      "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.pixels().begin(), img.pixels().end());
  return out;
}

namespace detail {

inline void push_bits(std::vector<std::uint8_t>& bits, std::uint32_t value, int count) {
  for (int i = count - 1; i >= 0; --i) bits.push_back(static_cast<std::uint8_t>((value >> i) & 1u));
}

inline std::uint32_t read_bits(std::span<const std::uint8_t> bits, std::size_t offset, int count) {
  std::uint32_t value = 0;
  for (int i = 0; i < count; ++i) value = (value << 1) | (bits[offset + static_cast<std::size_t>(i)] & 1u);
  return value;
}

}  // namespace detail

/// Binarizes a watermark (>= 128 is a 1) behind a 16+16 bit dimension header.
inline BitPayload payload_from_image(const GrayImage& wm) {
  if (wm.width() > 0xFFFF || wm.height() > 0xFFFF)
    throw Error(Errc::DimensionOverflow, "watermark dimensions exceed 65535");
  BitPayload p;
  p.bits.reserve(kPayloadHeaderBits + wm.size());
  detail::push_bits(p.bits, static_cast<std::uint32_t>(wm.width()), 16);
  detail::push_bits(p.bits, static_cast<std::uint32_t>(wm.height()), 16);
  for (std::uint8_t v : wm.pixels()) p.bits.push_back(v >= 128 ? 1 : 0);
  return p;
}

/// Reads the dimension header from the first 32 bits and returns the total
/// payload length it implies.
inline std::size_t payload_length_from_header(std::span<const std::uint8_t> header_bits) {
  if (header_bits.size() < kPayloadHeaderBits)
    throw Error(Errc::BadHeader, "payload shorter than its 32-bit header");
  const std::uint32_t w = detail::read_bits(header_bits, 0, 16);
  const std::uint32_t h = detail::read_bits(header_bits, 16, 16);
  if (w == 0 || h == 0) throw Error(Errc::BadHeader, "zero watermark dimension in header");
  return kPayloadHeaderBits + std::size_t{w} * h;
}

inline GrayImage image_from_payload(const BitPayload& p) {
  const std::size_t expected = payload_length_from_header(p.bits);
  if (p.size() != expected)
    throw Error(Errc::LengthMismatch, "header implies " + std::to_string(expected) +
                                          " bits, payload has " + std::to_string(p.size()));
  const std::size_t w = detail::read_bits(p.bits, 0, 16);
  const std::size_t h = detail::read_bits(p.bits, 16, 16);
  std::vector<std::uint8_t> pixels(w * h);
  for (std::size_t i = 0; i < pixels.size(); ++i)
    pixels[i] = p.bits[kPayloadHeaderBits + i] ? 255 : 0;
  return GrayImage(w, h, std::move(pixels));
}

}  // namespace wmark
