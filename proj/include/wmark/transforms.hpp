#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <string>
#include <vector>

#include "wmark/error.hpp"
#include "wmark/image.hpp"

namespace wmark {

/// Round half away from zero, then clamp into the 8-bit range.
inline std::uint8_t to_pixel(double v) noexcept {
  const double r = std::round(v);
  return static_cast<std::uint8_t>(std::clamp(r, 0.0, 255.0));
}

// ---------------------------------------------------------------------------
// Single-level 2-D Haar transform, unnormalized integer sums and differences
// ---------------------------------------------------------------------------

/// Integer coefficient matrix, row-major.
struct Band {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::int32_t> values;

  Band() = default;
  Band(std::size_t w, std::size_t h) : width(w), height(h), values(w * h, 0) {}

  std::int32_t& at(std::size_t x, std::size_t y) { return values[y * width + x]; }
  std::int32_t at(std::size_t x, std::size_t y) const { return values[y * width + x]; }

  friend bool operator==(const Band&, const Band&) = default;
};

/// First letter names the horizontal filter, second the vertical one.
enum class Subband { LL, HL, LH, HH };

/// For 8-bit input LL lies in [0, 1020] and the detail bands in [-510, 510].
struct SubBands {
  std::size_t half_w = 0;
  std::size_t half_h = 0;
  Band ll, hl, lh, hh;

  Band& band(Subband s) {
    switch (s) {
      case Subband::LL: return ll;
      case Subband::HL: return hl;
      case Subband::LH: return lh;
      case Subband::HH: return hh;
    }
    return hl;
  }
  const Band& band(Subband s) const { return const_cast<SubBands*>(this)->band(s); }

  friend bool operator==(const SubBands&, const SubBands&) = default;
};

/// For each 2x2 block (a b / c d):
///   LL = a+b+c+d, HL = (a-b)+(c-d), LH = (a+b)-(c+d), HH = (a-b)-(c-d).
inline SubBands haar_forward(const GrayImage& img) {
  if (img.width() % 2 != 0 || img.height() % 2 != 0)
    throw Error(Errc::OddDimensions, "Haar transform needs even dimensions, got " +
                                         std::to_string(img.width()) + "x" + std::to_string(img.height()));
  SubBands sb;
  sb.half_w = img.width() / 2;
  sb.half_h = img.height() / 2;
  sb.ll = sb.hl = sb.lh = sb.hh = Band(sb.half_w, sb.half_h);
  for (std::size_t y = 0; y < sb.half_h; ++y) {
    for (std::size_t x = 0; x < sb.half_w; ++x) {
      const int a = img.at(2 * x, 2 * y), b = img.at(2 * x + 1, 2 * y);
      const int c = img.at(2 * x, 2 * y + 1), d = img.at(2 * x + 1, 2 * y + 1);
      sb.ll.at(x, y) = a + b + c + d;
      sb.hl.at(x, y) = (a - b) + (c - d);
      sb.lh.at(x, y) = (a + b) - (c + d);
      sb.hh.at(x, y) = (a - b) - (c - d);
    }
  }
  return sb;
}

namespace detail {

inline void check_band_shapes(const SubBands& sb) {
  for (const Band* b : {&sb.ll, &sb.hl, &sb.lh, &sb.hh})
    if (b->width != sb.half_w || b->height != sb.half_h || b->values.size() != sb.half_w * sb.half_h)
      throw Error(Errc::DimensionMismatch, "sub-band matrices disagree on dimensions");
  if (sb.half_w == 0 || sb.half_h == 0) throw Error(Errc::DimensionMismatch, "empty sub-bands");
}

template <class Emit>
void haar_synthesize(const SubBands& sb, Emit&& emit) {
  check_band_shapes(sb);
  for (std::size_t y = 0; y < sb.half_h; ++y) {
    for (std::size_t x = 0; x < sb.half_w; ++x) {
      const int ll = sb.ll.at(x, y), hl = sb.hl.at(x, y), lh = sb.lh.at(x, y), hh = sb.hh.at(x, y);
      emit(2 * x, 2 * y, ll + hl + lh + hh);
      emit(2 * x + 1, 2 * y, ll - hl + lh - hh);
      emit(2 * x, 2 * y + 1, ll + hl - lh - hh);
      emit(2 * x + 1, 2 * y + 1, ll - hl - lh + hh);
    }
  }
}

}  // namespace detail

/// Exact inverse. Every reconstructed sum must be a multiple of 4 landing in
/// [0, 1020]; otherwise the bands do not describe an 8-bit image.
inline GrayImage haar_inverse(const SubBands& sb) {
  detail::check_band_shapes(sb);
  GrayImage out(2 * sb.half_w, 2 * sb.half_h);
  detail::haar_synthesize(sb, [&](std::size_t x, std::size_t y, int four_times) {
    if (four_times % 4 != 0 || four_times < 0 || four_times > 4 * 255)
      throw Error(Errc::RangeViolation, "pixel (" + std::to_string(x) + "," + std::to_string(y) +
                                            ") reconstructs to " + std::to_string(four_times) + "/4");
    out.at(x, y) = static_cast<std::uint8_t>(four_times / 4);
  });
  return out;
}

/// Inverse for modified bands: divides by 4 in reals, rounds, clamps.
inline GrayImage haar_inverse_rounded(const SubBands& sb) {
  detail::check_band_shapes(sb);
  GrayImage out(2 * sb.half_w, 2 * sb.half_h);
  detail::haar_synthesize(sb, [&](std::size_t x, std::size_t y, int four_times) {
    out.at(x, y) = to_pixel(four_times / 4.0);
  });
  return out;
}

// ---------------------------------------------------------------------------
// Orthonormal 2-D DCT-II and its DCT-III inverse
// ---------------------------------------------------------------------------

/// n x n real matrix, row-major. The tag keeps sample and coefficient blocks
/// from being mixed up.
template <class Tag>
struct SquareBlock {
  std::size_t n = 0;
  std::vector<double> values;

  SquareBlock() = default;
  explicit SquareBlock(std::size_t size) : n(size), values(size * size, 0.0) {}

  double& at(std::size_t row, std::size_t col) { return values[row * n + col]; }
  double at(std::size_t row, std::size_t col) const { return values[row * n + col]; }

  friend bool operator==(const SquareBlock&, const SquareBlock&) = default;
};

using SampleBlock = SquareBlock<struct SampleTag>;
using CoeffBlock = SquareBlock<struct CoeffTag>;

inline constexpr std::size_t kDctBlock = 8;

namespace detail {

/// basis[k * n + x] = alpha(k) cos(pi (2x + 1) k / 2n), alpha(0) = sqrt(1/n),
/// alpha(k > 0) = sqrt(2/n).
inline std::vector<double> dct_basis(std::size_t n) {
  std::vector<double> basis(n * n);
  const double a0 = std::sqrt(1.0 / static_cast<double>(n));
  const double ak = std::sqrt(2.0 / static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t x = 0; x < n; ++x)
      basis[k * n + x] = (k == 0 ? a0 : ak) *
                         std::cos(std::numbers::pi * static_cast<double>((2 * x + 1) * k) /
                                  (2.0 * static_cast<double>(n)));
  return basis;
}

inline const std::vector<double>& cached_basis(std::size_t n) {
  if (n == kDctBlock) {
    static const std::vector<double> eight = dct_basis(kDctBlock);
    return eight;
  }
  thread_local std::size_t last_n = 0;
  thread_local std::vector<double> last;
  if (last_n != n) {
    last = dct_basis(n);
    last_n = n;
  }
  return last;
}

}  // namespace detail

/// DCT(i, j) = alpha(i) alpha(j) sum_x sum_y f(x, y) cos(pi(2x+1)i/2N) cos(pi(2y+1)j/2N),
/// with x and i indexing rows, y and j columns. Evaluated separably.
inline CoeffBlock dct2(const SampleBlock& block) {
  const std::size_t n = block.n;
  const std::vector<double>& c = detail::cached_basis(n);
  // tmp = C * F
  std::vector<double> tmp(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t x = 0; x < n; ++x) {
      const double cix = c[i * n + x];
      for (std::size_t y = 0; y < n; ++y) tmp[i * n + y] += cix * block.at(x, y);
    }
  // out = tmp * C^T
  CoeffBlock out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t y = 0; y < n; ++y) s += tmp[i * n + y] * c[j * n + y];
      out.at(i, j) = s;
    }
  return out;
}

/// f(x, y) = sum_i sum_j alpha(i) alpha(j) DCT(i, j) cos(pi(2x+1)i/2N) cos(pi(2y+1)j/2N).
/// Real valued; callers round and clamp when producing pixels.
inline SampleBlock idct2(const CoeffBlock& coeffs) {
  const std::size_t n = coeffs.n;
  const std::vector<double>& c = detail::cached_basis(n);
  // tmp = C^T * D
  std::vector<double> tmp(n * n, 0.0);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t i = 0; i < n; ++i) {
      const double cix = c[i * n + x];
      for (std::size_t j = 0; j < n; ++j) tmp[x * n + j] += cix * coeffs.at(i, j);
    }
  // out = tmp * C
  SampleBlock out(n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += tmp[x * n + j] * c[j * n + y];
      out.at(x, y) = s;
    }
  return out;
}

// ---------------------------------------------------------------------------
// Block partitioning with edge replication
// ---------------------------------------------------------------------------

struct BlockGrid {
  std::size_t n = kDctBlock;
  std::size_t width = 0;   // original, before padding
  std::size_t height = 0;
  std::size_t blocks_x = 0;
  std::size_t blocks_y = 0;
  std::vector<SampleBlock> blocks;  // raster order

  std::size_t padded_width() const noexcept { return blocks_x * n; }
  std::size_t padded_height() const noexcept { return blocks_y * n; }
};

/// Pads by replicating the last column/row up to a multiple of n, then cuts
/// n x n blocks in raster order.
inline BlockGrid partition_blocks(const GrayImage& img, std::size_t n = kDctBlock) {
  if (n == 0) throw Error(Errc::InvalidArgument, "block size must be positive");
  BlockGrid g;
  g.n = n;
  g.width = img.width();
  g.height = img.height();
  g.blocks_x = (img.width() + n - 1) / n;
  g.blocks_y = (img.height() + n - 1) / n;
  g.blocks.reserve(g.blocks_x * g.blocks_y);
  for (std::size_t by = 0; by < g.blocks_y; ++by)
    for (std::size_t bx = 0; bx < g.blocks_x; ++bx) {
      SampleBlock b(n);
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
          const std::size_t x = std::min(bx * n + c, img.width() - 1);
          const std::size_t y = std::min(by * n + r, img.height() - 1);
          b.at(r, c) = img.at(x, y);
        }
      g.blocks.push_back(std::move(b));
    }
  return g;
}

/// Writes the blocks back (rounded, clamped) and crops the padding away.
inline GrayImage reassemble_blocks(const BlockGrid& g) {
  if (g.blocks.size() != g.blocks_x * g.blocks_y)
    throw Error(Errc::DimensionMismatch, "block count does not match grid geometry");
  GrayImage out(g.width, g.height);
  for (std::size_t y = 0; y < g.height; ++y)
    for (std::size_t x = 0; x < g.width; ++x) {
      const SampleBlock& b = g.blocks[(y / g.n) * g.blocks_x + x / g.n];
      out.at(x, y) = to_pixel(b.at(y % g.n, x % g.n));
    }
  return out;
}

}  // namespace wmark
