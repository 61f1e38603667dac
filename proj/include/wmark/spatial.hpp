#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wmark/error.hpp"
#include "wmark/image.hpp"

namespace wmark {

// ---------------------------------------------------------------------------
// Least significant bit insertion
// ---------------------------------------------------------------------------

/// Replaces the parity of the first payload.size() pixels (raster order)
/// with the payload bits. Capacity is one bit per pixel.
inline GrayImage lsb_embed(const GrayImage& cover, const BitPayload& payload) {
  if (payload.size() > cover.size())
    throw Error(Errc::CapacityExceeded, std::to_string(payload.size()) + " bits exceed LSB capacity " +
                                            std::to_string(cover.size()));
  GrayImage out = cover;
  for (std::size_t k = 0; k < payload.size(); ++k) {
    const int v = cover[k];
    out[k] = static_cast<std::uint8_t>(v - v % 2 + (payload.bits[k] & 1));
  }
  return out;
}

inline BitPayload lsb_extract(const GrayImage& stego, std::size_t nbits) {
  if (nbits > stego.size())
    throw Error(Errc::CapacityExceeded, std::to_string(nbits) + " bits exceed LSB capacity " +
                                            std::to_string(stego.size()));
  BitPayload p;
  p.bits.resize(nbits);
  for (std::size_t k = 0; k < nbits; ++k) p.bits[k] = stego[k] % 2;
  return p;
}

// ---------------------------------------------------------------------------
// Reversible difference expansion on horizontal pixel pairs
// ---------------------------------------------------------------------------

/// floor(a / 2) for signed a.
constexpr int floor_half(int a) noexcept { return a >= 0 ? a / 2 : -((-a + 1) / 2); }

/// An (x, y) pair with its integer average l = floor((x + y) / 2) and
/// difference h = x - y. The transform is exactly invertible:
/// x = l + floor((h + 1) / 2), y = l - floor(h / 2).
struct PixelPair {
  int x = 0;
  int y = 0;

  constexpr int l() const noexcept { return floor_half(x + y); }
  constexpr int h() const noexcept { return x - y; }

  static constexpr PixelPair from_average_difference(int l, int h) noexcept {
    return PixelPair{l + floor_half(h + 1), l - floor_half(h)};
  }

  constexpr bool in_range() const noexcept { return x >= 0 && x <= 255 && y >= 0 && y <= 255; }

  friend constexpr bool operator==(const PixelPair&, const PixelPair&) = default;
};

/// |2h + b| <= min(2(255 - l), 2l + 1). Whenever this holds, the expanded
/// pair stays inside [0, 255].
constexpr bool de_is_expandable_lh(int l, int h, int b) noexcept {
  const int bound = std::min(2 * (255 - l), 2 * l + 1);
  const int expanded = 2 * h + b;
  return (expanded < 0 ? -expanded : expanded) <= bound;
}

constexpr bool de_is_expandable(const PixelPair& pair, int b) noexcept {
  return de_is_expandable_lh(pair.l(), pair.h(), b);
}

/// Bit b folded into the difference: h' = 2h + b.
constexpr PixelPair de_expand(const PixelPair& pair, int b) noexcept {
  return PixelPair::from_average_difference(pair.l(), 2 * pair.h() + b);
}

/// Side information needed to undo a difference-expansion embedding.
struct DeMetadata {
  std::uint32_t pair_count = 0;
  std::uint32_t payload_len = 0;
  std::vector<std::uint8_t> location_map;  // one entry per pair, 1 = expanded

  friend bool operator==(const DeMetadata&, const DeMetadata&) = default;
};

/// Number of non-overlapping horizontal pairs: floor(width / 2) per row.
inline std::size_t de_pair_count(const GrayImage& img) noexcept { return (img.width() / 2) * img.height(); }

namespace detail {

inline std::pair<std::size_t, std::size_t> de_pair_offsets(const GrayImage& img, std::size_t pair) noexcept {
  const std::size_t per_row = img.width() / 2;
  const std::size_t row = pair / per_row;
  const std::size_t col = 2 * (pair % per_row);
  const std::size_t first = row * img.width() + col;
  return {first, first + 1};
}

}  // namespace detail

/// Pairs that accept either bit value. A payload no longer than this count
/// always embeds, whatever its bits.
inline std::size_t de_capacity(const GrayImage& cover) {
  std::size_t n = 0;
  for (std::size_t k = 0; k < de_pair_count(cover); ++k) {
    const auto [i, j] = detail::de_pair_offsets(cover, k);
    const PixelPair pair{cover[i], cover[j]};
    n += de_is_expandable(pair, 0) && de_is_expandable(pair, 1);
  }
  return n;
}

struct DeEmbedResult {
  GrayImage stego;
  DeMetadata meta;
};

/// Embeds payload bits in scan order, one per pair that is expandable for
/// the bit at hand; other pairs are left untouched and marked 0.
inline DeEmbedResult de_embed(const GrayImage& cover, const BitPayload& payload) {
  if (cover.width() < 2) throw Error(Errc::GeometryMismatch, "difference expansion needs width >= 2");
  const std::size_t pairs = de_pair_count(cover);

  DeEmbedResult r{cover, DeMetadata{static_cast<std::uint32_t>(pairs), payload.declared_len(),
                                    std::vector<std::uint8_t>(pairs, 0)}};
  std::size_t next = 0;
  for (std::size_t k = 0; k < pairs && next < payload.size(); ++k) {
    const auto [i, j] = detail::de_pair_offsets(cover, k);
    const PixelPair pair{cover[i], cover[j]};
    const int b = payload.bits[next] & 1;
    if (!de_is_expandable(pair, b)) continue;
    const PixelPair out = de_expand(pair, b);
    r.stego[i] = static_cast<std::uint8_t>(out.x);
    r.stego[j] = static_cast<std::uint8_t>(out.y);
    r.meta.location_map[k] = 1;
    ++next;
  }
  if (next < payload.size())
    throw Error(Errc::CapacityExceeded, "only " + std::to_string(next) + " of " +
                                            std::to_string(payload.size()) +
                                            " bits found an expandable pair");
  return r;
}

struct DeRestoreResult {
  BitPayload payload;
  GrayImage cover;
};

/// Reads the bit out of every mapped pair (b = h' - 2 floor(h'/2)), shrinks
/// the difference back to h = floor(h'/2) and rebuilds the original cover.
inline DeRestoreResult de_extract_restore(const GrayImage& stego, const DeMetadata& meta) {
  if (meta.pair_count != de_pair_count(stego) || meta.location_map.size() != meta.pair_count)
    throw Error(Errc::GeometryMismatch, "metadata describes " + std::to_string(meta.pair_count) +
                                            " pairs, image has " + std::to_string(de_pair_count(stego)));
  const auto mapped = static_cast<std::size_t>(std::count(meta.location_map.begin(), meta.location_map.end(), 1));
  if (mapped != meta.payload_len)
    throw Error(Errc::MapInconsistent, "location map marks " + std::to_string(mapped) + " pairs for a " +
                                           std::to_string(meta.payload_len) + "-bit payload");

  DeRestoreResult r{BitPayload{}, stego};
  r.payload.bits.reserve(meta.payload_len);
  for (std::size_t k = 0; k < meta.pair_count; ++k) {
    if (!meta.location_map[k]) continue;
    const auto [i, j] = detail::de_pair_offsets(stego, k);
    const PixelPair marked{stego[i], stego[j]};
    const int expanded = marked.h();
    const int h = floor_half(expanded);
    const PixelPair original = PixelPair::from_average_difference(marked.l(), h);
    if (!original.in_range())
      throw Error(Errc::MapInconsistent, "pair " + std::to_string(k) + " decodes outside [0,255]");
    r.payload.bits.push_back(static_cast<std::uint8_t>(expanded - 2 * h));
    r.cover[i] = static_cast<std::uint8_t>(original.x);
    r.cover[j] = static_cast<std::uint8_t>(original.y);
  }
  return r;
}

// ---------------------------------------------------------------------------
// DeMetadata sidecar: "DEM1", BE32 pair_count, BE32 payload_len, then the
// location map packed MSB first and zero padded to a whole byte.
// ---------------------------------------------------------------------------

inline std::vector<std::uint8_t> write_de_metadata(const DeMetadata& meta) {
  std::vector<std::uint8_t> out{'D', 'E', 'M', '1'};
  auto put32 = [&out](std::uint32_t v) {
    for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(v >> s));
  };
  put32(meta.pair_count);
  put32(meta.payload_len);
  const std::size_t packed = (meta.location_map.size() + 7) / 8;
  const std::size_t base = out.size();
  out.resize(base + packed, 0);
  for (std::size_t k = 0; k < meta.location_map.size(); ++k)
    if (meta.location_map[k]) out[base + k / 8] |= static_cast<std::uint8_t>(0x80u >> (k % 8));
  return out;
}

inline DeMetadata read_de_metadata(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12 || bytes[0] != 'D' || bytes[1] != 'E' || bytes[2] != 'M' || bytes[3] != '1')
    throw Error(Errc::BadMetadata, "missing DEM1 header");
  auto get32 = [&bytes](std::size_t at) {
    std::uint32_t v = 0;
    for (std::size_t i = 0; i < 4; ++i) v = (v << 8) | bytes[at + i];
    return v;
  };
  DeMetadata meta;
  meta.pair_count = get32(4);
  meta.payload_len = get32(8);
  const std::size_t packed = (std::size_t{meta.pair_count} + 7) / 8;
  if (bytes.size() != 12 + packed)
    throw Error(Errc::BadMetadata, "location map holds " + std::to_string(bytes.size() - 12) +
                                       " bytes, expected " + std::to_string(packed));
  meta.location_map.resize(meta.pair_count);
  for (std::size_t k = 0; k < meta.pair_count; ++k)
    meta.location_map[k] = (bytes[12 + k / 8] >> (7 - k % 8)) & 1u;
  if (meta.pair_count % 8 != 0 && (bytes.back() & (0xFFu >> (meta.pair_count % 8))) != 0)
    throw Error(Errc::BadMetadata, "nonzero padding bits in location map");
  return meta;
}

}  // namespace wmark
