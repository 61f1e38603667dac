#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "wmark/error.hpp"
#include "wmark/image.hpp"
#include "wmark/transforms.hpp"

namespace wmark {

// ---------------------------------------------------------------------------
// Quantization index modulation
// ---------------------------------------------------------------------------

/// Moves c to the nearest point of the lattice 2*delta*Z + b*delta.
/// |result - c| <= delta.
inline double qim_embed_value(double c, int b, double delta) {
  const double shift = (b & 1) * delta;
  return 2.0 * delta * std::round((c - shift) / (2.0 * delta)) + shift;
}

/// Parity of the nearest multiple of delta. Survives any perturbation of
/// magnitude below delta / 2 applied after qim_embed_value.
inline int qim_extract_value(double c, double delta) {
  const double q = std::round(c / delta);
  return std::fmod(std::fabs(q), 2.0) == 1.0 ? 1 : 0;
}

// ---------------------------------------------------------------------------
// Keyed embedding order
// ---------------------------------------------------------------------------

/// xorshift64 with shifts 13, 7, 17. Seed 0 is a fixed point, which is why a
/// zero key means "no permutation".
class Xorshift64 {
 public:
  explicit Xorshift64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    state_ ^= state_ << 13;
    state_ ^= state_ >> 7;
    state_ ^= state_ << 17;
    return state_;
  }

 private:
  std::uint64_t state_;
};

/// Positions 0..count-1 in the order payload bits visit them. Identity for
/// key 0, otherwise a Fisher-Yates shuffle from the last index down to 1
/// with j = next() mod (i + 1).
inline std::vector<std::size_t> embedding_order(std::size_t count, std::uint64_t key) {
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (key == 0 || count < 2) return order;
  Xorshift64 rng(key);
  for (std::size_t i = count - 1; i >= 1; --i) {
    const auto j = static_cast<std::size_t>(rng.next() % (static_cast<std::uint64_t>(i) + 1));
    std::swap(order[i], order[j]);
  }
  return order;
}

// ---------------------------------------------------------------------------
// Parameters
// ---------------------------------------------------------------------------

struct CoeffIndex {
  std::size_t row = 4;
  std::size_t col = 3;

  friend bool operator==(const CoeffIndex&, const CoeffIndex&) = default;
};

inline constexpr double kDefaultDctDelta = 8.0;
inline constexpr double kDefaultDwtDelta = 16.0;

struct EmbedParams {
  double delta = kDefaultDctDelta;
  CoeffIndex dct_pos{};
  Subband subband = Subband::HL;
  std::uint64_t key = 0;
};

inline EmbedParams default_dct_params() { return EmbedParams{}; }

inline EmbedParams default_dwt_params() {
  EmbedParams p;
  p.delta = kDefaultDwtDelta;
  return p;
}

namespace detail {

inline void check_common(const EmbedParams& p) {
  if (!(p.delta > 0.0) || !std::isfinite(p.delta))
    throw Error(Errc::InvalidArgument, "delta must be a positive finite number");
}

inline void check_dwt_params(const EmbedParams& p) {
  check_common(p);
  // Lattice points must be integers so the modified bands stay integral.
  if (p.delta != std::floor(p.delta) || std::fmod(p.delta, 2.0) != 0.0)
    throw Error(Errc::InvalidArgument, "DWT delta must be an even integer");
  if (p.subband == Subband::LL) throw Error(Errc::InvalidArgument, "the LL band cannot carry the watermark");
}

inline void check_dct_params(const EmbedParams& p) {
  check_common(p);
  if (p.dct_pos.row >= kDctBlock || p.dct_pos.col >= kDctBlock)
    throw Error(Errc::InvalidArgument, "DCT position outside the 8x8 block");
  if (p.dct_pos.row == 0 && p.dct_pos.col == 0)
    throw Error(Errc::InvalidArgument, "the DC coefficient cannot carry the watermark");
}

inline void check_capacity(std::size_t nbits, std::size_t capacity, const char* method) {
  if (nbits > capacity)
    throw Error(Errc::CapacityExceeded, std::to_string(nbits) + " bits exceed " + method + " capacity " +
                                            std::to_string(capacity));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Haar sub-band embedding
// ---------------------------------------------------------------------------

inline std::size_t dwt_capacity(const GrayImage& cover) {
  if (cover.width() % 2 != 0 || cover.height() % 2 != 0)
    throw Error(Errc::OddDimensions, "Haar embedding needs even dimensions, got " +
                                         std::to_string(cover.width()) + "x" + std::to_string(cover.height()));
  return (cover.width() / 2) * (cover.height() / 2);
}

inline GrayImage dwt_embed(const GrayImage& cover, const BitPayload& payload,
                           const EmbedParams& params = default_dwt_params()) {
  detail::check_dwt_params(params);
  const std::size_t capacity = dwt_capacity(cover);
  detail::check_capacity(payload.size(), capacity, "DWT");
  if (payload.size() == 0) return cover;

  SubBands sb = haar_forward(cover);
  Band& band = sb.band(params.subband);
  const std::vector<std::size_t> order = embedding_order(capacity, params.key);
  for (std::size_t k = 0; k < payload.size(); ++k) {
    std::int32_t& c = band.values[order[k]];
    c = static_cast<std::int32_t>(std::llround(qim_embed_value(c, payload.bits[k], params.delta)));
  }
  return haar_inverse_rounded(sb);
}

inline BitPayload dwt_extract(const GrayImage& stego, std::size_t nbits,
                              const EmbedParams& params = default_dwt_params()) {
  detail::check_dwt_params(params);
  const std::size_t capacity = dwt_capacity(stego);
  detail::check_capacity(nbits, capacity, "DWT");
  BitPayload p;
  if (nbits == 0) return p;

  const SubBands sb = haar_forward(stego);
  const Band& band = sb.band(params.subband);
  const std::vector<std::size_t> order = embedding_order(capacity, params.key);
  p.bits.resize(nbits);
  for (std::size_t k = 0; k < nbits; ++k)
    p.bits[k] = static_cast<std::uint8_t>(qim_extract_value(band.values[order[k]], params.delta));
  return p;
}

// ---------------------------------------------------------------------------
// 8x8 block DCT embedding, one bit per block
// ---------------------------------------------------------------------------

inline std::size_t dct_capacity(const GrayImage& cover) {
  return ((cover.width() + kDctBlock - 1) / kDctBlock) * ((cover.height() + kDctBlock - 1) / kDctBlock);
}

namespace detail {

inline constexpr int kMaxEmbedPasses = 4;

inline int read_block_bit(const SampleBlock& block, const EmbedParams& params) {
  return qim_extract_value(dct2(block).at(params.dct_pos.row, params.dct_pos.col), params.delta);
}

// Replicates the visible vw x vh corner over the rest of the block, as
// partition_blocks does for the stego image on the decoder side.
inline void replicate_edges(SampleBlock& block, std::size_t vw, std::size_t vh) {
  for (std::size_t r = 0; r < block.n; ++r)
    for (std::size_t c = 0; c < block.n; ++c)
      block.at(r, c) = block.at(std::min(r, vh - 1), std::min(c, vw - 1));
}

// Full block: quantize the carrier coefficient and return to rounded,
// clamped pixels. Rounding or clamping can knock the coefficient off its
// lattice, so the block is re-embedded from its pixel form a bounded number
// of times.
inline void embed_full_block_bit(SampleBlock& block, int bit, const EmbedParams& params) {
  for (int pass = 0; pass < kMaxEmbedPasses; ++pass) {
    CoeffBlock coeffs = dct2(block);
    double& c = coeffs.at(params.dct_pos.row, params.dct_pos.col);
    c = qim_embed_value(c, bit, params.delta);
    block = idct2(coeffs);
    for (double& v : block.values) v = to_pixel(v);
    if (read_block_bit(block, params) == bit) return;
  }
}

// Weight of each visible pixel in the carrier coefficient once the block has
// been padded by replication: the basis function folded onto the visible
// vw x vh corner. Zero outside it.
inline SampleBlock folded_basis(std::size_t vw, std::size_t vh, const EmbedParams& params) {
  const std::vector<double>& basis = cached_basis(kDctBlock);
  std::vector<double> rows(kDctBlock, 0.0), cols(kDctBlock, 0.0);
  for (std::size_t r = 0; r < kDctBlock; ++r) rows[std::min(r, vh - 1)] += basis[params.dct_pos.row * kDctBlock + r];
  for (std::size_t c = 0; c < kDctBlock; ++c) cols[std::min(c, vw - 1)] += basis[params.dct_pos.col * kDctBlock + c];
  SampleBlock w(kDctBlock);
  for (std::size_t r = 0; r < vh; ++r)
    for (std::size_t c = 0; c < vw; ++c) w.at(r, c) = rows[r] * cols[c];
  return w;
}

// Edge block: only the visible pixels survive cropping, and the decoder
// re-pads from them. Moves the visible pixels along the folded basis by the
// smallest amount that puts the coefficient on the lattice. A sliver one
// pixel wide (or tall) folds a non-DC basis to zero and cannot carry a bit.
inline void embed_edge_block_bit(SampleBlock& block, int bit, const EmbedParams& params, std::size_t vw,
                                 std::size_t vh) {
  const SampleBlock w = folded_basis(vw, vh, params);
  double norm = 0.0;
  for (double v : w.values) norm += v * v;
  if (norm < 1e-12) return;
  for (int pass = 0; pass < kMaxEmbedPasses; ++pass) {
    double c = 0.0;
    for (std::size_t i = 0; i < w.values.size(); ++i) c += w.values[i] * block.values[i];
    const double step = (qim_embed_value(c, bit, params.delta) - c) / norm;
    for (std::size_t i = 0; i < w.values.size(); ++i) block.values[i] = to_pixel(block.values[i] + step * w.values[i]);
    replicate_edges(block, vw, vh);
    if (read_block_bit(block, params) == bit) return;
  }
}

}  // namespace detail

inline GrayImage dct_embed(const GrayImage& cover, const BitPayload& payload,
                           const EmbedParams& params = default_dct_params()) {
  detail::check_dct_params(params);
  const std::size_t capacity = dct_capacity(cover);
  detail::check_capacity(payload.size(), capacity, "DCT");
  if (payload.size() == 0) return cover;

  BlockGrid grid = partition_blocks(cover, kDctBlock);
  const std::vector<std::size_t> order = embedding_order(capacity, params.key);
  for (std::size_t k = 0; k < payload.size(); ++k) {
    const std::size_t index = order[k];
    const std::size_t bx = index % grid.blocks_x, by = index / grid.blocks_x;
    const std::size_t vw = std::min(kDctBlock, grid.width - bx * kDctBlock);
    const std::size_t vh = std::min(kDctBlock, grid.height - by * kDctBlock);
    if (vw == kDctBlock && vh == kDctBlock)
      detail::embed_full_block_bit(grid.blocks[index], payload.bits[k], params);
    else
      detail::embed_edge_block_bit(grid.blocks[index], payload.bits[k], params, vw, vh);
  }
  return reassemble_blocks(grid);
}

inline BitPayload dct_extract(const GrayImage& stego, std::size_t nbits,
                              const EmbedParams& params = default_dct_params()) {
  detail::check_dct_params(params);
  const std::size_t capacity = dct_capacity(stego);
  detail::check_capacity(nbits, capacity, "DCT");
  BitPayload p;
  if (nbits == 0) return p;

  const BlockGrid grid = partition_blocks(stego, kDctBlock);
  const std::vector<std::size_t> order = embedding_order(capacity, params.key);
  p.bits.resize(nbits);
  for (std::size_t k = 0; k < nbits; ++k)
    p.bits[k] = static_cast<std::uint8_t>(detail::read_block_bit(grid.blocks[order[k]], params));
  return p;
}

}  // namespace wmark
