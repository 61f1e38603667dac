#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "wmark/image.hpp"

namespace wmark::test {

inline GrayImage random_image(std::mt19937_64& rng, std::size_t w, std::size_t h) {
  std::uniform_int_distribution<int> px(0, 255);
  std::vector<std::uint8_t> pixels(w * h);
  for (auto& p : pixels) p = static_cast<std::uint8_t>(px(rng));
  return GrayImage(w, h, std::move(pixels));
}

/// Smooth-ish texture: a random gradient plus bounded noise. Closer to a
/// photograph than white noise, and exercises pairs with small differences.
inline GrayImage random_natural_image(std::mt19937_64& rng, std::size_t w, std::size_t h) {
  std::uniform_real_distribution<double> slope(-1.0, 1.0);
  std::uniform_int_distribution<int> base(30, 225), noise(-6, 6);
  const double sx = slope(rng), sy = slope(rng);
  const int b = base(rng);
  std::vector<std::uint8_t> pixels(w * h);
  for (std::size_t y = 0; y < h; ++y)
    for (std::size_t x = 0; x < w; ++x) {
      int v = b + static_cast<int>(sx * static_cast<double>(x) + sy * static_cast<double>(y)) + noise(rng);
      pixels[y * w + x] = static_cast<std::uint8_t>(std::clamp(v, 0, 255));
    }
  return GrayImage(w, h, std::move(pixels));
}

inline BitPayload random_bits(std::mt19937_64& rng, std::size_t n) {
  std::bernoulli_distribution coin(0.5);
  BitPayload p;
  p.bits.resize(n);
  for (auto& b : p.bits) b = coin(rng) ? 1 : 0;
  return p;
}

/// A payload as produced by payload_from_image: random w x h binary watermark.
inline BitPayload random_watermark_payload(std::mt19937_64& rng, std::size_t w, std::size_t h) {
  return payload_from_image(random_image(rng, w, h));
}

}  // namespace wmark::test
