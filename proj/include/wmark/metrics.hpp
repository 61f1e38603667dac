#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"
#include "wmark/error.hpp"
#include "wmark/frequency.hpp"
#include "wmark/image.hpp"
#include "wmark/spatial.hpp"

namespace wmark {

enum class Method { Lsb, De, Dwt, Dct };

constexpr std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::Lsb: return "lsb";
    case Method::De: return "de";
    case Method::Dwt: return "dwt";
    case Method::Dct: return "dct";
  }
  return "?";
}

inline std::optional<Method> parse_method(std::string_view s) noexcept {
  if (s == "lsb") return Method::Lsb;
  if (s == "de") return Method::De;
  if (s == "dwt") return Method::Dwt;
  if (s == "dct") return Method::Dct;
  return std::nullopt;
}

namespace detail {

inline void check_same_shape(const GrayImage& a, const GrayImage& b) {
  if (a.width() != b.width() || a.height() != b.height())
    throw Error(Errc::DimensionMismatch, std::to_string(a.width()) + "x" + std::to_string(a.height()) + " vs " +
                                             std::to_string(b.width()) + "x" + std::to_string(b.height()));
}

}  // namespace detail

inline double mse(const GrayImage& a, const GrayImage& b) {
  detail::check_same_shape(a, b);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    sum += d * d;
  }
  return sum / static_cast<double>(a.size());
}

inline double psnr_from_mse(double m) noexcept {
  if (m == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / m);
}

/// Peak 255. Identical images give +infinity.
inline double psnr(const GrayImage& a, const GrayImage& b) { return psnr_from_mse(mse(a, b)); }

inline double ber(const BitPayload& sent, const BitPayload& received) {
  if (sent.size() != received.size())
    throw Error(Errc::LengthMismatch, "cannot compare " + std::to_string(sent.size()) + " bits with " +
                                          std::to_string(received.size()));
  if (sent.size() == 0) return 0.0;
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < sent.size(); ++i) wrong += (sent.bits[i] & 1) != (received.bits[i] & 1);
  return static_cast<double>(wrong) / static_cast<double>(sent.size());
}

using Histogram = std::array<std::uint64_t, 256>;

inline Histogram histogram(const GrayImage& img) {
  Histogram h{};
  for (std::uint8_t v : img.pixels()) ++h[v];
  return h;
}

/// 256 lines of "value,count".
inline std::string histogram_csv(const Histogram& h) {
  std::string out;
  for (std::size_t v = 0; v < h.size(); ++v) out += std::to_string(v) + "," + std::to_string(h[v]) + "\n";
  return out;
}

struct QualityReport {
  double mse = 0.0;
  double psnr_db = std::numeric_limits<double>::infinity();
  int max_abs_diff = 0;
};

inline QualityReport quality_report(const GrayImage& reference, const GrayImage& test) {
  QualityReport r;
  r.mse = mse(reference, test);
  r.psnr_db = psnr_from_mse(r.mse);
  for (std::size_t i = 0; i < reference.size(); ++i)
    r.max_abs_diff = std::max(r.max_abs_diff, std::abs(int{reference[i]} - int{test[i]}));
  return r;
}

/// {"mse": real, "psnr_db": real | "inf", "max_abs_diff": int}
inline nlohmann::ordered_json to_json(const QualityReport& r) {
  nlohmann::ordered_json j;
  j["mse"] = r.mse;
  if (std::isinf(r.psnr_db))
    j["psnr_db"] = "inf";
  else
    j["psnr_db"] = r.psnr_db;
  j["max_abs_diff"] = r.max_abs_diff;
  return j;
}

/// Bits a cover can carry. For difference expansion only pairs that accept
/// either bit value are counted, so any payload within the figure embeds.
inline std::size_t capacity(Method method, const GrayImage& cover) {
  switch (method) {
    case Method::Lsb: return cover.size();
    case Method::De: return de_capacity(cover);
    case Method::Dwt: return dwt_capacity(cover);
    case Method::Dct: return dct_capacity(cover);
  }
  return 0;
}

}  // namespace wmark
