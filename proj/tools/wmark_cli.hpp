#pragma once

// Command-line front end: embed / extract / restore / metrics / histogram /
// capacity over PGM files. Kept in a header so the test suites can drive it
// in-process.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "wmark/wmark.hpp"

namespace wmark::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kFormat = 3,
  kCapacity = 4,
  kGeometry = 5,
};

inline int exit_code_for(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument:
      return kUsage;
    case Errc::CapacityExceeded:
      return kCapacity;
    case Errc::OddDimensions:
    case Errc::GeometryMismatch:
    case Errc::MapInconsistent:
    case Errc::DimensionMismatch:
    case Errc::RangeViolation:
      return kGeometry;
    default:
      return kFormat;
  }
}

inline std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline GrayImage read_image(const std::string& path) {
  try {
    return read_pgm(read_file(path));
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

/// Output files staged in memory and published together: each is written to a
/// temporary sibling and renamed into place only once every write succeeded.
class OutputSet {
 public:
  void add(std::string path, std::vector<std::uint8_t> bytes) { files_.emplace_back(std::move(path), std::move(bytes)); }
  void add(std::string path, const std::string& text) { add(std::move(path), std::vector<std::uint8_t>(text.begin(), text.end())); }

  void commit() {
    std::vector<std::filesystem::path> temps;
    try {
      for (const auto& [path, bytes] : files_) {
        std::filesystem::path tmp = path + ".tmp";
        temps.push_back(tmp);
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        out.close();
        if (!out) throw Error(Errc::Io, "cannot write " + path);
      }
      for (std::size_t i = 0; i < files_.size(); ++i) std::filesystem::rename(temps[i], files_[i].first);
    } catch (const std::filesystem::filesystem_error& e) {
      discard(temps);
      throw Error(Errc::Io, e.what());
    } catch (...) {
      discard(temps);
      throw;
    }
  }

 private:
  static void discard(const std::vector<std::filesystem::path>& temps) {
    std::error_code ec;
    for (const auto& t : temps) std::filesystem::remove(t, ec);
  }

  std::vector<std::pair<std::string, std::vector<std::uint8_t>>> files_;
};

struct Options {
  std::string method;
  std::string cover, watermark, stego, out, meta, image, recovered;
  std::optional<double> delta;
  std::string subband = "hl";
  std::string dct_pos = "4,3";
  std::uint64_t key = 0;
  std::optional<std::size_t> nbits;
};

inline Method require_method(const Options& o) {
  if (auto m = parse_method(o.method)) return *m;
  throw Error(Errc::InvalidArgument, "unknown method '" + o.method + "' (expected lsb, de, dwt or dct)");
}

inline EmbedParams make_params(const Options& o, Method m) {
  EmbedParams p = m == Method::Dwt ? default_dwt_params() : default_dct_params();
  if (o.delta) p.delta = *o.delta;
  if (o.subband == "hl")
    p.subband = Subband::HL;
  else if (o.subband == "lh")
    p.subband = Subband::LH;
  else if (o.subband == "hh")
    p.subband = Subband::HH;
  else
    throw Error(Errc::InvalidArgument, "--subband must be hl, lh or hh");

  const auto comma = o.dct_pos.find(',');
  try {
    if (comma == std::string::npos) throw std::invalid_argument("comma");
    std::size_t used = 0;
    p.dct_pos.row = std::stoul(o.dct_pos.substr(0, comma), &used);
    if (used != comma) throw std::invalid_argument("row");
    const std::string col = o.dct_pos.substr(comma + 1);
    p.dct_pos.col = std::stoul(col, &used);
    if (used != col.size()) throw std::invalid_argument("col");
  } catch (const std::logic_error&) {
    throw Error(Errc::InvalidArgument, "--dct-pos must look like u,v");
  }
  p.key = o.key;
  return p;
}

inline std::string default_meta_path(const std::string& stego) { return stego + ".dem"; }

inline BitPayload extract_bits(Method m, const GrayImage& stego, std::size_t nbits, const EmbedParams& p) {
  switch (m) {
    case Method::Lsb: return lsb_extract(stego, nbits);
    case Method::Dwt: return dwt_extract(stego, nbits, p);
    case Method::Dct: return dct_extract(stego, nbits, p);
    case Method::De: break;
  }
  throw Error(Errc::InvalidArgument, "difference expansion extraction needs metadata");
}

inline std::string bits_to_text(const BitPayload& p) {
  std::string s;
  s.reserve(p.size() + 1);
  for (auto b : p.bits) s.push_back(b ? '1' : '0');
  s.push_back('\n');
  return s;
}

inline void cmd_embed(const Options& o, std::ostream& out) {
  const Method m = require_method(o);
  const EmbedParams params = make_params(o, m);
  const GrayImage cover = read_image(o.cover);
  const BitPayload payload = payload_from_image(read_image(o.watermark));

  OutputSet outputs;
  switch (m) {
    case Method::Lsb: outputs.add(o.out, write_pgm(lsb_embed(cover, payload))); break;
    case Method::Dwt: outputs.add(o.out, write_pgm(dwt_embed(cover, payload, params))); break;
    case Method::Dct: outputs.add(o.out, write_pgm(dct_embed(cover, payload, params))); break;
    case Method::De: {
      const DeEmbedResult r = de_embed(cover, payload);
      outputs.add(o.out, write_pgm(r.stego));
      outputs.add(o.meta.empty() ? default_meta_path(o.out) : o.meta, write_de_metadata(r.meta));
      break;
    }
  }
  outputs.commit();
  out << "embedded " << payload.size() << " bits (" << to_string(m) << ")\n";
}

inline void cmd_extract(const Options& o, std::ostream& out) {
  const Method m = require_method(o);
  const EmbedParams params = make_params(o, m);
  const GrayImage stego = read_image(o.stego);

  BitPayload bits;
  if (m == Method::De) {
    if (o.meta.empty()) throw Error(Errc::InvalidArgument, "--meta is required for method de");
    bits = de_extract_restore(stego, read_de_metadata(read_file(o.meta))).payload;
    if (o.nbits) {
      if (*o.nbits > bits.size()) throw Error(Errc::CapacityExceeded, "metadata records only " + std::to_string(bits.size()) + " bits");
      bits.bits.resize(*o.nbits);
    }
  } else if (o.nbits) {
    bits = extract_bits(m, stego, *o.nbits, params);
  } else {
    const BitPayload header = extract_bits(m, stego, kPayloadHeaderBits, params);
    bits = extract_bits(m, stego, payload_length_from_header(header.bits), params);
  }

  OutputSet outputs;
  if (o.nbits)
    outputs.add(o.out, bits_to_text(bits));
  else
    outputs.add(o.out, write_pgm(image_from_payload(bits)));
  outputs.commit();
  out << "extracted " << bits.size() << " bits (" << to_string(m) << ")\n";
}

inline void cmd_restore(const Options& o, std::ostream& out) {
  const GrayImage stego = read_image(o.stego);
  const DeMetadata meta = read_de_metadata(read_file(o.meta.empty() ? default_meta_path(o.stego) : o.meta));
  const DeRestoreResult r = de_extract_restore(stego, meta);
  OutputSet outputs;
  outputs.add(o.out, write_pgm(r.cover));
  outputs.commit();
  out << "restored cover, recovered " << r.payload.size() << " bits\n";
}

inline void cmd_metrics(const Options& o, std::ostream& out) {
  const GrayImage a = read_image(o.cover);
  const GrayImage b = read_image(o.stego);
  nlohmann::ordered_json j = to_json(quality_report(a, b));
  if (!o.watermark.empty() || !o.recovered.empty()) {
    if (o.watermark.empty() || o.recovered.empty())
      throw Error(Errc::InvalidArgument, "--watermark and --recovered go together");
    j["ber"] = ber(payload_from_image(read_image(o.watermark)), payload_from_image(read_image(o.recovered)));
  }
  out << j.dump() << "\n";
}

inline void cmd_histogram(const Options& o, std::ostream&) {
  const GrayImage img = read_image(o.image);
  OutputSet outputs;
  outputs.add(o.out, histogram_csv(histogram(img)));
  outputs.commit();
}

inline void cmd_capacity(const Options& o, std::ostream& out) {
  const Method m = require_method(o);
  out << capacity(m, read_image(o.cover)) << "\n";
}

/// Runs one invocation; args excludes the program name. Returns the exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Grayscale image watermarking", "wmark"};
  app.require_subcommand(1);
  Options o;

  auto add_params = [&o](CLI::App* sub) {
    sub->add_option("--delta", o.delta, "QIM step (default 8 for dct, 16 for dwt)");
    sub->add_option("--subband", o.subband, "Haar band for dwt: hl, lh or hh")->capture_default_str();
    sub->add_option("--dct-pos", o.dct_pos, "carrier coefficient u,v inside each 8x8 block")->capture_default_str();
    sub->add_option("--key", o.key, "64-bit permutation key, 0 keeps raster order")->capture_default_str();
  };

  auto* embed = app.add_subcommand("embed", "hide a binarized watermark image in a cover");
  embed->add_option("--method", o.method, "lsb, de, dwt or dct")->required();
  embed->add_option("--cover", o.cover, "cover PGM")->required();
  embed->add_option("--watermark", o.watermark, "watermark PGM")->required();
  embed->add_option("--out", o.out, "stego PGM")->required();
  embed->add_option("--meta", o.meta, "difference expansion sidecar (default <out>.dem)");
  add_params(embed);

  auto* extract = app.add_subcommand("extract", "recover the watermark image from a stego image");
  extract->add_option("--method", o.method, "lsb, de, dwt or dct")->required();
  extract->add_option("--stego", o.stego, "stego PGM")->required();
  extract->add_option("--out", o.out, "recovered watermark PGM, or bit text with --nbits")->required();
  extract->add_option("--meta", o.meta, "difference expansion sidecar");
  extract->add_option("--nbits", o.nbits, "read this many raw bits instead of a sized watermark");
  add_params(extract);

  auto* restore = app.add_subcommand("restore", "undo a difference expansion embedding");
  restore->add_option("--stego", o.stego, "stego PGM")->required();
  restore->add_option("--meta", o.meta, "sidecar written by embed (default <stego>.dem)");
  restore->add_option("--out", o.out, "restored cover PGM")->required();

  auto* metrics = app.add_subcommand("metrics", "print MSE / PSNR / max difference as JSON");
  metrics->add_option("--cover", o.cover, "reference PGM")->required();
  metrics->add_option("--stego", o.stego, "compared PGM")->required();
  metrics->add_option("--watermark", o.watermark, "original watermark PGM, adds \"ber\"");
  metrics->add_option("--recovered", o.recovered, "extracted watermark PGM, adds \"ber\"");

  auto* hist = app.add_subcommand("histogram", "write a 256-line value,count CSV");
  hist->add_option("--image", o.image, "input PGM")->required();
  hist->add_option("--out", o.out, "CSV path")->required();

  auto* cap = app.add_subcommand("capacity", "print the bit capacity of a cover");
  cap->add_option("--method", o.method, "lsb, de, dwt or dct")->required();
  cap->add_option("--cover", o.cover, "cover PGM")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "wmark: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*embed) cmd_embed(o, out);
    else if (*extract) cmd_extract(o, out);
    else if (*restore) cmd_restore(o, out);
    else if (*metrics) cmd_metrics(o, out);
    else if (*hist) cmd_histogram(o, out);
    else if (*cap) cmd_capacity(o, out);
  } catch (const Error& e) {
    err << "wmark: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "wmark: " << e.what() << "\n";
    return kFormat;
  }
  return kOk;
}

}  // namespace wmark::cli
