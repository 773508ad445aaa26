#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "salex/errors.hpp"

namespace salex {

// Minimal binary PGM (P5) reader/writer, maxval <= 255.
struct PgmImage {
  int width = 0;
  int height = 0;
  int maxval = 255;
  std::vector<std::uint8_t> pixels;  // row-major
};

namespace detail {

// Reads the next header token, skipping whitespace and '#' comments.
inline std::string pgm_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) continue;
    tok.push_back(static_cast<char>(c));
    while ((c = in.get()) != EOF && !std::isspace(c) && c != '#')
      tok.push_back(static_cast<char>(c));
    if (c == '#') in.unget();
    return tok;
  }
  throw FormatError("pgm: truncated header");
}

inline int pgm_int(std::istream& in) {
  std::string tok = pgm_token(in);
  try {
    std::size_t pos = 0;
    int v = std::stoi(tok, &pos);
    if (pos != tok.size()) throw FormatError("pgm: bad integer '" + tok + "'");
    return v;
  } catch (const FormatError&) {
    throw;
  } catch (...) {
    throw FormatError("pgm: bad integer '" + tok + "'");
  }
}

}  // namespace detail

inline PgmImage read_pgm(std::istream& in) {
  std::string magic = detail::pgm_token(in);
  if (magic != "P5") throw FormatError("pgm: expected P5, got '" + magic + "'");
  PgmImage img;
  img.width = detail::pgm_int(in);
  img.height = detail::pgm_int(in);
  img.maxval = detail::pgm_int(in);
  if (img.width <= 0 || img.height <= 0)
    throw FormatError("pgm: non-positive dimensions");
  if (img.maxval <= 0 || img.maxval > 255)
    throw FormatError("pgm: unsupported maxval " + std::to_string(img.maxval));
  // the whitespace terminating the maxval token is the header/raster separator
  std::size_t n = static_cast<std::size_t>(img.width) * img.height;
  img.pixels.resize(n);
  in.read(reinterpret_cast<char*>(img.pixels.data()),
          static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n)
    throw DimensionError("pgm: raster has " + std::to_string(in.gcount()) +
                         " bytes, expected " + std::to_string(n));
  return img;
}

inline void write_pgm(const PgmImage& img, std::ostream& out) {
  out << "P5\n" << img.width << " " << img.height << "\n" << img.maxval << "\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
}

}  // namespace salex
