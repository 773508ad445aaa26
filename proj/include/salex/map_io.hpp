#pragma once

#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "salex/grid_map.hpp"
#include "salex/pgm.hpp"

namespace salex {

enum class MapFormat { Ascii, Pgm };

// ASCII grid: first line "W H RES", then H rows of W glyphs.
// '.' = Free, '#' = Obstacle, '?' = Unknown; any other glyph maps to Unknown.
inline GridMap load_map_ascii(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw FormatError("ascii map: empty stream");
  std::istringstream hs(header);
  long long w = 0, h = 0;
  double res = 0.0;
  if (!(hs >> w >> h >> res))
    throw FormatError("ascii map: malformed header '" + header + "'");
  std::string extra;
  if (hs >> extra)
    throw FormatError("ascii map: trailing junk in header '" + header + "'");
  if (w <= 0 || h <= 0 || w > 1 << 20 || h > 1 << 20)
    throw FormatError("ascii map: bad dimensions");
  if (!(res > 0.0)) throw FormatError("ascii map: resolution must be > 0");

  GridMap map(static_cast<int>(w), static_cast<int>(h), res);
  for (int y = 0; y < map.height(); ++y) {
    std::string row;
    if (!std::getline(in, row))
      throw DimensionError("ascii map: expected " + std::to_string(h) +
                           " rows, got " + std::to_string(y));
    if (!row.empty() && row.back() == '\r') row.pop_back();
    if (static_cast<long long>(row.size()) != w)
      throw DimensionError("ascii map: row " + std::to_string(y) + " has " +
                           std::to_string(row.size()) + " glyphs, expected " +
                           std::to_string(w));
    for (int x = 0; x < map.width(); ++x) {
      CellState s = CellState::Unknown;
      if (row[x] == '.') s = CellState::Free;
      else if (row[x] == '#') s = CellState::Obstacle;
      map.set(x, y, s);
    }
  }
  return map;
}

inline void save_map_ascii(const GridMap& map, std::ostream& out) {
  char header[64];
  std::snprintf(header, sizeof(header), "%d %d %.17g", map.width(),
                map.height(), map.resolution());
  out << header << "\n";
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) out.put(glyph_of(map.at(x, y)));
    out.put('\n');
  }
}

// Sidecar metadata for PGM maps: key=value lines.
struct PgmMapMeta {
  double resolution = 0.1;
  int free_threshold = 250;      // pixel >= free_threshold -> Free
  int obstacle_threshold = 50;   // pixel <= obstacle_threshold -> Obstacle
};

inline PgmMapMeta parse_map_meta(std::istream& in) {
  PgmMapMeta meta;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw FormatError("map meta: expected key=value, got '" + line + "'");
    std::string key = line.substr(start, eq - start);
    std::string val = line.substr(eq + 1);
    auto trim = [](std::string& s) {
      std::size_t a = s.find_first_not_of(" \t");
      std::size_t b = s.find_last_not_of(" \t");
      s = (a == std::string::npos) ? "" : s.substr(a, b - a + 1);
    };
    trim(key);
    trim(val);
    try {
      if (key == "resolution") meta.resolution = std::stod(val);
      else if (key == "free_threshold") meta.free_threshold = std::stoi(val);
      else if (key == "obstacle_threshold") meta.obstacle_threshold = std::stoi(val);
      // unknown keys ignored
    } catch (...) {
      throw FormatError("map meta: bad value for " + key + ": '" + val + "'");
    }
  }
  if (!(meta.resolution > 0.0))
    throw FormatError("map meta: resolution must be > 0");
  return meta;
}

inline GridMap load_map_pgm(std::istream& pgm, std::istream& meta_in) {
  PgmImage img = read_pgm(pgm);
  PgmMapMeta meta = parse_map_meta(meta_in);
  GridMap map(img.width, img.height, meta.resolution);
  for (std::int32_t i = 0; i < map.size(); ++i) {
    int px = img.pixels[i];
    CellState s = CellState::Unknown;
    if (px >= meta.free_threshold) s = CellState::Free;
    else if (px <= meta.obstacle_threshold) s = CellState::Obstacle;
    map.set(i, s);
  }
  return map;
}

inline void save_map_pgm(const GridMap& map, std::ostream& pgm,
                         std::ostream& meta_out) {
  PgmImage img;
  img.width = map.width();
  img.height = map.height();
  img.maxval = 255;
  img.pixels.resize(map.cells().size());
  for (std::int32_t i = 0; i < map.size(); ++i) {
    switch (map.at(i)) {
      case CellState::Free: img.pixels[i] = 255; break;
      case CellState::Obstacle: img.pixels[i] = 0; break;
      default: img.pixels[i] = 127; break;
    }
  }
  write_pgm(img, pgm);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", map.resolution());
  meta_out << "resolution=" << buf << "\n"
           << "free_threshold=250\n"
           << "obstacle_threshold=50\n";
}

inline GridMap load_map(std::istream& in, MapFormat format,
                        std::istream* meta = nullptr) {
  if (format == MapFormat::Ascii) return load_map_ascii(in);
  if (meta == nullptr) throw ParamError("load_map: pgm requires a meta stream");
  return load_map_pgm(in, *meta);
}

// Sidecar path convention: maps/e1.pgm <-> maps/e1.meta
inline std::string meta_path_for(const std::string& pgm_path) {
  std::size_t dot = pgm_path.find_last_of('.');
  std::size_t slash = pgm_path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return pgm_path + ".meta";
  return pgm_path.substr(0, dot) + ".meta";
}

inline bool has_suffix(const std::string& s, const std::string& suf) {
  return s.size() >= suf.size() &&
         s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

// Loads a map from disk, picking the format from the file extension.
inline GridMap load_map_file(const std::string& path) {
  if (has_suffix(path, ".pgm")) {
    std::ifstream pgm(path, std::ios::binary);
    if (!pgm) throw FormatError("cannot open map file: " + path);
    std::ifstream meta(meta_path_for(path));
    if (!meta)
      throw FormatError("cannot open map meta file: " + meta_path_for(path));
    return load_map_pgm(pgm, meta);
  }
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open map file: " + path);
  return load_map_ascii(in);
}

inline void save_map_file(const GridMap& map, const std::string& path) {
  if (has_suffix(path, ".pgm")) {
    std::ofstream pgm(path, std::ios::binary);
    if (!pgm) throw FormatError("cannot write map file: " + path);
    std::ofstream meta(meta_path_for(path));
    if (!meta)
      throw FormatError("cannot write map meta file: " + meta_path_for(path));
    save_map_pgm(map, pgm, meta);
    return;
  }
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write map file: " + path);
  save_map_ascii(map, out);
}

}  // namespace salex
