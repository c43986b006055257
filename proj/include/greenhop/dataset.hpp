#pragma once

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "greenhop/errors.hpp"
#include "greenhop/point_cloud.hpp"
#include "greenhop/strings.hpp"

namespace greenhop {

struct DatasetEntry {
  std::string path;      // as written in the manifest
  std::string resolved;  // absolute path used for loading
  std::string class_name;
  int class_id = -1;
};

/// Ordered dataset listing. Manifest order defines sample order everywhere:
/// training, evaluation and reports never reorder entries.
struct DatasetManifest {
  std::vector<DatasetEntry> entries;
  std::vector<std::string> class_names;
  std::string split;  // informational: "train", "test" or empty

  std::size_t size() const { return entries.size(); }
};

inline bool valid_class_name(const std::string& name) {
  if (name.empty()) return false;
  for (char ch : name) {
    const bool ok = (ch >= 'A' && ch <= 'Z') || (ch >= 'a' && ch <= 'z') ||
                    (ch >= '0' && ch <= '9') || ch == '_' || ch == '.' || ch == '-';
    if (!ok) return false;
  }
  return true;
}

/// Manifest grammar: one `path<TAB>class_name` per line, '#' lines are
/// comments, and an optional `#classes: a,b,c` header pins the class-id
/// order. Without the header, ids follow first appearance.
inline DatasetManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open manifest '" + path + "'");
  const std::filesystem::path base = std::filesystem::absolute(path).parent_path();

  DatasetManifest m;
  bool header_classes = false;
  std::set<std::string> seen_paths;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) {
    throw DataError(path + ":" + std::to_string(line_no) + ": " + what);
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || trim(line).empty()) continue;
    if (line[0] == '#') {
      const std::string header = "#classes:";
      if (line.rfind(header, 0) == 0 && !header_classes) {
        for (const std::string& token : split(line.substr(header.size()), ',')) {
          const std::string name(trim(token));
          if (!valid_class_name(name)) fail("bad class name '" + name + "' in header");
          if (std::find(m.class_names.begin(), m.class_names.end(), name) !=
              m.class_names.end())
            fail("duplicate class '" + name + "' in header");
          m.class_names.push_back(name);
        }
        if (m.class_names.empty()) fail("empty class header");
        header_classes = true;
      }
      continue;
    }

    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) fail("expected 'path<TAB>class_name'");
    DatasetEntry entry;
    entry.path = std::string(trim(line.substr(0, tab)));
    entry.class_name = std::string(trim(line.substr(tab + 1)));
    if (entry.path.empty()) fail("empty path field");
    if (!valid_class_name(entry.class_name))
      fail("bad class name '" + entry.class_name + "'");

    const std::filesystem::path resolved =
        std::filesystem::path(entry.path).is_absolute() ? std::filesystem::path(entry.path)
                                                        : base / entry.path;
    entry.resolved = resolved.lexically_normal().string();
    if (!seen_paths.insert(entry.resolved).second)
      fail("duplicate path '" + entry.path + "'");
    if (!std::ifstream(entry.resolved)) fail("unreadable point file '" + entry.path + "'");

    auto it = std::find(m.class_names.begin(), m.class_names.end(), entry.class_name);
    if (it == m.class_names.end()) {
      if (header_classes) fail("class '" + entry.class_name + "' not in header");
      m.class_names.push_back(entry.class_name);
      entry.class_id = static_cast<int>(m.class_names.size()) - 1;
    } else {
      entry.class_id = static_cast<int>(it - m.class_names.begin());
    }
    m.entries.push_back(std::move(entry));
  }
  return m;
}

namespace detail {

inline std::uint32_t read_u32_le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

inline void write_u32_le(std::ostream& out, std::uint32_t v) {
  const char bytes[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                         static_cast<char>((v >> 16) & 0xff),
                         static_cast<char>((v >> 24) & 0xff)};
  out.write(bytes, 4);
}

}  // namespace detail

constexpr char kPointsBinaryMagic[4] = {'X', 'Y', 'Z', 'B'};

/// Reads either the text format (one `x y z` per line) or the binary format
/// ("XYZB", u32 count, 3*count little-endian f32). The binary magic is
/// sniffed, so callers never declare the encoding.
inline PointCloud load_points(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open point file '" + path + "'");

  char magic[4] = {0, 0, 0, 0};
  in.read(magic, 4);
  const bool binary = in.gcount() == 4 && std::equal(magic, magic + 4, kPointsBinaryMagic);

  PointCloud cloud;
  if (binary) {
    unsigned char raw[4];
    if (!in.read(reinterpret_cast<char*>(raw), 4))
      throw DataError(path + ": truncated binary header");
    const std::uint32_t count = detail::read_u32_le(raw);
    if (count == 0) throw InvalidInputError(path + ": empty point file");
    cloud.points.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
      double coords[3];
      for (int c = 0; c < 3; ++c) {
        if (!in.read(reinterpret_cast<char*>(raw), 4))
          throw DataError(path + ": binary payload shorter than declared count " +
                          std::to_string(count));
        coords[c] = static_cast<double>(std::bit_cast<float>(detail::read_u32_le(raw)));
      }
      cloud.points.emplace_back(coords[0], coords[1], coords[2]);
    }
    if (in.get() != std::ifstream::traits_type::eof())
      throw DataError(path + ": binary payload longer than declared count " +
                      std::to_string(count));
  } else {
    in.clear();
    in.seekg(0);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const std::string stripped(trim(line));
      if (stripped.empty()) continue;
      std::vector<std::string> fields;
      std::string token;
      for (char ch : stripped) {
        if (std::isspace(static_cast<unsigned char>(ch))) {
          if (!token.empty()) fields.push_back(std::exchange(token, {}));
        } else {
          token += ch;
        }
      }
      if (!token.empty()) fields.push_back(token);
      if (fields.size() != 3)
        throw DataError(path + ":" + std::to_string(line_no) + ": expected 'x y z', got " +
                        std::to_string(fields.size()) + " fields");
      double coords[3];
      for (int c = 0; c < 3; ++c) {
        try {
          coords[c] = parse_double_strict(fields[static_cast<std::size_t>(c)], "coordinate");
        } catch (const ConfigError& e) {
          throw DataError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
      }
      cloud.points.emplace_back(coords[0], coords[1], coords[2]);
    }
    if (cloud.empty()) throw InvalidInputError(path + ": empty point file");
  }

  for (const Point& p : cloud.points)
    if (!p.allFinite()) throw DataError(path + ": non-finite coordinate");
  return cloud;
}

/// %.17g per coordinate: doubles survive a text round trip bit-exactly.
inline void write_points_text(const PointCloud& cloud, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write point file '" + path + "'");
  for (const Point& p : cloud.points)
    out << format_double(p.x()) << " " << format_double(p.y()) << " " << format_double(p.z())
        << "\n";
  if (!out) throw DataError("failed writing point file '" + path + "'");
}

inline void write_points_binary(const PointCloud& cloud, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write point file '" + path + "'");
  out.write(kPointsBinaryMagic, 4);
  detail::write_u32_le(out, static_cast<std::uint32_t>(cloud.size()));
  for (const Point& p : cloud.points)
    for (int c = 0; c < 3; ++c)
      detail::write_u32_le(out, std::bit_cast<std::uint32_t>(static_cast<float>(p(c))));
  if (!out) throw DataError("failed writing point file '" + path + "'");
}

/// Converts a per-class folder tree of point files (text or binary) into the
/// canonical layout: dst/<class>/<stem>.xyz plus dst/manifest.tsv with a
/// #classes header. Classes and files are visited in sorted order, so reruns
/// produce identical bytes. Returns the manifest path.
inline std::string convert_tree(const std::string& src_dir, const std::string& dst_dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(src_dir))
    throw DataError("unrecognized layout: '" + src_dir + "' is not a directory");

  std::vector<std::string> classes;
  for (const auto& entry : fs::directory_iterator(src_dir))
    if (entry.is_directory()) classes.push_back(entry.path().filename().string());
  std::sort(classes.begin(), classes.end());
  if (classes.empty())
    throw DataError("unrecognized layout: '" + src_dir + "' has no class subdirectories");

  struct Row {
    std::string rel;
    std::string class_name;
  };
  std::vector<Row> rows;
  fs::create_directories(dst_dir);
  for (const std::string& class_name : classes) {
    if (!valid_class_name(class_name))
      throw DataError("bad class directory name '" + class_name + "'");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(fs::path(src_dir) / class_name))
      if (entry.is_regular_file()) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty())
      throw DataError("unrecognized layout: class directory '" + class_name + "' is empty");

    fs::create_directories(fs::path(dst_dir) / class_name);
    std::set<std::string> stems;
    for (const fs::path& file : files) {
      const std::string stem = file.stem().string();
      if (!stems.insert(stem).second)
        throw DataError("name collision: '" + class_name + "/" + stem +
                        "' produced by more than one source file");
      const PointCloud cloud = load_points(file.string());
      const std::string rel = class_name + "/" + stem + ".xyz";
      write_points_text(cloud, (fs::path(dst_dir) / rel).string());
      rows.push_back(Row{rel, class_name});
    }
  }

  const std::string manifest_path = (fs::path(dst_dir) / "manifest.tsv").string();
  std::ofstream out(manifest_path);
  if (!out) throw DataError("cannot write manifest '" + manifest_path + "'");
  out << "#classes:";
  for (std::size_t i = 0; i < classes.size(); ++i) out << (i ? "," : " ") << classes[i];
  out << "\n";
  for (const Row& row : rows) out << row.rel << "\t" << row.class_name << "\n";
  if (!out) throw DataError("failed writing manifest '" + manifest_path + "'");
  return manifest_path;
}

}  // namespace greenhop
