#pragma once

#include <bit>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "greenhop/errors.hpp"
#include "greenhop/pipeline.hpp"
#include "greenhop/strings.hpp"

namespace greenhop {

constexpr int kModelFormatVersion = 1;

namespace detail {

inline std::uint64_t fnv1a64(const char* data, std::size_t size,
                             std::uint64_t hash = 0xcbf29ce484222325ull) {
  for (std::size_t i = 0; i < size; ++i) {
    hash ^= static_cast<unsigned char>(data[i]);
    hash *= 0x100000001b3ull;
  }
  return hash;
}

inline std::uint64_t fnv1a64(const std::string& bytes,
                             std::uint64_t hash = 0xcbf29ce484222325ull) {
  return fnv1a64(bytes.data(), bytes.size(), hash);
}

inline void append_u32_le(std::string& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8)
    out.push_back(static_cast<char>((v >> shift) & 0xff));
}

inline void append_f64_le(std::string& out, double v) {
  const std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  for (int shift = 0; shift < 64; shift += 8)
    out.push_back(static_cast<char>((bits >> shift) & 0xff));
}

/// Bounds-checked little-endian reader over the binary payload.
class PayloadReader {
 public:
  PayloadReader(const char* data, std::size_t size) : data_(data), size_(size) {}

  std::uint32_t read_u32() {
    require(4);
    std::uint32_t v = 0;
    for (int shift = 0; shift < 32; shift += 8)
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data_[pos_++])) << shift;
    return v;
  }

  double read_f64() {
    require(8);
    std::uint64_t bits = 0;
    for (int shift = 0; shift < 64; shift += 8)
      bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_++])) << shift;
    return std::bit_cast<double>(bits);
  }

  std::size_t remaining() const { return size_ - pos_; }

 private:
  void require(std::size_t n) const {
    if (size_ - pos_ < n) throw ModelTruncationError("model payload ends mid-array");
  }

  const char* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

struct ArrayDecl {
  std::string name;
  std::string type;  // "f64" or "u32"
  std::vector<std::uint64_t> dims;

  std::uint64_t element_count() const {
    std::uint64_t n = 1;
    for (std::uint64_t d : dims) n *= d;
    return n;
  }
  std::uint64_t byte_count() const { return element_count() * (type == "f64" ? 8 : 4); }
};

inline std::uint64_t parse_header_uint(const std::string& token, const char* what) {
  try {
    return parse_uint_strict(token, what);
  } catch (const ConfigError& e) {
    throw ModelFormatError(e.what());
  }
}

}  // namespace detail

/// Model file layout: a line-oriented text header (magic, format_version,
/// config key-values, class list, region list, array declarations, checksum)
/// terminated by an `end` line, then the raw little-endian arrays in declared
/// order. The FNV-1a64 checksum covers every header byte before the checksum
/// line plus the whole payload, so any single corrupted byte surfaces as a
/// typed load error.
inline void save_model(const PipelineModel& model, const std::string& path) {
  const std::size_t full_dim = model.full_feature_dim();
  const std::size_t n_sel = model.selected.size();
  const int n_classes = model.n_classes();

  std::ostringstream header;
  header << "GPH1\n";
  header << "format_version " << kModelFormatVersion << "\n";
  for (const std::string& key : config_keys())
    header << "config." << key << " " << get_config_value(model.config, key) << "\n";
  header << "classes ";
  for (int c = 0; c < n_classes; ++c)
    header << (c ? "," : "") << model.class_names[static_cast<std::size_t>(c)];
  header << "\n";
  for (const Region& r : model.regions) header << "region " << region_to_string(r) << "\n";
  header << "array saab_matrix f64 " << kDescriptorDim << " " << kDescriptorDim << "\n";
  header << "array saab_energy f64 " << kDescriptorDim << "\n";
  header << "array feat_mean f64 " << full_dim << "\n";
  header << "array feat_std f64 " << full_dim << "\n";
  header << "array selected u32 " << n_sel << "\n";
  header << "array weights f64 " << (n_sel + 1) << " " << n_classes << "\n";

  std::string payload;
  payload.reserve((kDescriptorDim * kDescriptorDim + kDescriptorDim + 2 * full_dim +
                   (n_sel + 1) * static_cast<std::size_t>(n_classes)) * 8 + n_sel * 4);
  for (int r = 0; r < kDescriptorDim; ++r)
    for (int c = 0; c < kDescriptorDim; ++c)
      detail::append_f64_le(payload, model.saab.matrix(r, c));
  for (int i = 0; i < kDescriptorDim; ++i)
    detail::append_f64_le(payload, model.saab.energies(i));
  for (std::size_t i = 0; i < full_dim; ++i)
    detail::append_f64_le(payload, model.standardizer.mean(static_cast<Eigen::Index>(i)));
  for (std::size_t i = 0; i < full_dim; ++i)
    detail::append_f64_le(payload, model.standardizer.std_dev(static_cast<Eigen::Index>(i)));
  for (std::uint32_t idx : model.selected) detail::append_u32_le(payload, idx);
  for (std::size_t r = 0; r <= n_sel; ++r)
    for (int c = 0; c < n_classes; ++c)
      detail::append_f64_le(payload,
                            model.classifier.weights(static_cast<Eigen::Index>(r), c));

  const std::uint64_t checksum = detail::fnv1a64(payload, detail::fnv1a64(header.str()));
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(checksum));
  header << "checksum fnv1a64 " << hex << "\n";
  header << "end\n";

  std::ofstream out(path, std::ios::binary);
  if (!out) throw ModelIoError("cannot write model file '" + path + "'");
  const std::string header_str = header.str();
  out.write(header_str.data(), static_cast<std::streamsize>(header_str.size()));
  out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  if (!out) throw ModelIoError("failed writing model file '" + path + "'");
}

inline PipelineModel load_model(const std::string& path) {
  std::string bytes;
  {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ModelIoError("cannot open model file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    bytes = buffer.str();
  }

  if (bytes.size() < 5 || bytes.compare(0, 5, "GPH1\n") != 0)
    throw ModelFormatError(path + ": not a model file (bad magic)");

  // Header scan: consume lines until `end`, remembering where the checksum
  // line starts so the covered byte range is known exactly.
  std::size_t pos = 5;
  std::vector<std::string> lines;
  std::size_t checksum_line_start = std::string::npos;
  std::string stored_checksum;
  bool saw_end = false;
  while (pos < bytes.size()) {
    const std::size_t nl = bytes.find('\n', pos);
    if (nl == std::string::npos) break;
    const std::string line = bytes.substr(pos, nl - pos);
    if (line == "end") {
      saw_end = true;
      pos = nl + 1;
      break;
    }
    if (line.rfind("checksum ", 0) == 0) {
      if (checksum_line_start != std::string::npos)
        throw ModelFormatError(path + ": repeated checksum line");
      const std::vector<std::string> tokens = split(line, ' ');
      if (tokens.size() != 3 || tokens[1] != "fnv1a64" || tokens[2].size() != 16)
        throw ModelFormatError(path + ": malformed checksum line");
      checksum_line_start = pos;
      stored_checksum = tokens[2];
    } else {
      if (checksum_line_start != std::string::npos)
        throw ModelFormatError(path + ": header continues after checksum line");
      lines.push_back(line);
    }
    pos = nl + 1;
  }
  if (!saw_end) throw ModelTruncationError(path + ": header ends before 'end'");
  if (checksum_line_start == std::string::npos)
    throw ModelFormatError(path + ": missing checksum line");

  if (lines.empty() || lines[0].rfind("format_version ", 0) != 0)
    throw ModelFormatError(path + ": missing format_version");
  const std::uint64_t version =
      detail::parse_header_uint(lines[0].substr(15), "format_version");
  if (version != static_cast<std::uint64_t>(kModelFormatVersion))
    throw ModelVersionError(path + ": unsupported format_version " + std::to_string(version) +
                            ", this build reads " + std::to_string(kModelFormatVersion));

  PipelineModel model;
  model.format_version = static_cast<int>(version);
  std::vector<detail::ArrayDecl> arrays;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    try {
      if (line.rfind("config.", 0) == 0) {
        const std::size_t space = line.find(' ');
        if (space == std::string::npos) throw ModelFormatError("bad config line");
        set_config_value(model.config, line.substr(7, space - 7), line.substr(space + 1));
      } else if (line.rfind("classes ", 0) == 0) {
        for (const std::string& token : split(line.substr(8), ',')) {
          const std::string name(trim(token));
          if (!valid_class_name(name)) throw ModelFormatError("bad class name '" + name + "'");
          model.class_names.push_back(name);
        }
      } else if (line.rfind("region ", 0) == 0) {
        model.regions.push_back(region_from_string(line.substr(7)));
      } else if (line.rfind("array ", 0) == 0) {
        const std::vector<std::string> tokens = split(line, ' ');
        if (tokens.size() < 4) throw ModelFormatError("bad array line '" + line + "'");
        detail::ArrayDecl decl;
        decl.name = tokens[1];
        decl.type = tokens[2];
        if (decl.type != "f64" && decl.type != "u32")
          throw ModelFormatError("unknown array type '" + decl.type + "'");
        for (std::size_t t = 3; t < tokens.size(); ++t)
          decl.dims.push_back(detail::parse_header_uint(tokens[t], "array dim"));
        arrays.push_back(std::move(decl));
      } else {
        throw ModelFormatError("unrecognized header line '" + line + "'");
      }
    } catch (const ConfigError& e) {
      throw ModelFormatError(path + ": " + e.what());
    } catch (const ModelFormatError& e) {
      throw ModelFormatError(path + ": " + e.what());
    }
  }

  // Structural expectations before touching the payload.
  auto fail = [&](const std::string& what) { throw ModelFormatError(path + ": " + what); };
  if (model.class_names.size() < 2) fail("model needs at least 2 classes");
  if (model.regions.empty()) fail("model needs at least one region");
  const std::size_t full_dim = model.full_feature_dim();
  const char* expected_names[6] = {"saab_matrix", "saab_energy", "feat_mean",
                                   "feat_std",    "selected",    "weights"};
  if (arrays.size() != 6) fail("expected 6 array declarations");
  for (int i = 0; i < 6; ++i)
    if (arrays[static_cast<std::size_t>(i)].name != expected_names[i])
      fail(std::string("unexpected array order, found '") +
           arrays[static_cast<std::size_t>(i)].name + "'");
  const auto dims_are = [&](int i, std::vector<std::uint64_t> want, const char* type) {
    const auto& a = arrays[static_cast<std::size_t>(i)];
    return a.type == type && a.dims == want;
  };
  const std::uint64_t dim64 = kDescriptorDim;
  if (!dims_are(0, {dim64, dim64}, "f64")) fail("saab_matrix must be f64 24x24");
  if (!dims_are(1, {dim64}, "f64")) fail("saab_energy must be f64 24");
  if (!dims_are(2, {full_dim}, "f64")) fail("feat_mean length must match the feature size");
  if (!dims_are(3, {full_dim}, "f64")) fail("feat_std length must match the feature size");
  const auto& sel_decl = arrays[4];
  if (sel_decl.type != "u32" || sel_decl.dims.size() != 1) fail("selected must be u32 vector");
  const std::uint64_t n_sel = sel_decl.dims[0];
  if (n_sel < 1 || n_sel > full_dim) fail("selected count out of range");
  if (!dims_are(5, {n_sel + 1, model.class_names.size()}, "f64"))
    fail("weights must be f64 (selected+1) x classes");

  std::uint64_t payload_size = 0;
  for (const auto& a : arrays) payload_size += a.byte_count();
  if (bytes.size() < pos + payload_size)
    throw ModelTruncationError(path + ": payload shorter than declared arrays");
  if (bytes.size() > pos + payload_size)
    throw ModelFormatError(path + ": trailing bytes after declared arrays");

  const std::uint64_t computed = detail::fnv1a64(
      bytes.data() + pos, payload_size, detail::fnv1a64(bytes.data(), checksum_line_start));
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(computed));
  if (stored_checksum != hex)
    throw ModelChecksumError(path + ": checksum mismatch (stored " + stored_checksum +
                             ", computed " + hex + ")");

  detail::PayloadReader reader(bytes.data() + pos, payload_size);
  for (int r = 0; r < kDescriptorDim; ++r)
    for (int c = 0; c < kDescriptorDim; ++c) model.saab.matrix(r, c) = reader.read_f64();
  for (int i = 0; i < kDescriptorDim; ++i) model.saab.energies(i) = reader.read_f64();
  model.standardizer.mean.resize(static_cast<Eigen::Index>(full_dim));
  model.standardizer.std_dev.resize(static_cast<Eigen::Index>(full_dim));
  for (std::size_t i = 0; i < full_dim; ++i)
    model.standardizer.mean(static_cast<Eigen::Index>(i)) = reader.read_f64();
  for (std::size_t i = 0; i < full_dim; ++i)
    model.standardizer.std_dev(static_cast<Eigen::Index>(i)) = reader.read_f64();
  model.selected.resize(n_sel);
  for (std::uint64_t i = 0; i < n_sel; ++i) model.selected[i] = reader.read_u32();
  model.classifier.weights.resize(static_cast<Eigen::Index>(n_sel + 1),
                                  static_cast<Eigen::Index>(model.class_names.size()));
  for (std::uint64_t r = 0; r <= n_sel; ++r)
    for (std::size_t c = 0; c < model.class_names.size(); ++c)
      model.classifier.weights(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          reader.read_f64();

  // Semantic cross-checks on decoded content.
  try {
    model.config.validate();
  } catch (const ConfigError& e) {
    fail(std::string("stored config invalid: ") + e.what());
  }
  std::set<std::uint32_t> seen;
  for (std::uint32_t idx : model.selected) {
    if (idx >= full_dim) fail("selected index " + std::to_string(idx) + " out of range");
    if (!seen.insert(idx).second) fail("selected index " + std::to_string(idx) + " repeated");
  }
  std::set<std::string> class_set(model.class_names.begin(), model.class_names.end());
  if (class_set.size() != model.class_names.size()) fail("repeated class name");
  return model;
}

}  // namespace greenhop
