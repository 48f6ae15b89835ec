#include "dds/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <regex>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace dds::io {
namespace fs = std::filesystem;
namespace {

constexpr std::array<char, 6> kNpyMagic = {'\x93', 'N', 'U', 'M', 'P', 'Y'};

[[noreturn]] void load_fail(LoadErrorCode code, const fs::path& path, const std::string& what) {
  throw LoadError(code, path.string() + ": " + what);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) load_fail(LoadErrorCode::not_found, path, "cannot open file");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

template <typename T>
T read_le(const char* p) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    auto* b = reinterpret_cast<unsigned char*>(&v);
    std::reverse(b, b + sizeof(T));
  }
  return v;
}

template <typename T>
void append_le(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  out.append(buf, sizeof(T));
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cell);
      cell.clear();
    } else if (c != '\r') {
      cell.push_back(c);
    }
  }
  cells.push_back(cell);
  for (auto& c : cells) {
    const auto b = c.find_first_not_of(" \t");
    const auto e = c.find_last_not_of(" \t");
    c = b == std::string::npos ? std::string() : c.substr(b, e - b + 1);
  }
  return cells;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
  std::istringstream in(read_file(path));
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    rows.push_back(split_csv_line(line));
  }
  return rows;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::vector<std::string> read_sidecar(const fs::path& npy, std::size_t rows, std::string& source) {
  const fs::path side = sidecar_path(npy);
  if (!fs::exists(side)) load_fail(LoadErrorCode::sidecar_missing, side, "image id sidecar not found");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(side));
  } catch (const nlohmann::json::exception& e) {
    load_fail(LoadErrorCode::sidecar_invalid, side, e.what());
  }
  const nlohmann::json* ids = &doc;
  if (doc.is_object()) {
    if (!doc.contains("image_ids")) load_fail(LoadErrorCode::sidecar_invalid, side, "missing 'image_ids'");
    ids = &doc["image_ids"];
    if (doc.contains("source") && doc["source"].is_string()) source = doc["source"].get<std::string>();
  }
  if (!ids->is_array()) load_fail(LoadErrorCode::sidecar_invalid, side, "image ids must be a JSON array");
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& v : *ids) {
    if (!v.is_string()) load_fail(LoadErrorCode::sidecar_invalid, side, "image ids must be strings");
    if (!seen.insert(v.get<std::string>()).second) {
      load_fail(LoadErrorCode::sidecar_invalid, side, "duplicate image id '" + v.get<std::string>() + "'");
    }
    out.push_back(v.get<std::string>());
  }
  if (out.size() != rows) {
    load_fail(LoadErrorCode::sidecar_mismatch, side,
              std::to_string(out.size()) + " image ids for " + std::to_string(rows) + " rows");
  }
  return out;
}

void check_finite(const std::vector<double>& values, const fs::path& path) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      load_fail(LoadErrorCode::non_finite, path, "non-finite value at flat index " + std::to_string(i));
    }
  }
}

RowMatrix to_rows(const std::vector<double>& values, std::size_t rows, std::size_t cols) {
  RowMatrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  std::copy(values.begin(), values.end(), m.data());
  return m;
}

Features load_npy_features(const fs::path& path) {
  const NpyArray arr = read_npy(path);
  if (arr.shape.size() != 2 && arr.shape.size() != 4) {
    load_fail(LoadErrorCode::bad_rank, path, "expected a 2-D or 4-D array, got rank " + std::to_string(arr.shape.size()));
  }
  check_finite(arr.values, path);
  std::string src = path.stem().string();
  const std::size_t n = arr.shape[0];
  const std::size_t flat = n == 0 ? 0 : arr.values.size() / n;
  auto ids = read_sidecar(path, n, src);
  if (arr.shape.size() == 2) return FeatureMatrix{to_rows(arr.values, n, flat), std::move(ids), src};
  return make_feature_map(to_rows(arr.values, n, flat), static_cast<Index>(arr.shape[1]),
                          static_cast<Index>(arr.shape[2]), static_cast<Index>(arr.shape[3]), std::move(ids), src);
}

Features load_csv_features(const fs::path& path) {
  const auto rows = read_csv(path);
  if (rows.empty()) load_fail(LoadErrorCode::csv_format, path, "empty file");
  const auto& header = rows.front();
  if (header.size() < 2 || header[0] != "image_id") {
    load_fail(LoadErrorCode::csv_format, path, "header must be 'image_id,f0,f1,...'");
  }
  const std::size_t d = header.size() - 1;
  FeatureMatrix m;
  m.source = path.stem().string();
  m.data.resize(static_cast<Index>(rows.size() - 1), static_cast<Index>(d));
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != header.size()) {
      load_fail(LoadErrorCode::csv_format, path, "line " + std::to_string(r + 1) + " has " +
                                                     std::to_string(rows[r].size()) + " cells, expected " +
                                                     std::to_string(header.size()));
    }
    m.image_ids.push_back(rows[r][0]);
    for (std::size_t c = 0; c < d; ++c) {
      double v;
      if (!parse_double(rows[r][c + 1], v)) {
        load_fail(LoadErrorCode::csv_format, path, "line " + std::to_string(r + 1) + ": bad number '" +
                                                       rows[r][c + 1] + "'");
      }
      if (!std::isfinite(v)) load_fail(LoadErrorCode::non_finite, path, "non-finite value on line " + std::to_string(r + 1));
      m.data(static_cast<Index>(r - 1), static_cast<Index>(c)) = v;
    }
  }
  return m;
}

bool has_extension(const fs::path& p, std::string_view ext) {
  std::string e = p.extension().string();
  std::transform(e.begin(), e.end(), e.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return e == ext;
}

bool is_sidecar(const fs::path& p) {
  const std::string name = p.filename().string();
  return name.size() > 9 && name.ends_with(".ids.json");
}

}  // namespace

std::string_view to_string(LoadErrorCode code) {
  switch (code) {
    case LoadErrorCode::not_found: return "not_found";
    case LoadErrorCode::bad_magic: return "bad_magic";
    case LoadErrorCode::bad_header: return "bad_header";
    case LoadErrorCode::unsupported_dtype: return "unsupported_dtype";
    case LoadErrorCode::fortran_order: return "fortran_order";
    case LoadErrorCode::bad_rank: return "bad_rank";
    case LoadErrorCode::truncated: return "truncated";
    case LoadErrorCode::sidecar_missing: return "sidecar_missing";
    case LoadErrorCode::sidecar_invalid: return "sidecar_invalid";
    case LoadErrorCode::sidecar_mismatch: return "sidecar_mismatch";
    case LoadErrorCode::non_finite: return "non_finite";
    case LoadErrorCode::csv_format: return "csv_format";
  }
  return "unknown";
}

NpyArray read_npy(const fs::path& path) {
  const std::string bytes = read_file(path);
  if (bytes.size() < 10 || !std::equal(kNpyMagic.begin(), kNpyMagic.end(), bytes.begin())) {
    load_fail(LoadErrorCode::bad_magic, path, "not an NPY file");
  }
  const auto major = static_cast<unsigned char>(bytes[6]);
  std::size_t header_len = 0;
  std::size_t offset = 0;
  if (major == 1) {
    header_len = read_le<std::uint16_t>(bytes.data() + 8);
    offset = 10;
  } else if (major == 2 || major == 3) {
    if (bytes.size() < 12) load_fail(LoadErrorCode::truncated, path, "truncated header");
    header_len = read_le<std::uint32_t>(bytes.data() + 8);
    offset = 12;
  } else {
    load_fail(LoadErrorCode::bad_header, path, "unsupported NPY version " + std::to_string(major));
  }
  if (bytes.size() < offset + header_len) load_fail(LoadErrorCode::truncated, path, "truncated header");
  const std::string header = bytes.substr(offset, header_len);

  static const std::regex descr_re(R"('descr'\s*:\s*'([^']*)')");
  static const std::regex order_re(R"('fortran_order'\s*:\s*(True|False))");
  static const std::regex shape_re(R"('shape'\s*:\s*\(([^)]*)\))");
  std::smatch descr, order, shape;
  if (!std::regex_search(header, descr, descr_re) || !std::regex_search(header, order, order_re) ||
      !std::regex_search(header, shape, shape_re)) {
    load_fail(LoadErrorCode::bad_header, path, "malformed header dictionary");
  }
  const std::string dtype = descr[1];
  std::size_t item = 0;
  if (dtype == "<f8") {
    item = 8;
  } else if (dtype == "<f4") {
    item = 4;
  } else {
    load_fail(LoadErrorCode::unsupported_dtype, path, "dtype '" + dtype + "' (need little-endian f4 or f8)");
  }
  if (order[1] == "True") load_fail(LoadErrorCode::fortran_order, path, "Fortran-ordered arrays are not supported");

  NpyArray arr;
  std::size_t count = 1;
  const std::string dims = shape[1];
  std::stringstream dim_stream(dims);
  std::string dim;
  while (std::getline(dim_stream, dim, ',')) {
    dim.erase(std::remove_if(dim.begin(), dim.end(), [](unsigned char c) { return std::isspace(c); }), dim.end());
    if (dim.empty()) continue;
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(dim.data(), dim.data() + dim.size(), v);
    if (ec != std::errc() || ptr != dim.data() + dim.size()) load_fail(LoadErrorCode::bad_header, path, "bad shape");
    arr.shape.push_back(v);
    count *= v;
  }

  const std::size_t data_offset = offset + header_len;
  if (bytes.size() - data_offset < count * item) {
    load_fail(LoadErrorCode::truncated, path, "payload holds " + std::to_string(bytes.size() - data_offset) +
                                                  " bytes, expected " + std::to_string(count * item));
  }
  arr.values.resize(count);
  const char* p = bytes.data() + data_offset;
  for (std::size_t i = 0; i < count; ++i) {
    arr.values[i] = item == 8 ? read_le<double>(p + i * 8) : static_cast<double>(read_le<float>(p + i * 4));
  }
  return arr;
}

void write_npy(const fs::path& path, const std::vector<std::size_t>& shape, const std::vector<double>& values) {
  std::string dict = "{'descr': '<f8', 'fortran_order': False, 'shape': (";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    dict += std::to_string(shape[i]);
    if (shape.size() == 1 || i + 1 < shape.size()) dict += ", ";
  }
  dict += "), }";
  // magic(6) + version(2) + length(2) + dict + padding + '\n' is a multiple of 64
  const std::size_t unpadded = 10 + dict.size() + 1;
  dict.append((64 - unpadded % 64) % 64, ' ');
  dict.push_back('\n');

  std::string out(kNpyMagic.begin(), kNpyMagic.end());
  out.push_back('\x01');
  out.push_back('\x00');
  append_le<std::uint16_t>(out, static_cast<std::uint16_t>(dict.size()));
  out += dict;
  for (double v : values) append_le<double>(out, v);

  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::io, path.string() + ": cannot open for writing");
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
}

fs::path sidecar_path(const fs::path& npy_path) {
  fs::path p = npy_path;
  p.replace_extension(".ids.json");
  return p;
}

Features load_features(const fs::path& path) {
  if (!fs::exists(path)) load_fail(LoadErrorCode::not_found, path, "file not found");
  Features x = has_extension(path, ".csv") ? load_csv_features(path) : load_npy_features(path);
  try {
    validate(x);
  } catch (const LoadError&) {
    throw;
  } catch (const Error& e) {
    throw Error(ErrorKind::validation, path.string() + ": " + e.what());
  }
  return x;
}

void save_features(const fs::path& path, const Features& x) {
  const FeatureMatrix flat = flatten(x);
  const auto n = static_cast<std::size_t>(flat.rows());
  if (has_extension(path, ".csv")) {
    if (std::holds_alternative<FeatureMap>(x)) throw Error(ErrorKind::validation, "CSV holds only n x d matrices");
    std::ofstream f(path);
    if (!f) throw Error(ErrorKind::io, path.string() + ": cannot open for writing");
    f << "image_id";
    for (Index j = 0; j < flat.cols(); ++j) f << ",f" << j;
    f << '\n';
    for (Index i = 0; i < flat.rows(); ++i) {
      f << flat.image_ids[static_cast<std::size_t>(i)];
      for (Index j = 0; j < flat.cols(); ++j) f << ',' << format_double(flat.data(i, j));
      f << '\n';
    }
    return;
  }

  std::vector<std::size_t> shape;
  if (const auto* map = std::get_if<FeatureMap>(&x)) {
    shape = {n, static_cast<std::size_t>(map->channels), static_cast<std::size_t>(map->height),
             static_cast<std::size_t>(map->width)};
  } else {
    shape = {n, static_cast<std::size_t>(flat.cols())};
  }
  write_npy(path, shape, std::vector<double>(flat.data.data(), flat.data.data() + flat.data.size()));

  nlohmann::json side = {{"image_ids", flat.image_ids}};
  if (!flat.source.empty()) side["source"] = flat.source;
  std::ofstream f(sidecar_path(path));
  if (!f) throw Error(ErrorKind::io, sidecar_path(path).string() + ": cannot open for writing");
  f << side.dump(2) << '\n';
}

std::string model_id_for(const fs::path& path) { return path.stem().string(); }

std::vector<fs::path> list_dumps(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw LoadError(LoadErrorCode::not_found, dir.string() + ": not a directory");
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file() || is_sidecar(entry.path())) continue;
    if (has_extension(entry.path(), ".npy") || has_extension(entry.path(), ".csv")) out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end(), [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
  return out;
}

ModelSet load_model_set(const std::vector<fs::path>& paths) {
  ModelSet set;
  for (const auto& p : paths) set.entries.push_back({model_id_for(p), load_features(p)});
  return set;
}

ModelSet load_model_dir(const fs::path& dir) {
  const auto paths = list_dumps(dir);
  if (paths.empty()) throw Error(ErrorKind::validation, dir.string() + ": no .npy or .csv feature dumps");
  return load_model_set(paths);
}

GroundTruth load_groundtruth(const fs::path& path) {
  const auto rows = read_csv(path);
  if (rows.size() < 2 || rows.front().size() < 2) {
    load_fail(LoadErrorCode::csv_format, path, "groundtruth needs a header row and at least one source row");
  }
  GroundTruth gt;
  std::string kind = rows.front()[0];
  if (kind.starts_with("kind=")) kind = kind.substr(5);
  gt.kind = kind;
  gt.target_ids.assign(rows.front().begin() + 1, rows.front().end());
  gt.data.resize(static_cast<Index>(rows.size() - 1), static_cast<Index>(gt.target_ids.size()));
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != rows.front().size()) {
      load_fail(LoadErrorCode::csv_format, path, "line " + std::to_string(r + 1) + " has the wrong number of cells");
    }
    gt.source_ids.push_back(row[0]);
    for (std::size_t c = 1; c < row.size(); ++c) {
      double v;
      if (row[c].empty() || row[c] == "nan" || row[c] == "NaN") {
        if (row[0] != gt.target_ids[c - 1]) {
          load_fail(LoadErrorCode::csv_format, path, "empty cell for source '" + row[0] + "', target '" +
                                                         gt.target_ids[c - 1] + "' (only self-transfer may be empty)");
        }
        v = std::numeric_limits<double>::quiet_NaN();
      } else if (!parse_double(row[c], v) || !std::isfinite(v)) {
        load_fail(LoadErrorCode::csv_format, path, "line " + std::to_string(r + 1) + ": bad value '" + row[c] + "'");
      }
      gt.data(static_cast<Index>(r - 1), static_cast<Index>(c - 1)) = v;
    }
  }
  return gt;
}

void save_groundtruth(const fs::path& path, const GroundTruth& gt) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::io, path.string() + ": cannot open for writing");
  f << (gt.kind.empty() ? std::string("kind=winrate") : "kind=" + gt.kind);
  for (const auto& t : gt.target_ids) f << ',' << t;
  f << '\n';
  for (Index i = 0; i < gt.data.rows(); ++i) {
    f << gt.source_ids[static_cast<std::size_t>(i)];
    for (Index j = 0; j < gt.data.cols(); ++j) {
      f << ',';
      if (std::isfinite(gt.data(i, j))) f << format_double(gt.data(i, j));
    }
    f << '\n';
  }
}

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

}  // namespace dds::io
