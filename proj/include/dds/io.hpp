#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dds/error.hpp"
#include "dds/evalrank.hpp"

namespace dds::io {

/// Distinct failure reasons when reading feature dumps.
enum class LoadErrorCode {
  not_found,
  bad_magic,
  bad_header,
  unsupported_dtype,
  fortran_order,
  bad_rank,
  truncated,
  sidecar_missing,
  sidecar_invalid,
  sidecar_mismatch,
  non_finite,
  csv_format,
};

std::string_view to_string(LoadErrorCode code);

class LoadError : public Error {
 public:
  LoadError(LoadErrorCode code, const std::string& what) : Error(ErrorKind::io, what), code_(code) {}
  LoadErrorCode code() const noexcept { return code_; }

 private:
  LoadErrorCode code_;
};

/// Raw NPY array: shape plus values widened to double, C order.
struct NpyArray {
  std::vector<std::size_t> shape;
  std::vector<double> values;
};

NpyArray read_npy(const std::filesystem::path& path);
/// Writes an NPY v1.0 file of little-endian float64 in C order.
void write_npy(const std::filesystem::path& path, const std::vector<std::size_t>& shape,
               const std::vector<double>& values);

/// `<dir>/<stem>.ids.json` for `<dir>/<stem>.npy`.
std::filesystem::path sidecar_path(const std::filesystem::path& npy_path);

/// Loads `.npy` (+ `.ids.json` sidecar) or `.csv` (`image_id,f0,f1,...`).
/// Rank-2 arrays load as FeatureMatrix, rank-4 as FeatureMap.
Features load_features(const std::filesystem::path& path);

/// Writes NPY + sidecar, or CSV when the extension is `.csv` (matrix only).
void save_features(const std::filesystem::path& path, const Features& x);

/// Model id of a dump file: file name without the extension.
std::string model_id_for(const std::filesystem::path& path);

/// Every `.npy`/`.csv` dump in `dir`, sorted by file name.
std::vector<std::filesystem::path> list_dumps(const std::filesystem::path& dir);

ModelSet load_model_set(const std::vector<std::filesystem::path>& paths);
ModelSet load_model_dir(const std::filesystem::path& dir);

/// Groundtruth CSV: top-left cell holds the kind (`winrate`, `affinity`, or
/// `kind=<name>`), first row target ids, first column source ids. Empty
/// cells are allowed only where source id == target id.
GroundTruth load_groundtruth(const std::filesystem::path& path);
void save_groundtruth(const std::filesystem::path& path, const GroundTruth& gt);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

}  // namespace dds::io
