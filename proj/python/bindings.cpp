#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/numpy.h>

#include <nlohmann/json.hpp>

#include "dds/config.hpp"
#include "dds/evalrank.hpp"
#include "dds/io.hpp"

namespace py = pybind11;
using namespace dds;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<std::string> ids_or_default(const std::optional<std::vector<std::string>>& ids, Index n) {
  return ids ? *ids : default_image_ids(n);
}

Features to_features(const Array& a, const std::optional<std::vector<std::string>>& ids) {
  const auto buf = a.request();
  if (buf.ndim != 2 && buf.ndim != 4) throw py::value_error("features must be a 2-D (n, d) or 4-D (n, c, h, w) array");
  const auto n = static_cast<Index>(buf.shape[0]);
  const Index flat = buf.ndim == 2 ? buf.shape[1] : buf.shape[1] * buf.shape[2] * buf.shape[3];
  RowMatrix data(n, flat);
  std::copy(a.data(), a.data() + n * flat, data.data());
  if (buf.ndim == 2) return FeatureMatrix{std::move(data), ids_or_default(ids, n), {}};
  return make_feature_map(std::move(data), buf.shape[1], buf.shape[2], buf.shape[3], ids_or_default(ids, n));
}

py::array_t<double> to_array(const Features& x) {
  return std::visit(
      [](const auto& v) {
        std::vector<py::ssize_t> shape{v.data.rows(), v.data.cols()};
        if constexpr (std::is_same_v<std::decay_t<decltype(v)>, FeatureMap>) {
          shape = {v.data.rows(), v.channels, v.height, v.width};
        }
        py::array_t<double> out(shape);
        std::copy(v.data.data(), v.data.data() + v.data.size(), out.mutable_data());
        return out;
      },
      x);
}

DDSConfig config_from(const std::string& json_text) {
  if (json_text.empty()) return RunConfig::default_config();
  return parse_dds_config(nlohmann::json::parse(json_text));
}

ModelSet model_set(const std::vector<std::pair<std::string, Array>>& models,
                   const std::optional<std::vector<std::string>>& ids) {
  ModelSet set;
  for (const auto& [id, arr] : models) set.entries.push_back({id, to_features(arr, ids)});
  return set;
}

py::dict report_dict(const RankingReport& r) {
  return py::module_::import("json").attr("loads")(to_json(r).dump());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Duality diagram similarity core";

  py::register_exception<Error>(m, "DDSError", PyExc_RuntimeError);

  m.def("presets", [] {
    std::vector<std::string> names;
    for (const auto& [name, cfg] : shipped_presets()) names.push_back(name);
    return names;
  });
  m.def("preset_config", [](const std::string& name) {
    auto cfg = find_preset(name);
    if (!cfg) throw py::key_error(name);
    return to_json(*cfg).dump();
  });
  m.def("config_digest", [](const std::string& cfg) { return config_from(cfg).digest(); }, py::arg("config") = "");

  m.def(
      "normalize",
      [](const Array& x, const std::string& kind, int group_size, double epsilon) {
        NormalizationSpec spec{parse_norm_kind(kind), group_size, epsilon};
        RowMatrix out = apply_normalization(to_features(x, std::nullopt), spec).data;
        return Matrix(out);
      },
      py::arg("x"), py::arg("kind"), py::arg("group_size") = 32, py::arg("epsilon") = 1e-8);

  m.def(
      "pairwise_matrix",
      [](const Array& x, const std::string& kind, std::optional<double> gamma) {
        MetricSpec spec{parse_metric_kind(kind), gamma ? Bandwidth::fixed(*gamma) : Bandwidth::median_heuristic()};
        return pairwise_matrix(flatten(to_features(x, std::nullopt)), spec).data;
      },
      py::arg("x"), py::arg("kind"), py::arg("gamma") = py::none());

  m.def("median_bandwidth", [](const Array& x, const std::string& kind) {
    return median_bandwidth(flatten(to_features(x, std::nullopt)), parse_metric_kind(kind));
  });
  m.def("u_center", [](const Matrix& a) { return u_center(a); });
  m.def("double_center", [](const Matrix& a) { return double_center(a); });
  m.def("score", [](const Matrix& a, const Matrix& b, const std::string& kind) { return score(a, b, parse_score_kind(kind)); });

  m.def(
      "dds",
      [](const Array& x, const Array& y, const std::string& cfg, std::optional<std::vector<std::string>> ids) {
        return dds::dds(to_features(x, ids), to_features(y, ids), config_from(cfg)).value;
      },
      py::arg("x"), py::arg("y"), py::arg("config") = "", py::arg("image_ids") = py::none());
  m.def("rsa", [](const Array& x, const Array& y) {
    return rsa(to_features(x, std::nullopt), to_features(y, std::nullopt)).value;
  });
  m.def(
      "cka",
      [](const Array& x, const Array& y, const std::string& kernel) {
        return cka(to_features(x, std::nullopt), to_features(y, std::nullopt),
                   kernel == "rbf" ? CkaKernel::rbf : CkaKernel::linear)
            .value;
      },
      py::arg("x"), py::arg("y"), py::arg("kernel") = "linear");
  m.def(
      "cka_direct",
      [](const Array& x, const Array& y, const std::string& kernel) {
        return cka_direct(to_features(x, std::nullopt), to_features(y, std::nullopt),
                          kernel == "rbf" ? CkaKernel::rbf : CkaKernel::linear);
      },
      py::arg("x"), py::arg("y"), py::arg("kernel") = "linear");

  m.def(
      "affinity_matrix",
      [](const std::vector<std::pair<std::string, Array>>& sources,
         const std::optional<std::vector<std::pair<std::string, Array>>>& targets, const std::string& cfg,
         std::optional<std::vector<std::string>> ids) {
        const ModelSet s = model_set(sources, ids);
        const AffinityMatrix aff = targets ? affinity_matrix(s, model_set(*targets, ids), config_from(cfg))
                                           : affinity_matrix(s, s, config_from(cfg));
        return aff.data;
      },
      py::arg("sources"), py::arg("targets") = py::none(), py::arg("config") = "", py::arg("image_ids") = py::none());

  m.def(
      "eval_against_groundtruth",
      [](const Matrix& aff, const Matrix& gt, const std::vector<std::string>& source_ids,
         const std::vector<std::string>& target_ids, bool exclude_self) {
        AffinityMatrix a{aff, source_ids, target_ids, {}, 0};
        GroundTruth g{gt, source_ids, target_ids, {}};
        return report_dict(eval_against_groundtruth(a, g, exclude_self));
      },
      py::arg("affinity"), py::arg("groundtruth"), py::arg("source_ids"), py::arg("target_ids"),
      py::arg("exclude_self") = true);

  m.def(
      "precision_recall_at_k",
      [](const std::vector<double>& aff, const std::vector<double>& gt, int k_max, std::vector<std::string> ids) {
        std::vector<std::tuple<int, double, double>> out;
        for (const auto& p : precision_recall_at_k(aff, gt, k_max, ids)) out.emplace_back(p.k, p.precision, p.recall);
        return out;
      },
      py::arg("affinity"), py::arg("groundtruth"), py::arg("k_max"), py::arg("ids") = std::vector<std::string>{});

  m.def("load_features", [](const std::string& path) {
    const Features x = io::load_features(path);
    return py::make_tuple(to_array(x), image_ids(x));
  });
  m.def(
      "save_features",
      [](const std::string& path, const Array& x, std::optional<std::vector<std::string>> ids, const std::string& src) {
        Features f = to_features(x, ids);
        std::visit([&](auto& v) { v.source = src; }, f);
        io::save_features(path, f);
      },
      py::arg("path"), py::arg("x"), py::arg("image_ids") = py::none(), py::arg("source") = "");
}
