#include "dds/config.hpp"

#include <fstream>
#include <set>

#include "dds/error.hpp"
#include "dds/io.hpp"

namespace dds {
namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) fail(ErrorKind::configuration, where + " must be a JSON object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) fail(ErrorKind::configuration, "unknown key '" + key + "' in " + where);
  }
}

template <typename T>
T get_as(const json& obj, const char* key, const std::string& where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    fail(ErrorKind::configuration, std::string("bad value for '") + key + "' in " + where);
  }
}

void apply_blocks(const json& doc, DDSConfig& cfg) {
  if (doc.contains("normalization")) {
    const json& n = doc["normalization"];
    reject_unknown(n, {"kind", "group_size", "epsilon"}, "normalization");
    if (n.contains("kind")) cfg.normalization.kind = parse_norm_kind(get_as<std::string>(n, "kind", "normalization"));
    if (n.contains("group_size")) cfg.normalization.group_size = get_as<int>(n, "group_size", "normalization");
    if (n.contains("epsilon")) cfg.normalization.epsilon = get_as<double>(n, "epsilon", "normalization");
  }
  if (doc.contains("metric")) {
    const json& m = doc["metric"];
    reject_unknown(m, {"kind", "bandwidth"}, "metric");
    if (m.contains("kind")) cfg.metric.kind = parse_metric_kind(get_as<std::string>(m, "kind", "metric"));
    if (m.contains("bandwidth")) {
      const json& b = m["bandwidth"];
      if (b.is_string() && b.get<std::string>() == "median") {
        cfg.metric.bandwidth = Bandwidth::median_heuristic();
      } else if (b.is_number()) {
        cfg.metric.bandwidth = Bandwidth::fixed(b.get<double>());
      } else {
        fail(ErrorKind::configuration, "metric.bandwidth must be \"median\" or a positive number");
      }
    }
  }
  if (doc.contains("comparison")) {
    const json& c = doc["comparison"];
    reject_unknown(c, {"centering", "score"}, "comparison");
    if (c.contains("centering")) cfg.comparison.centering = parse_centering(get_as<std::string>(c, "centering", "comparison"));
    if (c.contains("score")) cfg.comparison.score = parse_score_kind(get_as<std::string>(c, "score", "comparison"));
  }
  validate(cfg);
}

DDSConfig base_config(const json& doc) {
  if (!doc.contains("preset")) return RunConfig::default_config();
  const auto name = get_as<std::string>(doc, "preset", "config");
  if (auto cfg = find_preset(name)) return *cfg;
  fail(ErrorKind::configuration, "unknown preset '" + name + "'");
}

}  // namespace

DDSConfig RunConfig::default_config() { return *find_preset("dds-laplacian"); }

DDSConfig parse_dds_config(const json& doc) {
  reject_unknown(doc, {"preset", "normalization", "metric", "comparison"}, "config");
  DDSConfig cfg = base_config(doc);
  apply_blocks(doc, cfg);
  return cfg;
}

RunConfig parse_run_config(const json& doc) {
  reject_unknown(doc,
                 {"preset", "normalization", "metric", "comparison", "inputs", "groundtruth", "seed", "sample_size",
                  "n_resamples", "exclude_self", "out", "counts", "k_max", "grid"},
                 "config");
  RunConfig rc;
  rc.dds = base_config(doc);
  apply_blocks(doc, rc.dds);

  const std::string where = "config";
  if (doc.contains("inputs")) {
    for (const auto& p : get_as<std::vector<std::string>>(doc, "inputs", where)) rc.inputs.emplace_back(p);
  }
  if (doc.contains("groundtruth")) rc.groundtruth = get_as<std::string>(doc, "groundtruth", where);
  if (doc.contains("seed")) rc.seed = get_as<std::uint64_t>(doc, "seed", where);
  if (doc.contains("sample_size")) rc.sample_size = get_as<int>(doc, "sample_size", where);
  if (doc.contains("n_resamples")) rc.n_resamples = get_as<int>(doc, "n_resamples", where);
  if (doc.contains("exclude_self")) rc.exclude_self = get_as<bool>(doc, "exclude_self", where);
  if (doc.contains("out")) rc.out = get_as<std::string>(doc, "out", where);
  if (doc.contains("counts")) rc.counts = get_as<std::vector<int>>(doc, "counts", where);
  if (doc.contains("k_max")) rc.k_max = get_as<int>(doc, "k_max", where);
  if (doc.contains("grid")) {
    const json& g = doc["grid"];
    reject_unknown(g, {"normalizations", "metrics"}, "grid");
    if (g.contains("normalizations")) {
      for (const auto& n : get_as<std::vector<std::string>>(g, "normalizations", "grid")) {
        rc.grid_normalizations.push_back(parse_norm_kind(n));
      }
    }
    if (g.contains("metrics")) {
      for (const auto& m : get_as<std::vector<std::string>>(g, "metrics", "grid")) {
        rc.grid_metrics.push_back(parse_metric_kind(m));
      }
    }
  }
  if (rc.sample_size < 1) fail(ErrorKind::configuration, "sample_size must be >= 1");
  if (rc.n_resamples < 2) fail(ErrorKind::configuration, "n_resamples must be >= 2");
  if (rc.k_max && *rc.k_max < 1) fail(ErrorKind::configuration, "k_max must be >= 1");
  return rc;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io::LoadError(io::LoadErrorCode::not_found, path.string() + ": cannot open config");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorKind::configuration, path.string() + ": " + e.what());
  }
  return parse_run_config(doc);
}

json to_json(const DDSConfig& cfg) {
  json metric = {{"kind", to_string(cfg.metric.kind)}};
  if (uses_bandwidth(cfg.metric.kind)) {
    metric["bandwidth"] = cfg.metric.bandwidth.median ? json("median") : json(cfg.metric.bandwidth.gamma);
  }
  return {
      {"normalization",
       {{"kind", to_string(cfg.normalization.kind)},
        {"group_size", cfg.normalization.group_size},
        {"epsilon", cfg.normalization.epsilon}}},
      {"metric", metric},
      {"comparison",
       {{"centering", to_string(cfg.comparison.centering)}, {"score", to_string(cfg.comparison.score)}}},
  };
}

json to_json(const RankingReport& report) {
  json per_target = json::array();
  for (std::size_t j = 0; j < report.target_ids.size(); ++j) {
    per_target.push_back({{"target", report.target_ids[j]}, {"spearman", report.per_target_spearman[j]}});
  }
  json out = {{"per_target", per_target}, {"mean", report.mean}};
  if (report.bootstrap) {
    const auto& b = *report.bootstrap;
    out["bootstrap"] = {{"mean", b.mean},           {"std", b.std},   {"n_resamples", b.n_resamples},
                        {"sample_size", b.sample_size}, {"seed", b.seed}, {"samples", b.samples}};
  }
  if (!report.pr_curve.empty()) {
    json curve = json::array();
    for (const auto& p : report.pr_curve) curve.push_back({{"k", p.k}, {"precision", p.precision}, {"recall", p.recall}});
    out["pr_curve"] = curve;
  }
  return out;
}

json to_json(const AffinityMatrix& aff) {
  json rows = json::array();
  for (Index i = 0; i < aff.data.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < aff.data.cols(); ++j) row.push_back(aff.data(i, j));
    rows.push_back(row);
  }
  return {{"source_ids", aff.source_ids}, {"target_ids", aff.target_ids}, {"config", aff.config_digest},
          {"data", rows}};
}

}  // namespace dds
