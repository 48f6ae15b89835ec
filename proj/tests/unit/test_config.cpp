#include <gtest/gtest.h>

#include "dds/config.hpp"
#include "dds/error.hpp"

using namespace dds;
using nlohmann::json;

namespace {

ErrorKind kind_of(const json& doc) {
  try {
    parse_run_config(doc);
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << doc.dump();
  return ErrorKind::validation;
}

}  // namespace

TEST(RunConfig, DefaultsToLaplacianDds) {
  const auto rc = parse_run_config(json::object());
  EXPECT_EQ(rc.dds.digest(), find_preset("dds-laplacian")->digest());
  EXPECT_EQ(rc.seed, 0u);
  EXPECT_EQ(rc.sample_size, 200);
  EXPECT_EQ(rc.n_resamples, 100);
  EXPECT_TRUE(rc.exclude_self);
}

TEST(RunConfig, PresetThenOverrides) {
  const auto rc = parse_run_config(json::parse(R"({
    "preset": "rsa",
    "metric": {"kind": "rbf_kernel", "bandwidth": 0.25},
    "seed": 7, "sample_size": 50, "n_resamples": 10, "exclude_self": false,
    "counts": [10, 20], "k_max": 4, "out": "res",
    "grid": {"normalizations": ["zscore", "identity"], "metrics": ["euclidean"]}
  })"));
  EXPECT_EQ(rc.dds.normalization.kind, NormKind::center);
  EXPECT_EQ(rc.dds.metric.kind, MetricKind::rbf_kernel);
  EXPECT_FALSE(rc.dds.metric.bandwidth.median);
  EXPECT_EQ(rc.dds.metric.bandwidth.gamma, 0.25);
  EXPECT_EQ(rc.dds.comparison.score, ScoreKind::spearman_upper);
  EXPECT_EQ(rc.seed, 7u);
  EXPECT_EQ(rc.counts, (std::vector<int>{10, 20}));
  EXPECT_EQ(*rc.k_max, 4);
  EXPECT_FALSE(rc.exclude_self);
  EXPECT_EQ(rc.grid_normalizations, (std::vector<NormKind>{NormKind::zscore, NormKind::identity}));
  EXPECT_EQ(rc.grid_metrics, (std::vector<MetricKind>{MetricKind::euclidean}));
}

TEST(RunConfig, RejectsBadDocuments) {
  EXPECT_EQ(kind_of(json{{"sead", 1}}), ErrorKind::configuration);
  EXPECT_EQ(kind_of(json{{"metric", {{"kind", "laplacian_kernel"}, {"gama", 1}}}}), ErrorKind::configuration);
  EXPECT_EQ(kind_of(json{{"metric", {{"kind", "manhattan"}}}}), ErrorKind::configuration);
  EXPECT_EQ(kind_of(json{{"metric", {{"kind", "rbf_kernel"}, {"bandwidth", -2}}}}), ErrorKind::configuration);
  EXPECT_EQ(kind_of(json{{"preset", "cka-sigmoid"}}), ErrorKind::configuration);
  EXPECT_EQ(kind_of(json{{"seed", "seven"}}), ErrorKind::configuration);
  EXPECT_EQ(kind_of(json{{"n_resamples", 1}}), ErrorKind::configuration);
  EXPECT_EQ(kind_of(json{{"normalization", {{"kind", "groupnorm"}, {"group_size", 0}}}}), ErrorKind::configuration);
  EXPECT_EQ(kind_of(json{{"grid", {{"norms", json::array()}}}}), ErrorKind::configuration);
  EXPECT_EQ(kind_of(json::array()), ErrorKind::configuration);
}

TEST(DdsConfig, JsonRoundTrip) {
  for (const auto& [name, cfg] : shipped_presets()) {
    const auto back = parse_dds_config(to_json(cfg));
    EXPECT_EQ(back.digest(), cfg.digest()) << name;
  }
  EXPECT_THROW(parse_dds_config(json{{"inputs", json::array()}}), Error);
}

TEST(ReportJson, FieldsPresent) {
  RankingReport r;
  r.target_ids = {"a", "b"};
  r.per_target_spearman = {0.5, 1.0};
  r.mean = 0.75;
  r.bootstrap = BootstrapSummary{0.7, 0.1, 3, 10, 7, {0.6, 0.7, 0.8}};
  const auto j = to_json(r);
  EXPECT_EQ(j["mean"], 0.75);
  EXPECT_EQ(j["per_target"][1]["target"], "b");
  EXPECT_EQ(j["bootstrap"]["seed"], 7);
  EXPECT_EQ(j["bootstrap"]["samples"].size(), 3u);
  EXPECT_FALSE(j.contains("pr_curve"));
}
