#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dds/pipeline.hpp"

namespace dds {

struct Model {
  std::string id;
  Features features;
};

/// Models evaluated over one shared, identically ordered image set.
struct ModelSet {
  std::vector<Model> entries;

  std::size_t size() const { return entries.size(); }
  std::vector<std::string> ids() const;
  const std::vector<std::string>& image_ids() const;
};

/// >= `min_models` entries, unique ids, identical image ids.
void validate(const ModelSet& set, std::size_t min_models = 2);

struct AffinityMatrix {
  Matrix data;  ///< sources x targets
  std::vector<std::string> source_ids;
  std::vector<std::string> target_ids;
  std::string config_digest;
  /// Number of (source, target) scorings performed. m(m-1)/2 + m when the
  /// two sets are identical, since the matrix is mirrored.
  std::size_t pair_evaluations = 0;
};

/// Transfer performance (winrate or affinity), sources x targets. NaN marks a
/// missing cell, which is only allowed for self-transfer.
struct GroundTruth {
  Matrix data;
  std::vector<std::string> source_ids;
  std::vector<std::string> target_ids;
  std::string kind;
};

struct BootstrapSummary {
  double mean = 0.0;
  double std = 0.0;  ///< sample std over resamples
  int n_resamples = 0;
  int sample_size = 0;
  std::uint64_t seed = 0;
  std::vector<double> samples;  ///< mean Spearman of each resample, in draw order
};

struct PrPoint {
  int k = 0;
  double precision = 0.0;
  double recall = 0.0;
};

struct RankingReport {
  std::vector<std::string> target_ids;
  std::vector<double> per_target_spearman;
  double mean = 0.0;
  std::optional<BootstrapSummary> bootstrap;
  std::vector<PrPoint> pr_curve;  ///< mean over targets
  std::vector<std::vector<PrPoint>> per_target_pr;
};

/// data(i, j) = dds(sources[i], targets[j]). Each model is prepared once; when
/// the sets are identical only the upper triangle is scored and mirrored.
AffinityMatrix affinity_matrix(const ModelSet& sources, const ModelSet& targets, const DDSConfig& cfg);

/// Per-target Spearman correlation between the affinity column and the
/// groundtruth column, after aligning groundtruth by id. With exclude_self the
/// source whose id equals the target id is dropped from that column.
RankingReport eval_against_groundtruth(const AffinityMatrix& aff, const GroundTruth& gt,
                                       bool exclude_self = true);

struct BootstrapOptions {
  int n_resamples = 100;
  int sample_size = 200;
  std::uint64_t seed = 0;
  bool exclude_self = true;
};

/// Full-data evaluation plus a bootstrap of the mean Spearman: each resample
/// draws sample_size images with replacement.
RankingReport bootstrap_eval(const ModelSet& sources, const ModelSet& targets, const GroundTruth& gt,
                             const DDSConfig& cfg, const BootstrapOptions& opts);

/// Image indices of every bootstrap resample, in the order bootstrap_eval uses them.
std::vector<std::vector<Index>> bootstrap_indices(Index n_images, const BootstrapOptions& opts);

/// Precision and recall of the top-k sources by affinity against the top
/// `reference_size` sources by groundtruth, for k = 1..k_max. Both orders are
/// descending by value with ties broken by ascending id (index order when no
/// ids are given).
std::vector<PrPoint> precision_recall_at_k(std::span<const double> aff_column,
                                           std::span<const double> gt_column, int k_max,
                                           std::span<const std::string> ids = {},
                                           int reference_size = 5);

/// Adds mean and per-target PR curves to `report` for k = 1..k_max.
void attach_pr_curves(RankingReport& report, const AffinityMatrix& aff, const GroundTruth& gt,
                      bool exclude_self, int k_max);

struct SweepPoint {
  int count = 0;
  double mean_spearman = 0.0;
};

/// For each count, evaluate on a seeded subsample drawn without replacement.
std::vector<SweepPoint> image_count_sweep(const ModelSet& sources, const ModelSet& targets,
                                          const GroundTruth& gt, const DDSConfig& cfg,
                                          std::span<const int> counts, std::uint64_t seed,
                                          bool exclude_self = true);

struct LayerSelection {
  AffinityMatrix affinity;           ///< blocks x tasks
  std::vector<Index> best_block;     ///< per task; ties go to the shallowest block
};

LayerSelection layer_affinity(const ModelSet& blocks, const ModelSet& tasks, const DDSConfig& cfg);

struct RankedCandidate {
  int rank = 0;
  std::string model_id;
  double score = 0.0;
};

/// Candidates sorted by descending score, ties by ascending id.
std::vector<RankedCandidate> rank_candidates(std::span<const std::string> ids,
                                             std::span<const double> scores);

/// Restrict `subset` of `features` rows for every model.
ModelSet select_images(const ModelSet& set, std::span<const Index> rows,
                       const std::vector<std::string>& ids);

}  // namespace dds
