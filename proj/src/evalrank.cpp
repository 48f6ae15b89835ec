#include "dds/evalrank.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "dds/error.hpp"
#include "dds/parallel.hpp"
#include "dds/sampling.hpp"
#include "dds/stats.hpp"

namespace dds {
namespace {

[[noreturn]] void rethrow_annotated(const std::string& context) {
  try {
    throw;
  } catch (const Error& e) {
    throw Error(e.kind(), context + ": " + e.what());
  }
}

bool same_features(const Features& a, const Features& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      [&](const auto& va) {
        const auto& vb = std::get<std::decay_t<decltype(va)>>(b);
        return va.data.rows() == vb.data.rows() && va.data.cols() == vb.data.cols() && va.data == vb.data;
      },
      a);
}

bool same_sets(const ModelSet& a, const ModelSet& b) {
  if (&a == &b) return true;
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.entries[i].id != b.entries[i].id || !same_features(a.entries[i].features, b.entries[i].features)) {
      return false;
    }
  }
  return true;
}

std::vector<DissimilarityMatrix> prepare_all(const ModelSet& set, const DDSConfig& cfg) {
  std::vector<DissimilarityMatrix> out(set.size());
  parallel_for(set.size(), [&](std::size_t i) {
    try {
      out[i] = prepare(set.entries[i].features, cfg);
    } catch (const Error&) {
      rethrow_annotated("model '" + set.entries[i].id + "'");
    }
  });
  return out;
}

void check_id_sets(const std::vector<std::string>& expected, const std::vector<std::string>& given,
                   const std::string& what) {
  const std::set<std::string> a(expected.begin(), expected.end());
  const std::set<std::string> b(given.begin(), given.end());
  if (a == b && a.size() == given.size()) return;
  std::vector<std::string> diff;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(diff));
  std::string msg = "groundtruth " + what + " ids do not match the affinity matrix";
  if (diff.empty()) {
    msg += " (duplicate ids)";
  } else {
    msg += "; differing ids:";
    for (const auto& id : diff) msg += " " + id;
  }
  fail(ErrorKind::alignment, msg);
}

std::unordered_map<std::string, Index> index_of(const std::vector<std::string>& ids) {
  std::unordered_map<std::string, Index> m;
  for (std::size_t i = 0; i < ids.size(); ++i) m.emplace(ids[i], static_cast<Index>(i));
  return m;
}

struct Column {
  std::vector<double> affinity;
  std::vector<double> truth;
  std::vector<std::string> ids;
};

// Affinity and groundtruth values for one target, aligned by source id.
std::vector<Column> aligned_columns(const AffinityMatrix& aff, const GroundTruth& gt, bool exclude_self) {
  if (aff.data.rows() != static_cast<Index>(aff.source_ids.size()) ||
      aff.data.cols() != static_cast<Index>(aff.target_ids.size())) {
    fail(ErrorKind::validation, "affinity matrix shape does not match its ids");
  }
  check_id_sets(aff.source_ids, gt.source_ids, "source");
  check_id_sets(aff.target_ids, gt.target_ids, "target");
  const auto gt_row = index_of(gt.source_ids);
  const auto gt_col = index_of(gt.target_ids);

  std::vector<Column> columns(aff.target_ids.size());
  for (std::size_t j = 0; j < aff.target_ids.size(); ++j) {
    const std::string& target = aff.target_ids[j];
    const Index gj = gt_col.at(target);
    for (std::size_t i = 0; i < aff.source_ids.size(); ++i) {
      const std::string& src = aff.source_ids[i];
      if (exclude_self && src == target) continue;
      const double truth = gt.data(gt_row.at(src), gj);
      if (!std::isfinite(truth)) {
        fail(ErrorKind::validation, "groundtruth is missing for source '" + src + "', target '" + target +
                                        "' (only self-transfer may be empty, with exclude_self)");
      }
      columns[j].affinity.push_back(aff.data(static_cast<Index>(i), static_cast<Index>(j)));
      columns[j].truth.push_back(truth);
      columns[j].ids.push_back(src);
    }
  }
  return columns;
}

std::vector<std::size_t> descending_order(std::span<const double> values, std::span<const std::string> ids) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (values[a] != values[b]) return values[a] > values[b];
    return ids.empty() ? a < b : ids[a] < ids[b];
  });
  return order;
}

void check_shared_images(const ModelSet& a, const ModelSet& b) {
  try {
    check_alignment(a.image_ids(), b.image_ids());
  } catch (const Error&) {
    rethrow_annotated("model sets '" + a.entries.front().id + "' and '" + b.entries.front().id + "'");
  }
}

double mean_of(std::span<const double> v) { return stats::mean(v); }

}  // namespace

std::vector<std::string> ModelSet::ids() const {
  std::vector<std::string> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.id);
  return out;
}

const std::vector<std::string>& ModelSet::image_ids() const {
  if (entries.empty()) fail(ErrorKind::validation, "model set is empty");
  return dds::image_ids(entries.front().features);
}

void validate(const ModelSet& set, std::size_t min_models) {
  if (set.size() < min_models) {
    fail(ErrorKind::validation, "need at least " + std::to_string(min_models) + " models, got " +
                                    std::to_string(set.size()));
  }
  std::unordered_set<std::string> seen;
  for (const auto& e : set.entries) {
    if (!seen.insert(e.id).second) fail(ErrorKind::validation, "duplicate model id '" + e.id + "'");
    try {
      validate(e.features);
      check_alignment(set.image_ids(), dds::image_ids(e.features));
    } catch (const Error&) {
      rethrow_annotated("model '" + e.id + "'");
    }
  }
}

AffinityMatrix affinity_matrix(const ModelSet& sources, const ModelSet& targets, const DDSConfig& cfg) {
  validate(cfg);
  validate(sources, 1);
  validate(targets, 1);
  check_shared_images(sources, targets);

  const bool symmetric = same_sets(sources, targets);
  const auto prepared_sources = prepare_all(sources, cfg);
  const auto prepared_targets = symmetric ? std::vector<DissimilarityMatrix>{} : prepare_all(targets, cfg);
  const auto& tgt = symmetric ? prepared_sources : prepared_targets;

  const auto ms = static_cast<Index>(sources.size());
  const auto mt = static_cast<Index>(targets.size());
  std::vector<std::pair<Index, Index>> pairs;
  for (Index i = 0; i < ms; ++i) {
    for (Index j = symmetric ? i : 0; j < mt; ++j) pairs.emplace_back(i, j);
  }

  AffinityMatrix out;
  out.source_ids = sources.ids();
  out.target_ids = targets.ids();
  out.config_digest = cfg.digest();
  out.data.resize(ms, mt);
  out.pair_evaluations = pairs.size();

  parallel_for(pairs.size(), [&](std::size_t p) {
    const auto [i, j] = pairs[p];
    try {
      out.data(i, j) = compare_prepared(prepared_sources[i], tgt[j], cfg).value;
    } catch (const Error&) {
      rethrow_annotated("source '" + out.source_ids[i] + "', target '" + out.target_ids[j] + "'");
    }
  });
  if (symmetric) {
    for (Index i = 0; i < ms; ++i) {
      for (Index j = 0; j < i; ++j) out.data(i, j) = out.data(j, i);
    }
  }
  return out;
}

RankingReport eval_against_groundtruth(const AffinityMatrix& aff, const GroundTruth& gt, bool exclude_self) {
  const auto columns = aligned_columns(aff, gt, exclude_self);
  RankingReport report;
  report.target_ids = aff.target_ids;
  report.per_target_spearman.resize(columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    const auto& target = aff.target_ids[j];
    if (columns[j].affinity.size() < 2) {
      fail(ErrorKind::validation, "target '" + target + "' has fewer than 2 candidate sources");
    }
    try {
      report.per_target_spearman[j] = stats::spearman(columns[j].affinity, columns[j].truth);
    } catch (const Error& e) {
      throw Error(e.kind(), "target '" + target + "': constant affinity or groundtruth column (" + e.what() + ")");
    }
  }
  if (report.per_target_spearman.empty()) fail(ErrorKind::validation, "no targets to evaluate");
  report.mean = mean_of(report.per_target_spearman);
  return report;
}

std::vector<std::vector<Index>> bootstrap_indices(Index n_images, const BootstrapOptions& opts) {
  if (opts.n_resamples < 2) fail(ErrorKind::validation, "bootstrap: n_resamples must be >= 2");
  if (opts.sample_size < 1) fail(ErrorKind::validation, "bootstrap: sample_size must be >= 1");
  if (opts.sample_size > n_images) {
    fail(ErrorKind::validation, "bootstrap: sample_size " + std::to_string(opts.sample_size) + " exceeds " +
                                    std::to_string(n_images) + " images");
  }
  Sampler sampler(opts.seed);
  std::vector<std::vector<Index>> out;
  out.reserve(static_cast<std::size_t>(opts.n_resamples));
  for (int r = 0; r < opts.n_resamples; ++r) out.push_back(sampler.with_replacement(n_images, opts.sample_size));
  return out;
}

ModelSet select_images(const ModelSet& set, std::span<const Index> rows, const std::vector<std::string>& ids) {
  ModelSet out;
  out.entries.reserve(set.size());
  for (const auto& e : set.entries) out.entries.push_back({e.id, select_images(e.features, rows, ids)});
  return out;
}

RankingReport bootstrap_eval(const ModelSet& sources, const ModelSet& targets, const GroundTruth& gt,
                             const DDSConfig& cfg, const BootstrapOptions& opts) {
  validate(sources);
  validate(targets, 1);
  const bool symmetric = same_sets(sources, targets);
  const auto& base_ids = sources.image_ids();
  const auto draws = bootstrap_indices(static_cast<Index>(base_ids.size()), opts);

  RankingReport report = eval_against_groundtruth(affinity_matrix(sources, targets, cfg), gt, opts.exclude_self);

  BootstrapSummary summary;
  summary.n_resamples = opts.n_resamples;
  summary.sample_size = opts.sample_size;
  summary.seed = opts.seed;
  for (const auto& rows : draws) {
    std::vector<std::string> ids;
    ids.reserve(rows.size());
    for (std::size_t slot = 0; slot < rows.size(); ++slot) {
      ids.push_back(base_ids[static_cast<std::size_t>(rows[slot])] + "#" + std::to_string(slot));
    }
    const ModelSet s = select_images(sources, rows, ids);
    const ModelSet t = symmetric ? ModelSet{} : select_images(targets, rows, ids);
    const auto aff = affinity_matrix(s, symmetric ? s : t, cfg);
    summary.samples.push_back(eval_against_groundtruth(aff, gt, opts.exclude_self).mean);
  }

  summary.mean = mean_of(summary.samples);
  double ss = 0.0;
  for (double v : summary.samples) ss += (v - summary.mean) * (v - summary.mean);
  summary.std = std::sqrt(ss / static_cast<double>(summary.samples.size() - 1));
  report.bootstrap = std::move(summary);
  return report;
}

std::vector<PrPoint> precision_recall_at_k(std::span<const double> aff_column, std::span<const double> gt_column,
                                           int k_max, std::span<const std::string> ids, int reference_size) {
  const auto len = aff_column.size();
  if (gt_column.size() != len) fail(ErrorKind::validation, "precision_recall_at_k: columns differ in length");
  if (!ids.empty() && ids.size() != len) fail(ErrorKind::validation, "precision_recall_at_k: ids length mismatch");
  if (reference_size < 1 || static_cast<std::size_t>(reference_size) > len) {
    fail(ErrorKind::validation, "precision_recall_at_k: need at least " + std::to_string(reference_size) +
                                    " candidates, got " + std::to_string(len));
  }
  if (k_max < 1 || static_cast<std::size_t>(k_max) > len) {
    fail(ErrorKind::validation, "precision_recall_at_k: k_max " + std::to_string(k_max) + " outside 1.." +
                                    std::to_string(len));
  }

  const auto truth_order = descending_order(gt_column, ids);
  const std::unordered_set<std::size_t> reference(truth_order.begin(), truth_order.begin() + reference_size);
  const auto pred_order = descending_order(aff_column, ids);

  std::vector<PrPoint> curve;
  int hits = 0;
  for (int k = 1; k <= k_max; ++k) {
    if (reference.count(pred_order[static_cast<std::size_t>(k - 1)])) ++hits;
    curve.push_back({k, static_cast<double>(hits) / k, static_cast<double>(hits) / reference_size});
  }
  return curve;
}

void attach_pr_curves(RankingReport& report, const AffinityMatrix& aff, const GroundTruth& gt, bool exclude_self,
                      int k_max) {
  const auto columns = aligned_columns(aff, gt, exclude_self);
  report.per_target_pr.clear();
  for (const auto& c : columns) {
    report.per_target_pr.push_back(precision_recall_at_k(c.affinity, c.truth, k_max, c.ids));
  }
  report.pr_curve.assign(static_cast<std::size_t>(k_max), PrPoint{});
  for (int k = 0; k < k_max; ++k) {
    auto& p = report.pr_curve[static_cast<std::size_t>(k)];
    p.k = k + 1;
    for (const auto& curve : report.per_target_pr) {
      p.precision += curve[static_cast<std::size_t>(k)].precision;
      p.recall += curve[static_cast<std::size_t>(k)].recall;
    }
    p.precision /= static_cast<double>(report.per_target_pr.size());
    p.recall /= static_cast<double>(report.per_target_pr.size());
  }
}

std::vector<SweepPoint> image_count_sweep(const ModelSet& sources, const ModelSet& targets, const GroundTruth& gt,
                                          const DDSConfig& cfg, std::span<const int> counts, std::uint64_t seed,
                                          bool exclude_self) {
  validate(sources);
  validate(targets, 1);
  const bool symmetric = same_sets(sources, targets);
  const auto& base_ids = sources.image_ids();
  const auto n = static_cast<Index>(base_ids.size());
  for (int c : counts) {
    if (c < 1 || c > n) {
      fail(ErrorKind::validation, "image count " + std::to_string(c) + " outside 1.." + std::to_string(n));
    }
  }

  Sampler sampler(seed);
  std::vector<SweepPoint> out;
  for (int c : counts) {
    const auto rows = sampler.without_replacement(n, c);
    std::vector<std::string> ids;
    for (Index r : rows) ids.push_back(base_ids[static_cast<std::size_t>(r)]);
    const ModelSet s = select_images(sources, rows, ids);
    const ModelSet t = symmetric ? ModelSet{} : select_images(targets, rows, ids);
    const auto aff = affinity_matrix(s, symmetric ? s : t, cfg);
    out.push_back({c, eval_against_groundtruth(aff, gt, exclude_self).mean});
  }
  return out;
}

LayerSelection layer_affinity(const ModelSet& blocks, const ModelSet& tasks, const DDSConfig& cfg) {
  LayerSelection sel;
  sel.affinity = affinity_matrix(blocks, tasks, cfg);
  const Matrix& m = sel.affinity.data;
  for (Index j = 0; j < m.cols(); ++j) {
    Index best = 0;
    for (Index i = 1; i < m.rows(); ++i) {
      if (m(i, j) > m(best, j)) best = i;
    }
    sel.best_block.push_back(best);
  }
  return sel;
}

std::vector<RankedCandidate> rank_candidates(std::span<const std::string> ids, std::span<const double> scores) {
  if (ids.size() != scores.size()) fail(ErrorKind::validation, "rank_candidates: ids and scores differ in length");
  const auto order = descending_order(scores, ids);
  std::vector<RankedCandidate> out;
  for (std::size_t r = 0; r < order.size(); ++r) {
    out.push_back({static_cast<int>(r + 1), ids[order[r]], scores[order[r]]});
  }
  return out;
}

}  // namespace dds
