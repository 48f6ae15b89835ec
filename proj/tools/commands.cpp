#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dds/config.hpp"
#include "dds/evalrank.hpp"
#include "dds/io.hpp"

namespace dds::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Options {
  std::string config_path;
  std::string preset;
  std::uint64_t seed = 0;
  std::string out_dir;
  bool exclude_self = true;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* exclude_opt = nullptr;
};

RunConfig resolve(const Options& o) {
  RunConfig rc = o.config_path.empty() ? RunConfig{} : load_run_config(o.config_path);
  if (!o.preset.empty()) {
    auto cfg = find_preset(o.preset);
    if (!cfg) fail(ErrorKind::configuration, "unknown preset '" + o.preset + "'");
    rc.dds = *cfg;
  }
  if (o.seed_opt->count() > 0) rc.seed = o.seed;
  if (!o.out_dir.empty()) rc.out = o.out_dir;
  if (o.exclude_opt->count() > 0) rc.exclude_self = o.exclude_self;
  return rc;
}

class Sink {
 public:
  Sink(std::ostream& out, const std::optional<fs::path>& dir) : out_(out), dir_(dir) {
    if (dir_) fs::create_directories(*dir_);
  }

  /// Prints to stdout and, with --out, writes the same bytes to <dir>/<name>.
  void emit(const std::string& name, const std::string& content, bool to_stdout = true) {
    if (to_stdout) out_ << content;
    if (!dir_) return;
    std::ofstream f(*dir_ / name, std::ios::binary);
    if (!f) fail(ErrorKind::io, (*dir_ / name).string() + ": cannot open for writing");
    f << content;
  }

 private:
  std::ostream& out_;
  std::optional<fs::path> dir_;
};

std::string matrix_csv(const std::string& corner, const std::vector<std::string>& row_ids,
                       const std::vector<std::string>& col_ids, const Matrix& m) {
  std::ostringstream s;
  s << corner;
  for (const auto& c : col_ids) s << ',' << c;
  s << '\n';
  for (Index i = 0; i < m.rows(); ++i) {
    s << row_ids[static_cast<std::size_t>(i)];
    for (Index j = 0; j < m.cols(); ++j) s << ',' << io::format_double(m(i, j));
    s << '\n';
  }
  return s.str();
}

std::vector<fs::path> expand_paths(const std::vector<std::string>& args) {
  std::vector<fs::path> out;
  for (const auto& a : args) {
    if (fs::is_directory(a)) {
      for (auto& p : io::list_dumps(a)) out.push_back(std::move(p));
    } else {
      if (!fs::exists(a)) throw io::LoadError(io::LoadErrorCode::not_found, a + ": file not found");
      out.emplace_back(a);
    }
  }
  return out;
}

int cmd_compare(const Options& o, const std::string& x_path, const std::string& y_path, std::ostream& out) {
  const RunConfig rc = resolve(o);
  const Features x = io::load_features(x_path);
  const Features y = io::load_features(y_path);
  const SimilarityScore s = dds(x, y, rc.dds);
  Sink sink(out, rc.out);
  sink.emit("compare.json", json{{"score", s.value}, {"config", s.config_digest}}.dump() + "\n");
  return 0;
}

int cmd_rank(const Options& o, const std::string& zoo, const std::string& target_path, std::ostream& out) {
  const RunConfig rc = resolve(o);
  const ModelSet sources = io::load_model_dir(zoo);
  ModelSet target;
  target.entries.push_back({io::model_id_for(target_path), io::load_features(target_path)});

  const AffinityMatrix aff = affinity_matrix(sources, target, rc.dds);
  const std::vector<double> scores(aff.data.col(0).data(), aff.data.col(0).data() + aff.data.rows());
  std::ostringstream csv;
  csv << "rank,model_id,score\n";
  for (const auto& c : rank_candidates(aff.source_ids, scores)) {
    csv << c.rank << ',' << c.model_id << ',' << io::format_double(c.score) << '\n';
  }
  Sink(out, rc.out).emit("ranking.csv", csv.str());
  return 0;
}

struct EvalFlags {
  bool bootstrap = false;
  bool pr = false;
  std::vector<int> sweep_counts;
  int k_max = 0;
  int sample_size = 0;
  int n_resamples = 0;
};

int cmd_eval(const Options& o, const EvalFlags& flags, const std::string& zoo_dir, const std::string& gt_path,
             std::ostream& out) {
  RunConfig rc = resolve(o);
  if (flags.sample_size > 0) rc.sample_size = flags.sample_size;
  if (flags.n_resamples > 0) rc.n_resamples = flags.n_resamples;
  const ModelSet zoo = io::load_model_dir(zoo_dir);
  const GroundTruth gt = io::load_groundtruth(gt_path);

  const AffinityMatrix aff = affinity_matrix(zoo, zoo, rc.dds);
  RankingReport report = flags.bootstrap
                             ? bootstrap_eval(zoo, zoo, gt, rc.dds,
                                              {rc.n_resamples, rc.sample_size, rc.seed, rc.exclude_self})
                             : eval_against_groundtruth(aff, gt, rc.exclude_self);

  Sink sink(out, rc.out);
  if (flags.pr) {
    const int candidates = static_cast<int>(zoo.size()) - (rc.exclude_self ? 1 : 0);
    const int k_max = flags.k_max > 0 ? flags.k_max : rc.k_max.value_or(candidates);
    attach_pr_curves(report, aff, gt, rc.exclude_self, k_max);
    std::ostringstream pr;
    pr << "target,k,precision,recall\n";
    for (std::size_t j = 0; j < report.per_target_pr.size(); ++j) {
      for (const auto& p : report.per_target_pr[j]) {
        pr << report.target_ids[j] << ',' << p.k << ',' << io::format_double(p.precision) << ','
           << io::format_double(p.recall) << '\n';
      }
    }
    for (const auto& p : report.pr_curve) {
      pr << "mean," << p.k << ',' << io::format_double(p.precision) << ',' << io::format_double(p.recall) << '\n';
    }
    sink.emit("pr_curve.csv", pr.str(), false);
  }

  json doc = to_json(report);
  doc["config"] = rc.dds.digest();
  doc["exclude_self"] = rc.exclude_self;
  doc["groundtruth_kind"] = gt.kind;

  const std::vector<int> counts = !flags.sweep_counts.empty() ? flags.sweep_counts : std::vector<int>{};
  if (!counts.empty()) {
    const auto sweep = image_count_sweep(zoo, zoo, gt, rc.dds, counts, rc.seed, rc.exclude_self);
    json points = json::array();
    std::ostringstream csv;
    csv << "count,mean_spearman\n";
    for (const auto& p : sweep) {
      points.push_back({{"count", p.count}, {"mean_spearman", p.mean_spearman}});
      csv << p.count << ',' << io::format_double(p.mean_spearman) << '\n';
    }
    doc["sweep"] = points;
    sink.emit("sweep.csv", csv.str(), false);
  }

  std::ostringstream per_target;
  per_target << "target,spearman\n";
  for (std::size_t j = 0; j < report.target_ids.size(); ++j) {
    per_target << report.target_ids[j] << ',' << io::format_double(report.per_target_spearman[j]) << '\n';
  }
  sink.emit("per_target.csv", per_target.str(), false);
  sink.emit("affinity.csv", matrix_csv("source", aff.source_ids, aff.target_ids, aff.data), false);
  sink.emit("report.json", doc.dump(2) + "\n");
  return 0;
}

struct GridSpec {
  std::vector<NormKind> normalizations;
  std::vector<MetricKind> metrics;
  std::optional<ComparisonSpec> comparison;
};

GridSpec load_grid_spec(const std::string& path, const RunConfig& rc) {
  GridSpec g{rc.grid_normalizations, rc.grid_metrics, std::nullopt};
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw io::LoadError(io::LoadErrorCode::not_found, path + ": cannot open grid spec");
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::exception& e) {
      fail(ErrorKind::configuration, path + ": " + e.what());
    }
    if (!doc.is_object()) fail(ErrorKind::configuration, "grid spec must be a JSON object");
    for (const auto& [key, value] : doc.items()) {
      if (key == "normalizations" || key == "metrics") {
        if (!value.is_array() || value.empty()) fail(ErrorKind::configuration, "grid '" + key + "' must be a non-empty array");
        for (const auto& v : value) {
          if (!v.is_string()) fail(ErrorKind::configuration, "grid '" + key + "' entries must be strings");
        }
      } else if (key != "comparison") {
        fail(ErrorKind::configuration, "unknown key '" + key + "' in grid spec");
      }
    }
    g.normalizations.clear();
    g.metrics.clear();
    for (const auto& v : doc.value("normalizations", json::array())) g.normalizations.push_back(parse_norm_kind(v.get<std::string>()));
    for (const auto& v : doc.value("metrics", json::array())) g.metrics.push_back(parse_metric_kind(v.get<std::string>()));
    if (doc.contains("comparison")) g.comparison = parse_dds_config(json{{"comparison", doc["comparison"]}}).comparison;
  }
  if (g.normalizations.empty() || g.metrics.empty()) {
    fail(ErrorKind::configuration, "grid spec needs non-empty 'normalizations' and 'metrics'");
  }
  return g;
}

int cmd_grid(const Options& o, const std::string& grid_path, const std::string& zoo_dir, const std::string& gt_path,
             std::ostream& out) {
  const RunConfig rc = resolve(o);
  const GridSpec grid = load_grid_spec(grid_path, rc);
  const ModelSet zoo = io::load_model_dir(zoo_dir);
  const GroundTruth gt = io::load_groundtruth(gt_path);

  std::ostringstream csv;
  csv << "normalization";
  for (MetricKind m : grid.metrics) csv << ',' << to_string(m);
  csv << '\n';
  for (NormKind n : grid.normalizations) {
    csv << to_string(n);
    for (MetricKind m : grid.metrics) {
      DDSConfig cfg = rc.dds;
      cfg.normalization.kind = n;
      cfg.metric.kind = m;
      if (grid.comparison) cfg.comparison = *grid.comparison;
      csv << ',';
      // feature-map normalizations are not defined on n x d dumps
      if (needs_feature_map(n) && std::holds_alternative<FeatureMatrix>(zoo.entries.front().features)) {
        csv << "NA";
        continue;
      }
      csv << io::format_double(eval_against_groundtruth(affinity_matrix(zoo, zoo, cfg), gt, rc.exclude_self).mean);
    }
    csv << '\n';
  }
  Sink(out, rc.out).emit("grid.csv", csv.str());
  return 0;
}

int cmd_layers(const Options& o, const std::vector<std::string>& block_args, const std::vector<std::string>& task_args,
               std::ostream& out) {
  const RunConfig rc = resolve(o);
  const ModelSet blocks = io::load_model_set(expand_paths(block_args));
  const ModelSet tasks = io::load_model_set(expand_paths(task_args));
  if (blocks.size() == 0 || tasks.size() == 0) fail(ErrorKind::validation, "layers: need at least one block and one task dump");

  const LayerSelection sel = layer_affinity(blocks, tasks, rc.dds);
  std::ostringstream best;
  best << "task,best_block,score\n";
  for (std::size_t j = 0; j < sel.best_block.size(); ++j) {
    const Index b = sel.best_block[j];
    best << sel.affinity.target_ids[j] << ',' << sel.affinity.source_ids[static_cast<std::size_t>(b)] << ','
         << io::format_double(sel.affinity.data(b, static_cast<Index>(j))) << '\n';
  }
  Sink sink(out, rc.out);
  sink.emit("layers.csv", matrix_csv("block", sel.affinity.source_ids, sel.affinity.target_ids, sel.affinity.data));
  out << '\n';
  sink.emit("best_blocks.csv", best.str());
  return 0;
}

int cmd_sweep(const Options& o, std::vector<int> counts, const std::string& zoo_dir, const std::string& gt_path,
              std::ostream& out) {
  const RunConfig rc = resolve(o);
  if (counts.empty()) counts = rc.counts;
  if (counts.empty()) fail(ErrorKind::configuration, "sweep: no image counts given (--counts or config 'counts')");
  const ModelSet zoo = io::load_model_dir(zoo_dir);
  const GroundTruth gt = io::load_groundtruth(gt_path);
  std::ostringstream csv;
  csv << "count,mean_spearman\n";
  for (const auto& p : image_count_sweep(zoo, zoo, gt, rc.dds, counts, rc.seed, rc.exclude_self)) {
    csv << p.count << ',' << io::format_double(p.mean_spearman) << '\n';
  }
  Sink(out, rc.out).emit("sweep.csv", csv.str());
  return 0;
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::alignment:
      return 3;
    case ErrorKind::numeric:
      return 4;
    case ErrorKind::validation:
    case ErrorKind::configuration:
    case ErrorKind::io:
      return 2;
  }
  return 1;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Duality diagram similarity between network representations", "dds"};
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  app.add_option("--config", o.config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--preset", o.preset, "named configuration (rsa, cka-linear, cka-rbf, dds-<f>)");
  o.seed_opt = app.add_option("--seed", o.seed, "seed for every random draw");
  app.add_option("--out", o.out_dir, "directory for result files");
  o.exclude_opt = app.add_flag("--exclude-self", o.exclude_self,
                               "drop self-transfer from each target column (default true; --exclude-self=false keeps it)");

  std::string x_path, y_path, zoo, target, gt_path, grid_path;
  std::vector<std::string> block_args, task_args;
  std::vector<int> counts;
  EvalFlags ef;

  auto* compare = app.add_subcommand("compare", "similarity score between two feature dumps");
  compare->add_option("x", x_path)->required();
  compare->add_option("y", y_path)->required();

  auto* rank = app.add_subcommand("rank", "rank a directory of source dumps for one target dump");
  rank->add_option("sources", zoo, "directory of source dumps")->required();
  rank->add_option("target", target, "target dump")->required();

  auto* eval = app.add_subcommand("eval", "correlate a zoo's affinity matrix with groundtruth");
  eval->add_option("zoo", zoo, "directory of model dumps")->required();
  eval->add_option("groundtruth", gt_path, "groundtruth CSV")->required();
  eval->add_flag("--bootstrap", ef.bootstrap, "bootstrap the mean correlation over image resamples");
  eval->add_flag("--pr", ef.pr, "precision/recall against the groundtruth top-5");
  eval->add_option("--sweep-images", ef.sweep_counts, "image counts for a saturation sweep")->delimiter(',');
  eval->add_option("--k-max", ef.k_max, "largest k for --pr");
  eval->add_option("--sample-size", ef.sample_size, "images per bootstrap resample (default 200)");
  eval->add_option("--n-resamples", ef.n_resamples, "bootstrap resamples (default 100)");

  auto* grid = app.add_subcommand("grid", "normalization x metric grid of mean correlations");
  grid->add_option("zoo", zoo)->required();
  grid->add_option("groundtruth", gt_path)->required();
  grid->add_option("--grid", grid_path, "grid spec JSON {\"normalizations\": [...], \"metrics\": [...]}");

  auto* layers = app.add_subcommand("layers", "block x task similarity and best block per task");
  layers->add_option("--blocks", block_args, "block dumps or a directory of them")->required();
  layers->add_option("--tasks", task_args, "task dumps or a directory of them")->required();

  auto* sweep = app.add_subcommand("sweep", "mean correlation as a function of image count");
  sweep->add_option("zoo", zoo)->required();
  sweep->add_option("groundtruth", gt_path)->required();
  sweep->add_option("--counts", counts, "image counts")->delimiter(',');

  std::vector<std::string> argv_storage{"dds"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "dds: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*compare) return cmd_compare(o, x_path, y_path, out);
    if (*rank) return cmd_rank(o, zoo, target, out);
    if (*eval) return cmd_eval(o, ef, zoo, gt_path, out);
    if (*grid) return cmd_grid(o, grid_path, zoo, gt_path, out);
    if (*layers) return cmd_layers(o, block_args, task_args, out);
    if (*sweep) return cmd_sweep(o, counts, zoo, gt_path, out);
  } catch (const Error& e) {
    err << "dds: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "dds: internal error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace dds::cli
