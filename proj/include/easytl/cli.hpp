#pragma once

// Batch command-line front end.
//
//   run   --source S --target T [--target-labels L] [--alignment none|coral]
//         [--classifier easytl|1nn|centroid] [--out P] [--report R]
//         [--no-header] [--label-col NAME | --label-col-index N] [--with-timings]
//   eval  --pred P --truth T [--no-header] [--label-col NAME | --label-col-index N]
//
// Exit codes: 0 ok, 2 bad arguments, 3 unparseable or inconsistent input,
// 4 infeasible problem or missing class, 5 I/O failure.

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "easytl/dataio.hpp"
#include "easytl/error.hpp"
#include "easytl/pipeline.hpp"

namespace easytl::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kParse = 3,
  kInfeasible = 4,
  kIo = 5,
};

struct LabelColumnFlags {
  bool no_header = false;
  std::string label_col = "label";
  std::optional<std::size_t> label_col_index;

  void add_to(CLI::App& app) {
    app.add_flag("--no-header", no_header, "Input CSV files have no header line");
    auto* name = app.add_option("--label-col", label_col, "Label column name")
                     ->capture_default_str();
    auto* index = app.add_option("--label-col-index", label_col_index,
                                 "Zero-based label column index");
    name->excludes(index);
  }

  // Checked before any file is touched.
  void validate() const {
    if (no_header && !label_col_index) {
      throw CLI::ValidationError("--no-header requires --label-col-index");
    }
  }

  DatasetFile file(const std::string& path) const {
    DatasetFile f;
    f.path = path;
    f.has_header = !no_header;
    f.label_column = label_col;
    f.label_column_index = label_col_index;
    return f;
  }

  DatasetFile unlabeled(const std::string& path) const {
    DatasetFile f;
    f.path = path;
    f.has_header = !no_header;
    f.label_column.reset();
    return f;
  }
};

struct RunOptions {
  std::string source;
  std::string target;
  std::string target_labels;
  std::string out;
  std::string report;
  TransformKind alignment = TransformKind::coral;
  ClassifierKind classifier = ClassifierKind::easytl;
  bool with_timings = false;
  LabelColumnFlags columns;
};

struct EvalOptions {
  std::string pred;
  std::string truth;
  LabelColumnFlags columns;
};

inline int cmd_run(const RunOptions& opt, std::ostream& out) {
  const LoadedDataset src = load_labeled(opt.columns.file(opt.source));
  const FeatureMatrix target = load_unlabeled(opt.columns.unlabeled(opt.target));

  const PipelineConfig cfg{opt.alignment, opt.classifier};
  const PipelineResult result = run_timed(cfg, src.data, target);

  if (opt.out.empty()) {
    out << format_predictions(result.prediction.labels, src.dictionary);
  } else {
    save_predictions(result.prediction, src.dictionary, opt.out);
  }

  TaskReport report;
  report.config = cfg;
  report.n_source = src.data.size();
  report.n_target = static_cast<std::size_t>(target.rows());
  report.num_classes = src.data.num_classes;
  report.dictionary = src.dictionary;
  if (opt.with_timings) report.timings = result.timings;
  if (!opt.target_labels.empty()) {
    const std::vector<std::string> names =
        load_label_column(opt.columns.file(opt.target_labels));
    std::vector<int> truth;
    truth.reserve(names.size());
    for (std::size_t i = 0; i < names.size(); ++i) {
      const auto idx = src.dictionary.find(names[i]);
      if (!idx) {
        throw ParseError(opt.target_labels + ": row " + std::to_string(i + 1) + ": label '" +
                         names[i] + "' does not occur in the source domain");
      }
      truth.push_back(*idx);
    }
    if (truth.size() != result.prediction.labels.size()) {
      throw ParseError(opt.target_labels + ": has " + std::to_string(truth.size()) +
                       " labels for " + std::to_string(result.prediction.labels.size()) +
                       " target samples");
    }
    report.accuracy = score(result.prediction.labels, truth, src.data.num_classes);
  }

  if (!opt.report.empty()) {
    save_report(report, opt.report);
  } else if (report.accuracy) {
    out << to_json(report).dump(2) << "\n";
  }
  return kOk;
}

inline int cmd_eval(const EvalOptions& opt, std::ostream& out) {
  const std::vector<std::string> pred = load_label_column(opt.columns.file(opt.pred));
  const std::vector<std::string> truth = load_label_column(opt.columns.file(opt.truth));
  if (pred.size() != truth.size()) {
    throw ParseError("prediction has " + std::to_string(pred.size()) +
                     " rows but ground truth has " + std::to_string(truth.size()));
  }
  LabelDictionary dict;
  std::vector<int> truth_ids;
  truth_ids.reserve(truth.size());
  for (const auto& t : truth) truth_ids.push_back(dict.intern(t));
  std::vector<int> pred_ids;
  pred_ids.reserve(pred.size());
  for (const auto& p : pred) pred_ids.push_back(dict.intern(p));

  nlohmann::ordered_json j = to_json(score(pred_ids, truth_ids, static_cast<int>(dict.size())));
  j["labels"] = dict.names();
  out << j.dump(2) << "\n";
  return kOk;
}

inline const std::map<std::string, TransformKind>& alignment_names() {
  static const std::map<std::string, TransformKind> names{{"none", TransformKind::identity},
                                                          {"coral", TransformKind::coral}};
  return names;
}

inline const std::map<std::string, ClassifierKind>& classifier_names() {
  static const std::map<std::string, ClassifierKind> names{
      {"easytl", ClassifierKind::easytl},
      {"1nn", ClassifierKind::nearest_neighbor_1},
      {"centroid", ClassifierKind::nearest_centroid}};
  return names;
}

// Entry point shared by the executable and the tests.
inline int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Non-parametric transfer learning: alignment plus LP-based labeling"};
  app.require_subcommand(1);

  RunOptions run_opt;
  CLI::App* run_cmd = app.add_subcommand("run", "Label a target domain from a source domain");
  run_cmd->add_option("--source", run_opt.source, "Labeled source CSV")->required();
  run_cmd->add_option("--target", run_opt.target, "Unlabeled target CSV")->required();
  run_cmd->add_option("--target-labels", run_opt.target_labels,
                      "Ground-truth target labels CSV (enables accuracy report)");
  std::string alignment = "coral";
  std::string classifier = "easytl";
  run_cmd->add_option("--alignment", alignment, "Feature alignment")
      ->check(CLI::IsMember(alignment_names()))
      ->capture_default_str();
  run_cmd->add_option("--classifier", classifier, "Classifier")
      ->check(CLI::IsMember(classifier_names()))
      ->capture_default_str();
  run_cmd->add_option("--out", run_opt.out, "Predictions CSV (default: standard output)");
  run_cmd->add_option("--report", run_opt.report, "Task report JSON");
  run_cmd->add_flag("--with-timings", run_opt.with_timings, "Include stage timings in the report");
  run_opt.columns.add_to(*run_cmd);

  EvalOptions eval_opt;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Score predictions against ground truth");
  eval_cmd->add_option("--pred", eval_opt.pred, "Predictions CSV")->required();
  eval_cmd->add_option("--truth", eval_opt.truth, "Ground-truth CSV")->required();
  eval_opt.columns.add_to(*eval_cmd);

  try {
    app.parse(argc, argv);
    if (run_cmd->parsed()) {
      run_opt.columns.validate();
      run_opt.alignment = alignment_names().at(alignment);
      run_opt.classifier = classifier_names().at(classifier);
    }
    if (eval_cmd->parsed()) eval_opt.columns.validate();
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(run_opt, out);
    return cmd_eval(eval_opt, out);
  } catch (const InfeasibleError& e) {
    err << "error: " << e.what() << "\n";
    return kInfeasible;
  } catch (const MissingClassError& e) {
    err << "error: " << e.what() << "\n";
    return kInfeasible;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kParse;
  }
}

}  // namespace easytl::cli
