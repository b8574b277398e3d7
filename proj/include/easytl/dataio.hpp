#pragma once

// CSV ingestion of dense feature matrices, prediction output, and JSON task
// reports. Files ending in ".gz" are read through zlib.

#include <zlib.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <unordered_map>
#include <vector>

#include "easytl/classifier.hpp"
#include "easytl/error.hpp"
#include "easytl/linalg.hpp"
#include "easytl/pipeline.hpp"
#include "json.hpp"

namespace easytl {

struct DatasetFile {
  std::string path;
  bool has_header = true;
  // Label column, by header name or by zero-based index. The index wins when
  // both are set; headerless files must use the index.
  std::optional<std::string> label_column = std::string("label");
  std::optional<std::size_t> label_column_index;
};

// Bijection between the original label vocabulary and dense [0, C). Order is
// first appearance.
class LabelDictionary {
 public:
  LabelDictionary() = default;
  explicit LabelDictionary(std::vector<std::string> names) {
    for (auto& n : names) intern(n);
  }

  int intern(const std::string& name) {
    auto [it, inserted] = index_.try_emplace(name, static_cast<int>(names_.size()));
    if (inserted) names_.push_back(name);
    return it->second;
  }

  std::optional<int> find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const std::string& name(int index) const {
    if (index < 0 || static_cast<std::size_t>(index) >= names_.size()) {
      throw InvalidInputError("label index " + std::to_string(index) +
                              " is not in the dictionary");
    }
    return names_[index];
  }

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
};

struct LoadedDataset {
  LabeledDataset data;
  LabelDictionary dictionary;
  std::vector<std::string> feature_names;  // empty for headerless files
};

namespace csv {

inline bool has_suffix(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

inline std::string read_file(const std::string& path) {
  std::string content;
  if (has_suffix(path, ".gz")) {
    gzFile gz = gzopen(path.c_str(), "rb");
    if (gz == nullptr) throw IoError("cannot open " + path);
    char buffer[1 << 16];
    int n = 0;
    while ((n = gzread(gz, buffer, sizeof(buffer))) > 0) content.append(buffer, n);
    const bool failed = n < 0;
    gzclose(gz);
    if (failed) throw ParseError(path + ": corrupt gzip stream");
    return content;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  content.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("error reading " + path);
  return content;
}

// Splits on LF, dropping a trailing CR from each line and a final empty line.
inline std::vector<std::string_view> split_lines(std::string_view text) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

// Locale-independent; rejects anything that is not a complete finite number.
inline double parse_number(std::string_view cell, const std::string& path, std::size_t line,
                           std::size_t column) {
  const std::string_view text = trim(cell);
  std::string_view digits = text;
  if (!digits.empty() && digits.front() == '+') digits.remove_prefix(1);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  const auto where = [&] {
    return path + ":" + std::to_string(line) + ":" + std::to_string(column) + ": ";
  };
  if (digits.empty() || ec != std::errc() || end != digits.data() + digits.size()) {
    throw ParseError(where() + "cell '" + std::string(text) + "' is not a number", line, column);
  }
  if (!std::isfinite(value)) {
    throw ParseError(where() + "cell '" + std::string(text) + "' is not finite", line, column);
  }
  return value;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string_view>> rows;
  std::vector<std::size_t> row_line;  // 1-based file line of each row
};

inline Table tabulate(const std::string& path, std::string_view text, bool has_header) {
  const std::vector<std::string_view> lines = split_lines(text);
  if (lines.empty()) throw ParseError(path + ": file is empty", 1, 0);
  Table table;
  std::size_t first = 0;
  std::size_t width = 0;
  if (has_header) {
    for (auto f : split_fields(lines[0])) table.header.emplace_back(trim(f));
    width = table.header.size();
    first = 1;
  }
  for (std::size_t i = first; i < lines.size(); ++i) {
    if (lines[i].empty()) {
      throw ParseError(path + ":" + std::to_string(i + 1) + ": empty line", i + 1, 0);
    }
    auto fields = split_fields(lines[i]);
    if (width == 0) width = fields.size();
    if (fields.size() != width) {
      throw ParseError(path + ":" + std::to_string(i + 1) + ": expected " +
                           std::to_string(width) + " columns, found " +
                           std::to_string(fields.size()),
                       i + 1, 0);
    }
    table.rows.push_back(std::move(fields));
    table.row_line.push_back(i + 1);
  }
  if (!has_header && table.rows.empty()) throw ParseError(path + ": file is empty", 1, 0);
  return table;
}

inline std::size_t column_count(const Table& t) {
  if (!t.header.empty()) return t.header.size();
  return t.rows.empty() ? 0 : t.rows.front().size();
}

inline std::size_t locate_label_column(const DatasetFile& f, const Table& t) {
  const std::size_t width = column_count(t);
  if (f.label_column_index) {
    if (*f.label_column_index >= width) {
      throw ParseError(f.path + ": label column index " + std::to_string(*f.label_column_index) +
                       " is out of range for " + std::to_string(width) + " columns");
    }
    return *f.label_column_index;
  }
  if (!f.has_header || !f.label_column) {
    throw ParseError(f.path + ": headerless file needs a label column index");
  }
  for (std::size_t i = 0; i < t.header.size(); ++i) {
    if (t.header[i] == *f.label_column) return i;
  }
  throw ParseError(f.path + ": missing label column '" + *f.label_column + "'", 1, 0);
}

inline FeatureMatrix parse_features(const std::string& path, const Table& t,
                                    std::optional<std::size_t> skip_column) {
  const std::size_t width = column_count(t);
  const std::size_t d = width - (skip_column ? 1 : 0);
  FeatureMatrix x(static_cast<Eigen::Index>(t.rows.size()), static_cast<Eigen::Index>(d));
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    Eigen::Index out_col = 0;
    for (std::size_t c = 0; c < width; ++c) {
      if (skip_column && c == *skip_column) continue;
      x(static_cast<Eigen::Index>(r), out_col++) =
          parse_number(t.rows[r][c], path, t.row_line[r], c + 1);
    }
  }
  return x;
}

inline std::string format_number(double v) {
  char buffer[64];
  const auto res = std::to_chars(buffer, buffer + sizeof(buffer), v);
  return std::string(buffer, res.ptr);
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("error writing " + path);
}

}  // namespace csv

// Features are every column except the label column, in file order.
inline LoadedDataset load_labeled(const DatasetFile& f) {
  const std::string text = csv::read_file(f.path);
  const csv::Table table = csv::tabulate(f.path, text, f.has_header);
  const std::size_t label_col = csv::locate_label_column(f, table);

  LoadedDataset out;
  out.data.features = csv::parse_features(f.path, table, label_col);
  out.data.labels.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const std::string_view name = csv::trim(table.rows[r][label_col]);
    if (name.empty()) {
      throw ParseError(f.path + ":" + std::to_string(table.row_line[r]) + ":" +
                           std::to_string(label_col + 1) + ": empty label",
                       table.row_line[r], label_col + 1);
    }
    out.data.labels.push_back(out.dictionary.intern(std::string(name)));
  }
  out.data.num_classes = static_cast<int>(out.dictionary.size());
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (c != label_col) out.feature_names.push_back(table.header[c]);
  }
  return out;
}

// Every column is a feature. A header line, when present, is skipped.
inline FeatureMatrix load_unlabeled(const DatasetFile& f) {
  const std::string text = csv::read_file(f.path);
  const csv::Table table = csv::tabulate(f.path, text, f.has_header);
  return csv::parse_features(f.path, table, std::nullopt);
}

// Raw label strings of the label column, in row order.
inline std::vector<std::string> load_label_column(const DatasetFile& f) {
  const std::string text = csv::read_file(f.path);
  const csv::Table table = csv::tabulate(f.path, text, f.has_header);
  const std::size_t label_col = csv::locate_label_column(f, table);
  std::vector<std::string> labels;
  labels.reserve(table.rows.size());
  for (const auto& row : table.rows) labels.emplace_back(csv::trim(row[label_col]));
  return labels;
}

// Shortest round-trip decimal form, so reloading gives bit-equal values.
inline void save_features(const FeatureMatrix& x, const std::vector<std::string>& header,
                          const std::string& path) {
  std::string out;
  if (!header.empty()) {
    if (static_cast<Eigen::Index>(header.size()) != x.cols()) {
      throw InvalidInputError("header has " + std::to_string(header.size()) +
                              " names for " + std::to_string(x.cols()) + " columns");
    }
    for (std::size_t c = 0; c < header.size(); ++c) out += (c ? "," : "") + header[c];
    out += '\n';
  }
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      if (c) out += ',';
      out += csv::format_number(x(r, c));
    }
    out += '\n';
  }
  csv::write_file(path, out);
}

inline std::string format_predictions(const std::vector<int>& labels, const LabelDictionary& dict) {
  std::string out = "index,label\n";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += dict.name(labels[i]);
    out += '\n';
  }
  return out;
}

// "index,label" CSV in the original label vocabulary, LF line endings.
inline void save_predictions(const Prediction& p, const LabelDictionary& dict,
                             const std::string& path) {
  csv::write_file(path, format_predictions(p.labels, dict));
}

struct AccuracySummary {
  double accuracy = 0.0;
  // One entry per class; nullopt for classes absent from the ground truth.
  std::vector<std::optional<double>> per_class;
  std::size_t correct = 0;
  std::size_t total = 0;
};

inline AccuracySummary score(const std::vector<int>& predicted, const std::vector<int>& truth,
                             int num_classes) {
  if (predicted.size() != truth.size()) {
    throw InvalidInputError("prediction has " + std::to_string(predicted.size()) +
                            " rows but ground truth has " + std::to_string(truth.size()));
  }
  AccuracySummary s;
  std::vector<std::size_t> hits(num_classes, 0);
  std::vector<std::size_t> support(num_classes, 0);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0 || truth[i] >= num_classes) {
      throw InvalidInputError("truth label " + std::to_string(truth[i]) + " out of range");
    }
    ++support[truth[i]];
    if (predicted[i] == truth[i]) {
      ++hits[truth[i]];
      ++s.correct;
    }
  }
  s.total = truth.size();
  s.accuracy = s.total ? static_cast<double>(s.correct) / static_cast<double>(s.total) : 0.0;
  s.per_class.resize(num_classes);
  for (int c = 0; c < num_classes; ++c) {
    if (support[c]) s.per_class[c] = static_cast<double>(hits[c]) / static_cast<double>(support[c]);
  }
  return s;
}

struct TaskReport {
  PipelineConfig config;
  std::size_t n_source = 0;
  std::size_t n_target = 0;
  int num_classes = 0;
  std::optional<AccuracySummary> accuracy;
  std::optional<StageTimings> timings;
  LabelDictionary dictionary;
};

inline nlohmann::ordered_json to_json(const AccuracySummary& s) {
  nlohmann::ordered_json j;
  j["accuracy"] = s.accuracy;
  j["correct"] = s.correct;
  j["total"] = s.total;
  auto per_class = nlohmann::ordered_json::array();
  for (const auto& v : s.per_class) {
    per_class.push_back(v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr));
  }
  j["per_class_accuracy"] = std::move(per_class);
  return j;
}

inline nlohmann::ordered_json to_json(const TaskReport& r) {
  nlohmann::ordered_json j;
  if (r.accuracy) {
    j["accuracy"] = r.accuracy->accuracy;
    j["per_class_accuracy"] = to_json(*r.accuracy)["per_class_accuracy"];
  }
  j["n_source"] = r.n_source;
  j["n_target"] = r.n_target;
  j["num_classes"] = r.num_classes;
  j["config"] = {{"alignment", std::string(to_string(r.config.alignment))},
                 {"classifier", std::string(to_string(r.config.classifier))}};
  j["label_dictionary"] = r.dictionary.names();
  if (r.timings) {
    j["wall_time_ms"] = {{"align", r.timings->align_ms}, {"classify", r.timings->classify_ms}};
  }
  return j;
}

inline void save_report(const TaskReport& r, const std::string& path) {
  csv::write_file(path, to_json(r).dump(2) + "\n");
}

}  // namespace easytl
