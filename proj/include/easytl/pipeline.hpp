#pragma once

// Algorithm orchestration: optional alignment followed by a classifier, plus
// the two non-parametric baselines used by the evaluation harness.

#include <chrono>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "easytl/alignment.hpp"
#include "easytl/classifier.hpp"
#include "easytl/error.hpp"

namespace easytl {

enum class ClassifierKind { easytl, nearest_neighbor_1, nearest_centroid };

inline std::string_view to_string(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::easytl:
      return "easytl";
    case ClassifierKind::nearest_neighbor_1:
      return "1nn";
    case ClassifierKind::nearest_centroid:
      return "centroid";
  }
  return "unknown";
}

// easytl + identity is the classifier alone; easytl + coral is the full method.
struct PipelineConfig {
  TransformKind alignment = TransformKind::coral;
  ClassifierKind classifier = ClassifierKind::easytl;
};

struct StageTimings {
  double align_ms = 0.0;
  double classify_ms = 0.0;
};

struct PipelineResult {
  Prediction prediction;
  StageTimings timings;
};

namespace detail {

inline AnnotationMatrix one_hot(const std::vector<int>& labels, int num_classes, double objective) {
  AnnotationMatrix m;
  m.values = RealMatrix::Zero(num_classes, static_cast<Eigen::Index>(labels.size()));
  for (std::size_t j = 0; j < labels.size(); ++j) {
    m.values(labels[j], static_cast<Eigen::Index>(j)) = 1.0;
  }
  m.objective = objective;
  m.assignment = labels;
  return m;
}

// Re-throws a library error with the pipeline stage prepended, keeping its type.
template <typename F>
decltype(auto) in_stage(std::string_view stage, F&& body) {
  const auto prefix = [&](const Error& e) { return std::string(stage) + ": " + e.what(); };
  try {
    return body();
  } catch (const InfeasibleError& e) {
    throw InfeasibleError(prefix(e), e.num_targets(), e.num_classes());
  } catch (const MissingClassError& e) {
    throw MissingClassError(prefix(e), e.missing_class());
  } catch (const StateError& e) {
    throw StateError(prefix(e));
  } catch (const InvalidInputError& e) {
    throw InvalidInputError(prefix(e));
  }
}

using Clock = std::chrono::steady_clock;

inline double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

}  // namespace detail

// Label of the squared-Euclidean-nearest source row; ties go to the lowest
// source row index.
inline Prediction nearest_neighbor_1(const LabeledDataset& src, const FeatureMatrix& target) {
  validate(src);
  if (src.features.rows() == 0) throw InvalidInputError("1-NN: source dataset is empty");
  if (src.features.cols() != target.cols()) {
    throw InvalidInputError("1-NN: source has " + std::to_string(src.features.cols()) +
                            " features but target has " + std::to_string(target.cols()));
  }
  std::vector<int> labels(target.rows());
  double objective = 0.0;
  for (Eigen::Index j = 0; j < target.rows(); ++j) {
    double best = std::numeric_limits<double>::infinity();
    Eigen::Index best_row = 0;
    for (Eigen::Index i = 0; i < src.features.rows(); ++i) {
      const double dist = (target.row(j) - src.features.row(i)).squaredNorm();
      if (dist < best) {
        best = dist;
        best_row = i;
      }
    }
    labels[j] = src.labels[best_row];
    objective += best;
  }
  Prediction out;
  out.probabilities = detail::one_hot(labels, src.num_classes, objective);
  out.labels = std::move(labels);
  return out;
}

// Per-column argmin of the center distance matrix, lowest class on ties.
inline Prediction nearest_centroid(const LabeledDataset& src, const FeatureMatrix& target) {
  const RealMatrix d = distance_matrix(class_centers(src), target);
  std::vector<int> labels(d.cols());
  double objective = 0.0;
  for (Eigen::Index j = 0; j < d.cols(); ++j) {
    labels[j] = argmin_lowest(d.col(j));
    objective += d(labels[j], j);
  }
  Prediction out;
  out.probabilities = detail::one_hot(labels, src.num_classes, objective);
  out.labels = std::move(labels);
  return out;
}

inline Prediction run_classifier(ClassifierKind kind, const LabeledDataset& src,
                                 const FeatureMatrix& target) {
  switch (kind) {
    case ClassifierKind::easytl:
      return classify(src, target);
    case ClassifierKind::nearest_neighbor_1:
      return nearest_neighbor_1(src, target);
    case ClassifierKind::nearest_centroid:
      return nearest_centroid(src, target);
  }
  throw InvalidInputError("unknown classifier kind");
}

// Applies an already fitted aligner to both domains, then classifies.
template <FeatureAligner Aligner>
PipelineResult run_with(const Aligner& aligner, ClassifierKind classifier,
                        const LabeledDataset& src, const FeatureMatrix& target) {
  PipelineResult out;
  auto start = detail::Clock::now();
  LabeledDataset aligned_src{aligner.apply(src.features, DomainRole::source), src.labels,
                             src.num_classes};
  const FeatureMatrix aligned_target = aligner.apply(target, DomainRole::target);
  out.timings.align_ms += detail::elapsed_ms(start);

  start = detail::Clock::now();
  out.prediction = detail::in_stage(to_string(classifier), [&] {
    return run_classifier(classifier, aligned_src, aligned_target);
  });
  out.timings.classify_ms = detail::elapsed_ms(start);
  return out;
}

// Fits the configured transform on the raw features of both domains, applies
// it per role, and runs the configured classifier.
inline PipelineResult run_timed(const PipelineConfig& cfg, const LabeledDataset& src,
                                const FeatureMatrix& target) {
  detail::in_stage("input", [&] { validate(src); });
  const auto start = detail::Clock::now();
  const FeatureTransform transform = detail::in_stage("alignment", [&] {
    return fit_transform(cfg.alignment, src.features, target);
  });
  const double fit_ms = detail::elapsed_ms(start);
  PipelineResult out = run_with(transform, cfg.classifier, src, target);
  out.timings.align_ms += fit_ms;
  return out;
}

inline Prediction run(const PipelineConfig& cfg, const LabeledDataset& src,
                      const FeatureMatrix& target) {
  return run_timed(cfg, src, target).prediction;
}

}  // namespace easytl
