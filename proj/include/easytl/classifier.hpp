#pragma once

// Intra-domain programming: a transductive classifier that assigns target
// samples to source class centers through the annotation LP, forcing every
// class to receive at least one target sample.

#include <string>
#include <vector>

#include "easytl/error.hpp"
#include "easytl/linalg.hpp"
#include "easytl/lp_solver.hpp"

namespace easytl {

struct LabeledDataset {
  FeatureMatrix features;   // n x d
  std::vector<int> labels;  // length n, values in [0, num_classes)
  int num_classes = 0;

  std::size_t size() const { return labels.size(); }
};

// labels.size() must match the row count and every label must lie in
// [0, num_classes). Class presence is checked later, by the classifiers.
inline void validate(const LabeledDataset& src) {
  if (static_cast<Eigen::Index>(src.labels.size()) != src.features.rows()) {
    throw InvalidInputError("labeled dataset has " + std::to_string(src.features.rows()) +
                            " rows but " + std::to_string(src.labels.size()) + " labels");
  }
  if (src.num_classes < 1) throw InvalidInputError("labeled dataset declares no classes");
  for (std::size_t i = 0; i < src.labels.size(); ++i) {
    if (src.labels[i] < 0 || src.labels[i] >= src.num_classes) {
      throw InvalidInputError("label " + std::to_string(src.labels[i]) + " at row " +
                              std::to_string(i) + " is outside [0, " +
                              std::to_string(src.num_classes) + ")");
    }
  }
}

struct ClassCenters {
  RealMatrix centers;       // C x d
  std::vector<int> counts;  // samples per class

  int num_classes() const { return static_cast<int>(centers.rows()); }
  Eigen::Index dimension() const { return centers.cols(); }
};

struct Prediction {
  std::vector<int> labels;
  AnnotationMatrix probabilities;
};

// Mean source feature vector of each class.
inline ClassCenters class_centers(const LabeledDataset& src) {
  validate(src);
  ClassCenters out;
  out.centers = RealMatrix::Zero(src.num_classes, src.features.cols());
  out.counts.assign(src.num_classes, 0);
  for (Eigen::Index i = 0; i < src.features.rows(); ++i) {
    const int c = src.labels[i];
    out.centers.row(c) += src.features.row(i);
    ++out.counts[c];
  }
  for (int c = 0; c < src.num_classes; ++c) {
    if (out.counts[c] == 0) {
      throw MissingClassError("class " + std::to_string(c) + " has no source samples", c);
    }
    out.centers.row(c) /= static_cast<double>(out.counts[c]);
  }
  return out;
}

// D(c, j) = ||target_j - center_c||^2.
inline RealMatrix distance_matrix(const ClassCenters& centers, const FeatureMatrix& target) {
  if (target.cols() != centers.dimension()) {
    throw InvalidInputError("target has " + std::to_string(target.cols()) +
                            " features but class centers have " +
                            std::to_string(centers.dimension()));
  }
  RealMatrix d(centers.num_classes(), target.rows());
  for (Eigen::Index j = 0; j < target.rows(); ++j) {
    for (int c = 0; c < centers.num_classes(); ++c) {
      d(c, j) = (target.row(j) - centers.centers.row(c)).squaredNorm();
    }
  }
  return d;
}

// Index of the largest entry; ties resolve to the lowest index.
inline int argmax_lowest(const Eigen::Ref<const RealVector>& column) {
  Eigen::Index best = 0;
  for (Eigen::Index c = 1; c < column.size(); ++c) {
    if (column(c) > column(best)) best = c;
  }
  return static_cast<int>(best);
}

inline int argmin_lowest(const Eigen::Ref<const RealVector>& column) {
  Eigen::Index best = 0;
  for (Eigen::Index c = 1; c < column.size(); ++c) {
    if (column(c) < column(best)) best = c;
  }
  return static_cast<int>(best);
}

// Divide each column by its sum, then take the per-column argmax.
inline std::vector<int> labels_from_annotation(RealMatrix& annotation) {
  std::vector<int> labels(annotation.cols());
  for (Eigen::Index j = 0; j < annotation.cols(); ++j) {
    const double total = annotation.col(j).sum();
    if (total > 0.0) annotation.col(j) /= total;
    labels[j] = argmax_lowest(annotation.col(j));
  }
  return labels;
}

// Classify from a precomputed C x n_t distance matrix.
inline Prediction classify_distances(const RealMatrix& distances) {
  Prediction out;
  out.probabilities = solve(AnnotationProblem(distances));
  out.labels = labels_from_annotation(out.probabilities.values);
  return out;
}

inline Prediction classify(const LabeledDataset& src, const FeatureMatrix& target) {
  const ClassCenters centers = class_centers(src);
  if (target.rows() < centers.num_classes()) {
    throw InfeasibleError("infeasible annotation problem: n_t = " +
                              std::to_string(target.rows()) + " target samples cannot cover C = " +
                              std::to_string(centers.num_classes()) + " classes",
                          static_cast<std::size_t>(target.rows()),
                          static_cast<std::size_t>(centers.num_classes()));
  }
  return classify_distances(distance_matrix(centers, target));
}

}  // namespace easytl
