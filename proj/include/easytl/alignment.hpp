#pragma once

// Intra-domain alignment: whiten the source features with the regularized
// source covariance and re-color them with the regularized target covariance.
// Target features pass through untouched.

#include <concepts>
#include <optional>
#include <string>
#include <string_view>

#include "easytl/error.hpp"
#include "easytl/linalg.hpp"

namespace easytl {

enum class TransformKind { identity, coral };
enum class DomainRole { source, target };

inline std::string_view to_string(TransformKind kind) {
  switch (kind) {
    case TransformKind::identity:
      return "none";
    case TransformKind::coral:
      return "coral";
  }
  return "unknown";
}

class FeatureTransform {
 public:
  static FeatureTransform identity() { return FeatureTransform(TransformKind::identity); }

  // An unfitted coral transform; apply() throws until a map is supplied.
  static FeatureTransform unfitted_coral() { return FeatureTransform(TransformKind::coral); }

  static FeatureTransform coral(RealMatrix fitted_map) {
    if (fitted_map.rows() != fitted_map.cols()) {
      throw InvalidInputError("coral transform: fitted map must be square");
    }
    FeatureTransform t(TransformKind::coral);
    t.fitted_map_ = std::move(fitted_map);
    return t;
  }

  TransformKind kind() const { return kind_; }
  bool fitted() const { return kind_ == TransformKind::identity || fitted_map_.has_value(); }
  const std::optional<RealMatrix>& fitted_map() const { return fitted_map_; }

  // role == source -> x * A; role == target -> x (same object contents).
  FeatureMatrix apply(const FeatureMatrix& x, DomainRole role) const {
    if (kind_ == TransformKind::identity) return x;
    if (!fitted_map_) {
      throw StateError("coral transform applied before it was fitted");
    }
    if (x.cols() != fitted_map_->rows()) {
      throw InvalidInputError("coral transform: feature dimension " +
                              std::to_string(x.cols()) + " does not match fitted dimension " +
                              std::to_string(fitted_map_->rows()));
    }
    if (role == DomainRole::target) return x;
    return x * (*fitted_map_);
  }

 private:
  explicit FeatureTransform(TransformKind kind) : kind_(kind) {}

  TransformKind kind_;
  std::optional<RealMatrix> fitted_map_;
};

// Anything that maps a feature matrix given its domain role. Extra feature
// learners plug into the pipeline through this.
template <typename T>
concept FeatureAligner = requires(const T& t, const FeatureMatrix& x, DomainRole role) {
  { t.apply(x, role) } -> std::convertible_to<FeatureMatrix>;
};

// A = (cov(source) + I)^(-1/2) (cov(target) + I)^(1/2), both d x d.
inline FeatureTransform fit_coral(const FeatureMatrix& source, const FeatureMatrix& target) {
  if (source.cols() != target.cols()) {
    throw InvalidInputError("fit_coral: source has " + std::to_string(source.cols()) +
                            " features but target has " + std::to_string(target.cols()));
  }
  if (source.cols() < 1) throw InvalidInputError("fit_coral: feature dimension is zero");
  if (source.rows() < 1) throw InvalidInputError("fit_coral: source has no samples");
  if (target.rows() < 1) throw InvalidInputError("fit_coral: target has no samples");

  const Eigen::Index d = source.cols();
  const RealMatrix identity = RealMatrix::Identity(d, d);
  const RealMatrix whiten = matrix_power_half(covariance(source) + identity, PowerSign::minus);
  const RealMatrix recolor = matrix_power_half(covariance(target) + identity, PowerSign::plus);
  return FeatureTransform::coral(whiten * recolor);
}

inline FeatureTransform fit_transform(TransformKind kind, const FeatureMatrix& source,
                                      const FeatureMatrix& target) {
  switch (kind) {
    case TransformKind::identity:
      if (source.cols() != target.cols()) {
        throw InvalidInputError("source and target feature dimensions differ");
      }
      return FeatureTransform::identity();
    case TransformKind::coral:
      return fit_coral(source, target);
  }
  throw InvalidInputError("unknown transform kind");
}

}  // namespace easytl
