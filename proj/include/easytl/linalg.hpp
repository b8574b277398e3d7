#pragma once

// Dense symmetric linear algebra used by the alignment step: covariance
// estimation and regularized matrix square roots.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

#include "easytl/error.hpp"

namespace easytl {

// Rows are samples, columns are features.
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using FeatureMatrix = RealMatrix;

// Eigenpairs of a symmetric matrix. Eigenvalues are sorted in descending
// order; eigenvectors are the matching orthonormal columns.
struct SymmetricSpectrum {
  RealVector eigenvalues;
  RealMatrix eigenvectors;

  RealMatrix reconstruct() const {
    return eigenvectors * eigenvalues.asDiagonal() * eigenvectors.transpose();
  }
};

enum class PowerSign { plus = 1, minus = -1 };

namespace linalg {

inline constexpr double kSymmetryTolerance = 1e-8;
inline constexpr double kEigenvalueFloor = 1e-12;

inline bool all_finite(const RealMatrix& m) { return m.allFinite(); }

inline void require_square(const RealMatrix& s, const char* what) {
  if (s.rows() != s.cols()) {
    throw InvalidInputError(std::string(what) + ": expected a square matrix, got " +
                            std::to_string(s.rows()) + "x" +
                            std::to_string(s.cols()));
  }
}

}  // namespace linalg

// Unbiased (n-1) sample covariance of the columns of x. Fewer than two rows
// yield the d x d zero matrix. The result is exactly symmetric.
inline RealMatrix covariance(const RealMatrix& x) {
  if (x.cols() == 0) {
    throw InvalidInputError("covariance: matrix has no columns");
  }
  if (!linalg::all_finite(x)) {
    throw InvalidInputError("covariance: matrix contains non-finite entries");
  }
  const Eigen::Index d = x.cols();
  if (x.rows() <= 1) return RealMatrix::Zero(d, d);

  const Eigen::RowVectorXd mean = x.colwise().mean();
  const RealMatrix centered = x.rowwise() - mean;
  RealMatrix cov = (centered.transpose() * centered) /
                   static_cast<double>(x.rows() - 1);
  // Floating-point addition commutes, so this is symmetric bit for bit.
  return (0.5 * (cov + cov.transpose())).eval();
}

// Symmetric eigendecomposition. The input is symmetrized as (S + S^T) / 2
// first; inputs further than kSymmetryTolerance (relative) from symmetric are
// rejected.
inline SymmetricSpectrum symmetric_eig(const RealMatrix& s) {
  linalg::require_square(s, "symmetric_eig");
  if (!linalg::all_finite(s)) {
    throw InvalidInputError("symmetric_eig: matrix contains non-finite entries");
  }
  const double scale = std::max(1.0, s.norm());
  if ((s - s.transpose()).norm() > linalg::kSymmetryTolerance * scale) {
    throw InvalidInputError("symmetric_eig: matrix is not symmetric");
  }
  const RealMatrix sym = 0.5 * (s + s.transpose());

  SymmetricSpectrum out;
  if (sym.rows() == 0) {
    out.eigenvalues.resize(0);
    out.eigenvectors.resize(0, 0);
    return out;
  }
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(sym, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw InvalidInputError("symmetric_eig: eigensolver did not converge");
  }
  // Eigen returns ascending order.
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

// V diag(lambda^(+-1/2)) V^T. Eigenvalues are clamped at kEigenvalueFloor
// before the power is taken; callers pass cov + I so this only trims noise.
inline RealMatrix matrix_power_half(const RealMatrix& s, PowerSign sign) {
  const SymmetricSpectrum spectrum = symmetric_eig(s);
  const double exponent = sign == PowerSign::plus ? 0.5 : -0.5;
  const RealVector powered = spectrum.eigenvalues.unaryExpr([exponent](double v) {
    return std::pow(std::max(v, linalg::kEigenvalueFloor), exponent);
  });
  RealMatrix out =
      spectrum.eigenvectors * powered.asDiagonal() * spectrum.eigenvectors.transpose();
  return (0.5 * (out + out.transpose())).eval();
}

}  // namespace easytl
