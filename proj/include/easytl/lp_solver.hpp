#pragma once

// Exact solver for the annotation linear program
//
//   min  sum_cj D_cj M_cj
//   s.t. 0 <= M_cj <= 1
//        sum_c M_cj  = 1   for every target column j
//        sum_j M_cj >= 1   for every class row c
//
// The constraint matrix is the incidence matrix of a bipartite
// transportation network (targets supply one unit each, every class demands
// at least one unit, a slack sink absorbs the n_t - C surplus), so the LP has
// an integral optimal vertex. Such a vertex gives every class one
// "representative" column and sends every other column to its cheapest
// class. Subtracting the column minima m_j = min_c D_cj turns the choice of
// representatives into a C x n_t rectangular assignment problem on the
// reduced costs D_cj - m_j >= 0, which is solved by successive shortest
// augmenting paths with node potentials. The potentials double as an LP dual
// certificate.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "easytl/error.hpp"
#include "easytl/linalg.hpp"

namespace easytl {

class AnnotationProblem {
 public:
  // costs is C x n_t; throws InvalidInputError on an empty class set or a
  // negative / non-finite entry.
  explicit AnnotationProblem(RealMatrix costs) : costs_(std::move(costs)) {
    if (costs_.rows() < 1) {
      throw InvalidInputError("annotation problem needs at least one class");
    }
    for (Eigen::Index c = 0; c < costs_.rows(); ++c) {
      for (Eigen::Index j = 0; j < costs_.cols(); ++j) {
        const double v = costs_(c, j);
        if (!std::isfinite(v) || v < 0.0) {
          throw InvalidInputError("annotation cost D(" + std::to_string(c) + "," +
                                  std::to_string(j) + ") = " + std::to_string(v) +
                                  " is not a finite non-negative number");
        }
      }
    }
  }

  const RealMatrix& costs() const { return costs_; }
  std::size_t num_classes() const { return static_cast<std::size_t>(costs_.rows()); }
  std::size_t num_targets() const { return static_cast<std::size_t>(costs_.cols()); }
  bool feasible() const { return num_targets() >= num_classes(); }

 private:
  RealMatrix costs_;
};

// Dual variables of the LP: column_duals (free, one per target) and
// class_duals (>= 0, one per class) with column_duals_j + class_duals_c <=
// D_cj. At optimum the dual objective equals the primal objective.
struct DualCertificate {
  RealVector column_duals;
  RealVector class_duals;

  double objective() const { return column_duals.sum() + class_duals.sum(); }
};

struct AnnotationMatrix {
  RealMatrix values;              // C x n_t
  double objective = 0.0;         // sum_cj D_cj M_cj
  std::vector<int> assignment;    // class of each column at an integral vertex
  std::optional<DualCertificate> dual;
};

namespace lp {

inline constexpr double kZeroTolerance = 1e-9;
inline constexpr double kFeasibilityTolerance = 1e-7;

inline void require_feasible(const AnnotationProblem& p) {
  if (!p.feasible()) {
    throw InfeasibleError("infeasible annotation problem: n_t = " +
                              std::to_string(p.num_targets()) + " target samples cannot cover C = " +
                              std::to_string(p.num_classes()) + " classes",
                          p.num_targets(), p.num_classes());
  }
}

inline AnnotationMatrix from_assignment(const AnnotationProblem& p, std::vector<int> assignment) {
  const RealMatrix& d = p.costs();
  AnnotationMatrix out;
  out.values = RealMatrix::Zero(d.rows(), d.cols());
  out.objective = 0.0;
  for (Eigen::Index j = 0; j < d.cols(); ++j) {
    out.values(assignment[j], j) = 1.0;
    out.objective += d(assignment[j], j);
  }
  out.assignment = std::move(assignment);
  return out;
}

// Rectangular assignment, rows <= cols, minimizing sum_r a(r, col(r)).
// Returns the column of each row plus the row/column potentials u, v with
// u_r + v_c <= a(r, c), equality on matched pairs, u >= 0, v <= 0, and
// v_c = 0 on every unmatched column.
struct AssignmentResult {
  std::vector<Eigen::Index> row_to_col;
  RealVector row_potential;
  RealVector col_potential;
};

inline AssignmentResult shortest_augmenting_path_assignment(const RealMatrix& a) {
  const Eigen::Index rows = a.rows();
  const Eigen::Index cols = a.cols();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr Eigen::Index kNone = -1;

  std::vector<double> u(rows, 0.0);
  std::vector<double> v(cols, 0.0);
  std::vector<Eigen::Index> col_owner(cols, kNone);  // row matched to column
  std::vector<Eigen::Index> way(cols, kNone);
  std::vector<double> min_slack(cols);
  std::vector<char> visited(cols);

  for (Eigen::Index row = 0; row < rows; ++row) {
    // Grow a shortest-path tree from `row` until a free column is reached.
    std::fill(min_slack.begin(), min_slack.end(), kInf);
    std::fill(visited.begin(), visited.end(), 0);
    std::fill(way.begin(), way.end(), kNone);
    Eigen::Index current_row = row;
    Eigen::Index current_col = kNone;
    for (;;) {
      double delta = kInf;
      Eigen::Index next_col = kNone;
      for (Eigen::Index c = 0; c < cols; ++c) {
        if (visited[c]) continue;
        const double slack = a(current_row, c) - u[current_row] - v[c];
        if (slack < min_slack[c]) {
          min_slack[c] = slack;
          way[c] = current_col;
        }
        if (min_slack[c] < delta) {
          delta = min_slack[c];
          next_col = c;
        }
      }
      // Shift potentials so the tree stays tight.
      u[row] += delta;
      for (Eigen::Index c = 0; c < cols; ++c) {
        if (visited[c]) {
          u[col_owner[c]] += delta;
          v[c] -= delta;
        } else {
          min_slack[c] -= delta;
        }
      }
      current_col = next_col;
      if (col_owner[current_col] == kNone) break;
      visited[current_col] = 1;
      current_row = col_owner[current_col];
    }
    // Flip the alternating path.
    while (current_col != kNone) {
      const Eigen::Index prev_col = way[current_col];
      col_owner[current_col] = prev_col == kNone ? row : col_owner[prev_col];
      current_col = prev_col;
    }
  }

  AssignmentResult out;
  out.row_to_col.assign(rows, kNone);
  for (Eigen::Index c = 0; c < cols; ++c) {
    if (col_owner[c] != kNone) out.row_to_col[col_owner[c]] = c;
  }
  out.row_potential = Eigen::Map<const RealVector>(u.data(), rows);
  out.col_potential = Eigen::Map<const RealVector>(v.data(), cols);
  return out;
}

// Among cost-equivalent optima, move each column to the lowest class index
// that costs the same, as long as the class it leaves stays covered.
inline void prefer_lowest_class(const RealMatrix& d, std::vector<int>& assignment,
                                std::vector<int>& class_count) {
  for (Eigen::Index j = 0; j < d.cols(); ++j) {
    const int current = assignment[j];
    if (class_count[current] < 2) continue;
    for (int c = 0; c < current; ++c) {
      if (std::abs(d(c, j) - d(current, j)) <= kZeroTolerance) {
        --class_count[current];
        ++class_count[c];
        assignment[j] = c;
        break;
      }
    }
  }
}

}  // namespace lp

// Proven-optimal integral vertex of the annotation LP, with a dual
// certificate. Throws InfeasibleError when n_t < C.
inline AnnotationMatrix solve(const AnnotationProblem& p) {
  lp::require_feasible(p);
  const RealMatrix& d = p.costs();
  const Eigen::Index num_classes = d.rows();
  const Eigen::Index num_targets = d.cols();

  const RealVector column_min = d.colwise().minCoeff().transpose();
  const RealMatrix reduced = d.rowwise() - column_min.transpose();
  const lp::AssignmentResult representatives = lp::shortest_augmenting_path_assignment(reduced);

  std::vector<int> assignment(num_targets, -1);
  std::vector<int> class_count(num_classes, 0);
  for (Eigen::Index c = 0; c < num_classes; ++c) {
    assignment[representatives.row_to_col[c]] = static_cast<int>(c);
    ++class_count[c];
  }
  for (Eigen::Index j = 0; j < num_targets; ++j) {
    if (assignment[j] >= 0) continue;
    Eigen::Index best = 0;
    d.col(j).minCoeff(&best);  // first minimum -> lowest class index
    assignment[j] = static_cast<int>(best);
    ++class_count[best];
  }
  lp::prefer_lowest_class(d, assignment, class_count);

  AnnotationMatrix out = lp::from_assignment(p, std::move(assignment));
  DualCertificate dual;
  dual.column_duals = column_min + representatives.col_potential;
  dual.class_duals = representatives.row_potential;
  out.dual = std::move(dual);
  return out;
}

// Exhaustive search over every integral column -> class map that covers all
// classes. Test oracle only; limited to C <= 5, n_t <= 10 and C^n_t <= 1e7.
inline AnnotationMatrix brute_force_solve(const AnnotationProblem& p) {
  constexpr std::size_t kMaxClasses = 5;
  constexpr std::size_t kMaxTargets = 10;
  constexpr double kMaxEnumerations = 1e7;
  const std::size_t num_classes = p.num_classes();
  const std::size_t num_targets = p.num_targets();
  if (num_classes > kMaxClasses || num_targets > kMaxTargets ||
      std::pow(static_cast<double>(num_classes), static_cast<double>(num_targets)) >
          kMaxEnumerations) {
    throw CapacityError("brute_force_solve: instance with C = " + std::to_string(num_classes) +
                        ", n_t = " + std::to_string(num_targets) + " is too large to enumerate");
  }
  lp::require_feasible(p);

  const RealMatrix& d = p.costs();
  std::vector<int> current(num_targets, 0);
  std::vector<int> best;
  double best_cost = std::numeric_limits<double>::infinity();
  std::vector<int> count(num_classes, 0);
  for (;;) {
    std::fill(count.begin(), count.end(), 0);
    double cost = 0.0;
    for (std::size_t j = 0; j < num_targets; ++j) {
      ++count[current[j]];
      cost += d(current[j], static_cast<Eigen::Index>(j));
    }
    bool covered = true;
    for (int n : count) covered = covered && n > 0;
    if (covered && cost < best_cost) {
      best_cost = cost;
      best = current;
    }
    // Odometer increment; column 0 is the fastest digit.
    std::size_t j = 0;
    while (j < num_targets && ++current[j] == static_cast<int>(num_classes)) {
      current[j] = 0;
      ++j;
    }
    if (j == num_targets) break;
  }
  return lp::from_assignment(p, std::move(best));
}

}  // namespace easytl
