#include <gtest/gtest.h>

#include <set>

#include "easytl/dataio.hpp"
#include "easytl/pipeline.hpp"
#include "test_support.hpp"

namespace easytl {
namespace {

using testing::data_path;
using testing::Rng;

LabeledDataset random_source(Rng& rng, int num_classes, int n, int d) {
  LabeledDataset src;
  src.num_classes = num_classes;
  src.features = rng.normal_matrix(n, d);
  for (int i = 0; i < n; ++i) src.labels.push_back(i % num_classes);
  return src;
}

// Independent 1-NN: exhaustive scan keeping the first strict minimum.
std::vector<int> scan_nearest(const LabeledDataset& src, const RealMatrix& target) {
  std::vector<int> out;
  for (Eigen::Index j = 0; j < target.rows(); ++j) {
    double best = -1;
    int label = -1;
    for (Eigen::Index i = 0; i < src.features.rows(); ++i) {
      double dist = 0;
      for (Eigen::Index k = 0; k < target.cols(); ++k) {
        const double diff = target(j, k) - src.features(i, k);
        dist += diff * diff;
      }
      if (label < 0 || dist < best) {
        best = dist;
        label = src.labels[i];
      }
    }
    out.push_back(label);
  }
  return out;
}

TEST(NearestNeighbor, SelfMatchRecoversLabels) {
  Rng rng(1);
  const LabeledDataset src = random_source(rng, 3, 12, 4);
  const Prediction p = run({TransformKind::identity, ClassifierKind::nearest_neighbor_1}, src,
                           src.features);
  EXPECT_EQ(p.labels, src.labels);
}

TEST(NearestNeighbor, TieGoesToLowestRow) {
  LabeledDataset src;
  src.num_classes = 2;
  src.features.resize(8, 1);
  src.features << 100, 100, 100, -1, 100, 100, 100, 1;
  src.labels = {0, 0, 0, 1, 0, 0, 0, 0};
  RealMatrix t(1, 1);
  t << 0;
  EXPECT_EQ(nearest_neighbor_1(src, t).labels, (std::vector<int>{1}));
}

TEST(NearestNeighbor, MatchesExhaustiveScan) {
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const LabeledDataset src = random_source(rng, 3, 20, 3);
    const RealMatrix target = rng.normal_matrix(15, 3);
    EXPECT_EQ(nearest_neighbor_1(src, target).labels, scan_nearest(src, target));
  }
}

TEST(NearestNeighbor, Errors) {
  LabeledDataset empty;
  empty.num_classes = 1;
  empty.features.resize(0, 2);
  EXPECT_THROW(nearest_neighbor_1(empty, RealMatrix::Zero(1, 2)), InvalidInputError);
  Rng rng(3);
  EXPECT_THROW(nearest_neighbor_1(random_source(rng, 2, 4, 2), RealMatrix::Zero(1, 3)),
               InvalidInputError);
}

TEST(NearestCentroid, Examples) {
  LabeledDataset src;
  src.num_classes = 2;
  src.features.resize(2, 1);
  src.features << 0, 10;
  src.labels = {0, 1};
  RealMatrix t(2, 1);
  t << 3, 5;
  EXPECT_EQ(nearest_centroid(src, t).labels, (std::vector<int>{0, 0}));

  src.labels = {0, 0};
  EXPECT_THROW(nearest_centroid(src, t), MissingClassError);
}

TEST(NearestCentroid, EasyTLDiffersExactlyOnReassignedColumns) {
  LabeledDataset src;
  src.num_classes = 2;
  src.features.resize(2, 1);
  src.features << 0, 10;
  src.labels = {0, 1};
  RealMatrix t(4, 1);
  t << 1, 2, 4, 3;
  const Prediction nc = nearest_centroid(src, t);
  const Prediction ez = classify(src, t);
  const AnnotationMatrix oracle =
      brute_force_solve(AnnotationProblem(distance_matrix(class_centers(src), t)));
  EXPECT_NEAR(ez.probabilities.objective, oracle.objective, 1e-9);
  EXPECT_EQ(nc.labels, (std::vector<int>{0, 0, 0, 0}));
  EXPECT_EQ(ez.labels, (std::vector<int>{0, 0, 1, 0}));
  EXPECT_EQ(ez.labels, oracle.assignment);
}

TEST(PipelineProperty, EasyTLObjectiveBoundsColumnMinimum) {
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const int c = rng.integer(1, 5);
    const LabeledDataset src = random_source(rng, c, rng.integer(c, 20), 2);
    const RealMatrix target = rng.normal_matrix(rng.integer(c, 20), 2) * 2.0;
    const Prediction nc = nearest_centroid(src, target);
    const Prediction ez = classify(src, target);
    const double column_min = nc.probabilities.objective;
    EXPECT_GE(ez.probabilities.objective, column_min - 1e-9);
    const bool nc_covers =
        static_cast<int>(std::set<int>(nc.labels.begin(), nc.labels.end()).size()) == c;
    if (nc_covers) {
      EXPECT_NEAR(ez.probabilities.objective, column_min, 1e-9);
    } else {
      EXPECT_GT(ez.probabilities.objective, column_min);
    }
  }
}

TEST(Pipeline, NoAlignmentLeavesFeaturesUntouched) {
  Rng rng(5);
  const LabeledDataset src = random_source(rng, 2, 10, 3);
  const RealMatrix target = rng.normal_matrix(8, 3);
  const FeatureTransform t = fit_transform(TransformKind::identity, src.features, target);
  EXPECT_TRUE(t.apply(src.features, DomainRole::source) == src.features);
  EXPECT_TRUE(t.apply(target, DomainRole::target) == target);
  EXPECT_EQ(run({TransformKind::identity, ClassifierKind::easytl}, src, target).labels,
            classify(src, target).labels);
}

TEST(Pipeline, CoralOnSameDistributionMatchesPlain) {
  Rng rng(6);
  const LabeledDataset src = random_source(rng, 3, 30, 4);
  const Prediction with = run({TransformKind::coral, ClassifierKind::easytl}, src, src.features);
  const Prediction without =
      run({TransformKind::identity, ClassifierKind::easytl}, src, src.features);
  EXPECT_EQ(with.labels, without.labels);
}

TEST(Pipeline, AllClassifiersDeterministic) {
  Rng rng(7);
  const LabeledDataset src = random_source(rng, 3, 30, 4);
  const RealMatrix target = rng.normal_matrix(25, 4) * 1.7;
  for (auto kind : {ClassifierKind::easytl, ClassifierKind::nearest_neighbor_1,
                    ClassifierKind::nearest_centroid}) {
    const PipelineConfig cfg{TransformKind::coral, kind};
    EXPECT_EQ(run(cfg, src, target).labels, run(cfg, src, target).labels);
  }
}

TEST(Pipeline, ErrorsCarryStage) {
  Rng rng(8);
  const LabeledDataset src = random_source(rng, 3, 9, 2);
  try {
    run({TransformKind::coral, ClassifierKind::easytl}, src, rng.normal_matrix(2, 2));
    FAIL();
  } catch (const InfeasibleError& e) {
    EXPECT_EQ(e.num_targets(), 2u);
    EXPECT_NE(std::string(e.what()).find("easytl:"), std::string::npos);
  }
  EXPECT_THROW(run({TransformKind::coral, ClassifierKind::easytl}, src, rng.normal_matrix(5, 3)),
               InvalidInputError);
}

TEST(Pipeline, CustomAlignerPlugsIn) {
  struct Scale {
    double factor;
    FeatureMatrix apply(const FeatureMatrix& x, DomainRole role) const {
      return role == DomainRole::source ? FeatureMatrix(x * factor) : x;
    }
  };
  static_assert(FeatureAligner<Scale>);
  static_assert(FeatureAligner<FeatureTransform>);
  Rng rng(9);
  const LabeledDataset src = random_source(rng, 2, 10, 2);
  const PipelineResult r = run_with(Scale{1.0}, ClassifierKind::easytl, src, src.features);
  EXPECT_EQ(r.prediction.labels, classify(src, src.features).labels);
}

TEST(Pipeline, SyntheticShiftFixture) {
  DatasetFile f;
  f.path = data_path("shift_source.csv");
  const LoadedDataset src = load_labeled(f);
  DatasetFile tf;
  tf.path = data_path("shift_target.csv");
  const FeatureMatrix target = load_unlabeled(tf);
  DatasetFile lf;
  lf.path = data_path("shift_target_labels.csv");
  std::vector<int> truth;
  for (const auto& name : load_label_column(lf)) truth.push_back(*src.dictionary.find(name));

  const auto accuracy = [&](PipelineConfig cfg) {
    return score(run(cfg, src.data, target).labels, truth, src.data.num_classes).accuracy;
  };
  EXPECT_EQ(accuracy({TransformKind::coral, ClassifierKind::easytl}), 1.0);
  EXPECT_LT(accuracy({TransformKind::identity, ClassifierKind::nearest_neighbor_1}), 1.0);
  EXPECT_DOUBLE_EQ(accuracy({TransformKind::identity, ClassifierKind::nearest_neighbor_1}), 0.99);
}

}  // namespace
}  // namespace easytl
