#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Core>

namespace geomir {

enum class ExaggerationMode {
  /// X_new replaces X.
  Literal,
  /// X_new scales X.
  Multiplicative,
};

struct PostprocConfig {
  double prune_threshold = 1e-3;
  double exaggeration_factor = 2.3;
  ExaggerationMode mode = ExaggerationMode::Literal;

  void validate() const;
};

/// (a - 1) * (1 - sin(X * pi / 2)) + 1 with X clamped to [0, 1]. Maps [0, 1]
/// onto [1, a], decreasing for a > 1.
template <typename Scalar>
Scalar exaggerate(Scalar x, Scalar a) {
  using std::sin;
  const Scalar clamped = x < Scalar(0) ? Scalar(0) : (x > Scalar(1) ? Scalar(1) : x);
  return (a - Scalar(1)) * (Scalar(1) - sin(clamped * Scalar(std::numbers::pi / 2))) + Scalar(1);
}

template <typename Scalar>
Scalar exaggerate(Scalar x, Scalar a, ExaggerationMode mode) {
  const Scalar gain = exaggerate(x, a);
  if (mode == ExaggerationMode::Literal) return gain;
  const Scalar clamped = x < Scalar(0) ? Scalar(0) : (x > Scalar(1) ? Scalar(1) : x);
  return clamped * gain;
}

/// Fitted dataset-wide post-processing state. Immutable once fitted.
struct PipelineModel {
  std::vector<bool> keep_mask;
  /// Per kept dimension, in raw-dimension order.
  Eigen::VectorXd min;
  Eigen::VectorXd max;
  PostprocConfig config;
  /// Divisor applied after multiplicative exaggeration so the output peaks
  /// at 1. Unused in literal mode.
  double output_scale = 1.0;

  Eigen::Index raw_dimension() const { return static_cast<Eigen::Index>(keep_mask.size()); }
  Eigen::Index kept_dimension() const { return min.size(); }

  friend bool operator==(const PipelineModel& l, const PipelineModel& r) {
    return l.keep_mask == r.keep_mask && l.min.size() == r.min.size() && l.min == r.min &&
           l.max == r.max && l.config.prune_threshold == r.config.prune_threshold &&
           l.config.exaggeration_factor == r.config.exaggeration_factor &&
           l.config.mode == r.config.mode && l.output_scale == r.output_scale;
  }
};

/// Rows are L1-normalized feature vectors. Throws EmptyDataset, AllPruned.
PipelineModel fit_pipeline(const Eigen::MatrixXd& features, const PostprocConfig& cfg = {});

/// Prune, min-max scale (clamped), exaggerate, rescale to [0, 1].
/// Throws DimensionMismatch.
Eigen::VectorXd apply_pipeline(const PipelineModel& model, const Eigen::Ref<const Eigen::VectorXd>& v);

/// apply_pipeline on every row.
Eigen::MatrixXd apply_pipeline_rows(const PipelineModel& model, const Eigen::MatrixXd& features);

}  // namespace geomir
