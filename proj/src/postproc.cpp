#include "geomir/postproc.hpp"

#include <algorithm>
#include <string>

#include "geomir/error.hpp"

namespace geomir {

void PostprocConfig::validate() const {
  if (!(prune_threshold >= 0.0)) throw Error(ErrorKind::InvalidConfig, "prune_threshold must be >= 0");
  if (!(exaggeration_factor >= 1.0)) throw Error(ErrorKind::InvalidConfig, "exaggeration factor must be >= 1");
}

namespace {

// Peak of x * g(x) over [0, 1], sampled densely; at least 1 since g(1) = 1.
double multiplicative_peak(double a) {
  constexpr int kSamples = 100000;
  double peak = 1.0;
  for (int i = 0; i <= kSamples; ++i) {
    const double x = static_cast<double>(i) / kSamples;
    peak = std::max(peak, exaggerate(x, a, ExaggerationMode::Multiplicative));
  }
  return peak;
}

}  // namespace

PipelineModel fit_pipeline(const Eigen::MatrixXd& features, const PostprocConfig& cfg) {
  cfg.validate();
  if (features.rows() == 0) throw Error(ErrorKind::EmptyDataset, "no feature vectors to fit");

  PipelineModel model;
  model.config = cfg;
  model.keep_mask.resize(static_cast<std::size_t>(features.cols()));
  std::vector<Eigen::Index> kept;
  for (Eigen::Index j = 0; j < features.cols(); ++j) {
    const bool keep = features.col(j).maxCoeff() >= cfg.prune_threshold;
    model.keep_mask[static_cast<std::size_t>(j)] = keep;
    if (keep) kept.push_back(j);
  }
  if (kept.empty()) {
    throw Error(ErrorKind::AllPruned, "no dimension reaches threshold " + std::to_string(cfg.prune_threshold));
  }

  model.min.resize(static_cast<Eigen::Index>(kept.size()));
  model.max.resize(static_cast<Eigen::Index>(kept.size()));
  for (std::size_t k = 0; k < kept.size(); ++k) {
    const auto column = features.col(kept[k]);
    model.min(static_cast<Eigen::Index>(k)) = column.minCoeff();
    model.max(static_cast<Eigen::Index>(k)) = column.maxCoeff();
  }
  if (cfg.mode == ExaggerationMode::Multiplicative) {
    model.output_scale = multiplicative_peak(cfg.exaggeration_factor);
  }
  return model;
}

Eigen::VectorXd apply_pipeline(const PipelineModel& model, const Eigen::Ref<const Eigen::VectorXd>& v) {
  if (v.size() != model.raw_dimension()) {
    throw Error(ErrorKind::DimensionMismatch, "expected " + std::to_string(model.raw_dimension()) +
                                                  " features, got " + std::to_string(v.size()));
  }
  const double a = model.config.exaggeration_factor;
  const bool literal = model.config.mode == ExaggerationMode::Literal;
  Eigen::VectorXd out(model.kept_dimension());
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    if (!model.keep_mask[static_cast<std::size_t>(j)]) continue;
    const double range = model.max(k) - model.min(k);
    const double scaled = range > 0.0 ? std::clamp((v(j) - model.min(k)) / range, 0.0, 1.0) : 0.0;
    double value;
    if (a == 1.0) {
      value = scaled;
    } else if (literal) {
      value = (exaggerate(scaled, a) - 1.0) / (a - 1.0);
    } else {
      value = exaggerate(scaled, a, ExaggerationMode::Multiplicative) / model.output_scale;
    }
    out(k++) = value;
  }
  return out;
}

Eigen::MatrixXd apply_pipeline_rows(const PipelineModel& model, const Eigen::MatrixXd& features) {
  Eigen::MatrixXd out(features.rows(), model.kept_dimension());
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    const Eigen::VectorXd row = features.row(i).transpose();
    out.row(i) = apply_pipeline(model, row).transpose();
  }
  return out;
}

}  // namespace geomir
