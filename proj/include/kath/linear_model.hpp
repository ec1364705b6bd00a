#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "kath/features.hpp"

namespace kath {

// Multinomial logistic model over hashed binary features.
//
// Weights are stored classes x dim, column-major, so the per-class weights of
// one feature are contiguous and a sparse update touches |features| columns.
template <typename Scalar>
struct LinearModel {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  std::vector<std::string> class_labels;
  Matrix weights;
  Vector bias;
  std::uint32_t trained_epochs = 0;
  std::uint64_t seed = 0;

  LinearModel() = default;
  LinearModel(std::vector<std::string> labels, Eigen::Index dim)
      : class_labels(std::move(labels)),
        weights(Matrix::Zero(static_cast<Eigen::Index>(class_labels.size()), dim)),
        bias(Vector::Zero(static_cast<Eigen::Index>(class_labels.size()))) {}

  Eigen::Index classes() const { return weights.rows(); }
  Eigen::Index dim() const { return weights.cols(); }

  // bias + sum of weight columns, accumulated in double.
  Eigen::VectorXd scores(const FeatureVector& fv) const {
    Eigen::VectorXd out = bias.template cast<double>();
    for (FeatureIndex idx : fv.indices()) out += weights.col(idx).template cast<double>();
    return out;
  }

  bool all_finite() const { return weights.allFinite() && bias.allFinite(); }
};

// Lowest index wins ties.
template <typename Derived>
Eigen::Index argmax(const Eigen::MatrixBase<Derived>& scores) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < scores.size(); ++i) {
    if (scores(i) > scores(best)) best = i;
  }
  return best;
}

template <typename Derived>
Eigen::VectorXd softmax(const Eigen::MatrixBase<Derived>& scores) {
  const Eigen::VectorXd shifted = scores.template cast<double>().array() - scores.maxCoeff();
  const Eigen::VectorXd e = shifted.array().exp();
  return e / e.sum();
}

// -log softmax(scores)[gold].
template <typename Derived>
double cross_entropy(const Eigen::MatrixBase<Derived>& scores, Eigen::Index gold) {
  const double m = scores.maxCoeff();
  const double log_z = m + std::log((scores.template cast<double>().array() - m).exp().sum());
  return log_z - static_cast<double>(scores(gold));
}

// d(cross_entropy)/d(scores) = softmax(scores) - onehot(gold).
template <typename Derived>
Eigen::VectorXd cross_entropy_score_gradient(const Eigen::MatrixBase<Derived>& scores,
                                             Eigen::Index gold) {
  Eigen::VectorXd g = softmax(scores);
  g(gold) -= 1.0;
  return g;
}

template <typename Scalar>
struct LossGradient {
  double loss = 0.0;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> weights;  // classes x dim
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> bias;
};

// Dense analytic gradient of the cross-entropy for one example. Intended for
// small models (gradient checking); training applies the sparse form.
template <typename Scalar>
LossGradient<Scalar> cross_entropy_gradient(const LinearModel<Scalar>& model,
                                            const FeatureVector& fv, Eigen::Index gold) {
  const Eigen::VectorXd s = model.scores(fv);
  const Eigen::VectorXd g = cross_entropy_score_gradient(s, gold);
  LossGradient<Scalar> out;
  out.loss = cross_entropy(s, gold);
  out.weights.setZero(model.classes(), model.dim());
  for (FeatureIndex idx : fv.indices()) out.weights.col(idx) += g.template cast<Scalar>();
  out.bias = g.template cast<Scalar>();
  return out;
}

// w . f_c for each candidate, using row 0 of a single-row model. The arc
// scorer normalizes these with a softmax across candidates.
template <typename Scalar>
Eigen::VectorXd candidate_scores(const LinearModel<Scalar>& model,
                                 std::span<const FeatureVector> candidates) {
  Eigen::VectorXd s(static_cast<Eigen::Index>(candidates.size()));
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    double acc = 0.0;
    for (FeatureIndex idx : candidates[c].indices()) acc += static_cast<double>(model.weights(0, idx));
    s(static_cast<Eigen::Index>(c)) = acc;
  }
  return s;
}

template <typename Scalar>
LossGradient<Scalar> candidate_cross_entropy_gradient(const LinearModel<Scalar>& model,
                                                      std::span<const FeatureVector> candidates,
                                                      Eigen::Index gold) {
  const Eigen::VectorXd s = candidate_scores(model, candidates);
  const Eigen::VectorXd g = cross_entropy_score_gradient(s, gold);
  LossGradient<Scalar> out;
  out.loss = cross_entropy(s, gold);
  out.weights.setZero(1, model.dim());
  out.bias.setZero(1);
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    for (FeatureIndex idx : candidates[c].indices()) {
      out.weights(0, idx) += static_cast<Scalar>(g(static_cast<Eigen::Index>(c)));
    }
  }
  return out;
}

// SGD with exact L2 via a lazily applied scale: effective weights are
// scale * weights. Each step costs O(classes * |features|).
template <typename Scalar>
class SgdTrainer {
 public:
  struct Schedule {
    double lr0 = 0.1;
    double decay = 1e-4;
    double l2 = 1e-6;
  };

  SgdTrainer(LinearModel<Scalar>& model, Schedule schedule)
      : model_(model), schedule_(schedule) {}

  double learning_rate() const {
    return schedule_.lr0 / (1.0 + schedule_.decay * static_cast<double>(step_));
  }
  std::uint64_t steps() const { return step_; }

  Eigen::VectorXd scores(const FeatureVector& fv) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(model_.classes());
    for (FeatureIndex idx : fv.indices()) out += model_.weights.col(idx).template cast<double>();
    return (scale_ * out.array()).matrix() + model_.bias.template cast<double>();
  }

  Eigen::VectorXd candidate_scores(std::span<const FeatureVector> candidates) const {
    return scale_ * kath::candidate_scores(model_, candidates);
  }

  // One example, gradient given with respect to the class scores.
  void update(const FeatureVector& fv, const Eigen::VectorXd& score_grad) {
    const double lr = begin_step();
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> delta = (-lr / scale_ * score_grad).template cast<Scalar>();
    for (FeatureIndex idx : fv.indices()) model_.weights.col(idx) += delta;
    model_.bias -= (lr * score_grad).template cast<Scalar>();
  }

  // One example for a single-row candidate scorer.
  void update_candidates(std::span<const FeatureVector> candidates,
                         const Eigen::VectorXd& score_grad) {
    const double lr = begin_step();
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      const auto step = static_cast<Scalar>(-lr / scale_ * score_grad(static_cast<Eigen::Index>(c)));
      if (step == Scalar(0)) continue;
      for (FeatureIndex idx : candidates[c].indices()) model_.weights(0, idx) += step;
    }
  }

  // Folds the pending scale into the stored weights.
  void finish() {
    if (scale_ != 1.0) {
      model_.weights *= static_cast<Scalar>(scale_);
      scale_ = 1.0;
    }
  }

 private:
  double begin_step() {
    const double lr = learning_rate();
    ++step_;
    scale_ *= 1.0 - lr * schedule_.l2;
    if (scale_ < 1e-6) finish();
    return lr;
  }

  LinearModel<Scalar>& model_;
  Schedule schedule_;
  std::uint64_t step_ = 0;
  double scale_ = 1.0;
};

}  // namespace kath
