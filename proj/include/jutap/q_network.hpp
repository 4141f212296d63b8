// SPDX-License-Identifier: Apache-2.0
//
// Feed-forward action-value approximator: affine layers with rectified-linear hidden
// activations and a linear output, one value per action. All parameters live in one
// contiguous vector so optimizer steps, soft updates and checkpoints act on it directly.
#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "jutap/rng.hpp"
#include "jutap/types.hpp"

namespace jutap {

template <typename Scalar>
class QNetwork {
 public:
  using Vector = VecX<Scalar>;
  using Matrix = MatX<Scalar>;
  using MatrixMap = Eigen::Map<Matrix>;
  using ConstMatrixMap = Eigen::Map<const Matrix>;
  using VectorMap = Eigen::Map<Vector>;
  using ConstVectorMap = Eigen::Map<const Vector>;

  QNetwork() = default;

  /// `widths` = {input, hidden..., output}; parameters start at zero.
  explicit QNetwork(std::vector<int> widths) : widths_(std::move(widths)) {
    if (widths_.size() < 2) throw std::invalid_argument("QNetwork: need at least input and output widths");
    for (int w : widths_)
      if (w < 1) throw std::invalid_argument("QNetwork: layer widths must be positive");
    Index total = 0;
    for (std::size_t l = 0; l + 1 < widths_.size(); ++l) {
      offsets_.push_back(total);
      total += Index(widths_[l + 1]) * widths_[l] + widths_[l + 1];
    }
    params_ = Vector::Zero(total);
  }

  /// Fan-in scaled uniform initialization, U(-1/sqrt(fan_in), 1/sqrt(fan_in)).
  void initialize(Rng& rng) {
    for (int l = 0; l < layer_count(); ++l) {
      const double bound = 1.0 / std::sqrt(double(widths_[l]));
      auto w = weight(l);
      auto b = bias(l);
      for (Index k = 0; k < w.size(); ++k) w.data()[k] = Scalar(rng.uniform(-bound, bound));
      for (Index k = 0; k < b.size(); ++k) b[k] = Scalar(rng.uniform(-bound, bound));
    }
  }

  int layer_count() const { return static_cast<int>(widths_.size()) - 1; }
  const std::vector<int>& widths() const { return widths_; }
  int input_width() const { return widths_.front(); }
  int output_width() const { return widths_.back(); }
  Index parameter_count() const { return params_.size(); }

  Vector& parameters() { return params_; }
  const Vector& parameters() const { return params_; }

  MatrixMap weight(int l) { return {params_.data() + offsets_[l], widths_[l + 1], widths_[l]}; }
  ConstMatrixMap weight(int l) const { return {params_.data() + offsets_[l], widths_[l + 1], widths_[l]}; }
  VectorMap bias(int l) { return {params_.data() + bias_offset(l), widths_[l + 1]}; }
  ConstVectorMap bias(int l) const { return {params_.data() + bias_offset(l), widths_[l + 1]}; }

  bool same_shape(const QNetwork& other) const { return widths_ == other.widths_; }

  /// Column-wise forward pass: inputs is input_width x batch, result output_width x batch.
  template <typename Derived>
  Matrix forward(const Eigen::MatrixBase<Derived>& inputs) const {
    check_inputs(inputs);
    Matrix a = inputs.template cast<Scalar>();
    for (int l = 0; l < layer_count(); ++l) {
      Matrix z = weight(l) * a;
      z.colwise() += bias(l);
      a = (l + 1 < layer_count()) ? Matrix(z.cwiseMax(Scalar(0))) : std::move(z);
    }
    return a;
  }

  /// Mean squared TD error over the batch, (1/B) sum_i (Q(s_i, a_i) - y_i)^2, and its
  /// gradient with respect to all parameters (written into `grad`).
  template <typename Derived>
  Scalar loss_and_gradient(const Eigen::MatrixBase<Derived>& inputs, std::span<const int> actions,
                           const Vector& targets, Vector& grad) const {
    check_inputs(inputs);
    const Index batch = inputs.cols();
    if (Index(actions.size()) != batch || targets.size() != batch)
      throw std::invalid_argument("QNetwork: batch size mismatch");

    std::vector<Matrix> acts;  // activations per layer input
    acts.reserve(layer_count() + 1);
    acts.push_back(inputs.template cast<Scalar>());
    for (int l = 0; l < layer_count(); ++l) {
      Matrix z = weight(l) * acts.back();
      z.colwise() += bias(l);
      acts.push_back(l + 1 < layer_count() ? Matrix(z.cwiseMax(Scalar(0))) : std::move(z));
    }

    Matrix delta = Matrix::Zero(output_width(), batch);
    Scalar loss = 0;
    for (Index i = 0; i < batch; ++i) {
      const Scalar err = acts.back()(actions[i], i) - targets[i];
      loss += err * err;
      delta(actions[i], i) = Scalar(2) * err / Scalar(batch);
    }
    loss /= Scalar(batch);

    grad.resize(params_.size());
    for (int l = layer_count() - 1; l >= 0; --l) {
      MatrixMap gw(grad.data() + offsets_[l], widths_[l + 1], widths_[l]);
      VectorMap gb(grad.data() + bias_offset(l), widths_[l + 1]);
      gw.noalias() = delta * acts[l].transpose();
      gb = delta.rowwise().sum();
      if (l > 0) {
        Matrix back = weight(l).transpose() * delta;
        delta = back.cwiseProduct((acts[l].array() > Scalar(0)).template cast<Scalar>().matrix());
      }
    }
    return loss;
  }

 private:
  Index bias_offset(int l) const { return offsets_[l] + Index(widths_[l + 1]) * widths_[l]; }

  template <typename Derived>
  void check_inputs(const Eigen::MatrixBase<Derived>& inputs) const {
    if (inputs.rows() != input_width()) throw std::invalid_argument("QNetwork: input width mismatch");
    if (!inputs.allFinite()) throw std::domain_error("QNetwork: non-finite input");
  }

  std::vector<int> widths_;
  std::vector<Index> offsets_;
  Vector params_;
};

/// θ⁻ ← τ θ + (1 − τ) θ⁻.
template <typename Scalar>
void soft_update(QNetwork<Scalar>& target, const QNetwork<Scalar>& online, Scalar tau) {
  if (!target.same_shape(online)) throw std::invalid_argument("soft_update: shape mismatch");
  target.parameters() = tau * online.parameters() + (Scalar(1) - tau) * target.parameters();
}

/// Adaptive-moment first-order optimizer over a flat parameter vector.
template <typename Scalar>
class Adam {
 public:
  using Vector = VecX<Scalar>;

  Adam() = default;
  Adam(Index size, double learning_rate, double beta1 = 0.9, double beta2 = 0.999, double epsilon = 1e-8)
      : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(epsilon), m_(Vector::Zero(size)), v_(Vector::Zero(size)) {}

  void step(Vector& params, const Vector& grad) {
    ++t_;
    m_ = Scalar(beta1_) * m_ + Scalar(1 - beta1_) * grad;
    v_ = Scalar(beta2_) * v_ + Scalar(1 - beta2_) * grad.cwiseAbs2();
    const Scalar c1 = Scalar(1 - std::pow(beta1_, double(t_)));
    const Scalar c2 = Scalar(1 - std::pow(beta2_, double(t_)));
    params.array() -= Scalar(lr_) * (m_.array() / c1) / ((v_.array() / c2).sqrt() + Scalar(eps_));
  }

  double learning_rate() const { return lr_; }
  long long steps() const { return t_; }
  const Vector& first_moment() const { return m_; }
  const Vector& second_moment() const { return v_; }

  void restore(long long t, Vector m, Vector v) {
    if (m.size() != m_.size() || v.size() != v_.size()) throw std::invalid_argument("Adam: state shape mismatch");
    t_ = t;
    m_ = std::move(m);
    v_ = std::move(v);
  }

 private:
  double lr_ = 1e-3;
  double beta1_ = 0.9;
  double beta2_ = 0.999;
  double eps_ = 1e-8;
  long long t_ = 0;
  Vector m_;
  Vector v_;
};

extern template class QNetwork<float>;
extern template class QNetwork<double>;

}  // namespace jutap
