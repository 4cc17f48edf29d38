// Copyright 2026 The mif-wlstm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "mif/motion.hpp"
#include "mif/trajectory.hpp"

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mif {

/// Raised when a forward or backward pass produces non-finite values.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameters of one direction of the recurrent encoder. Gate blocks are
/// stacked row-wise as input, forget, candidate, output.
template <typename Scalar>
struct LstmParams {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Matrix w_input;   // 4H x E
  Matrix w_hidden;  // 4H x H
  Matrix bias;      // 4H x 1
};

/// Residual offset network: affine embedding, bidirectional gated recurrent
/// encoder, affine decoder onto 2D offsets.
///
/// Positions enter as (x - input_center) / input_scale and decoded offsets
/// leave multiplied by input_scale. Both constants are fixed at training
/// time and never updated by the optimizer.
template <typename Scalar>
struct WarpModelT {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector2 = Eigen::Matrix<Scalar, 2, 1>;

  int embed_dim = 0;
  int hidden_dim = 0;
  Matrix embed_w;  // E x 2
  Matrix embed_b;  // E x 1
  LstmParams<Scalar> forward;
  LstmParams<Scalar> backward;
  Matrix decode_w;  // 2 x 2H
  Matrix decode_b;  // 2 x 1
  Vector2 input_center = Vector2::Zero();
  Scalar input_scale = Scalar(1);

  static WarpModelT zeros(int embed_dim, int hidden_dim) {
    WarpModelT m;
    m.embed_dim = embed_dim;
    m.hidden_dim = hidden_dim;
    const int e = embed_dim;
    const int h = hidden_dim;
    m.embed_w = Matrix::Zero(e, 2);
    m.embed_b = Matrix::Zero(e, 1);
    for (auto* cell : {&m.forward, &m.backward}) {
      cell->w_input = Matrix::Zero(4 * h, e);
      cell->w_hidden = Matrix::Zero(4 * h, h);
      cell->bias = Matrix::Zero(4 * h, 1);
    }
    m.decode_w = Matrix::Zero(2, 2 * h);
    m.decode_b = Matrix::Zero(2, 1);
    return m;
  }

  /// Uniform(+-1/sqrt(fan_in)) weights, forget-gate bias shifted by +1,
  /// decoder zero so the untrained model is the identity warp.
  template <typename Engine>
  static WarpModelT initialized(int embed_dim, int hidden_dim, Engine& rng) {
    if (embed_dim < 1 || hidden_dim < 1) {
      throw std::invalid_argument("WarpModel: dimensions must be >= 1");
    }
    WarpModelT m = zeros(embed_dim, hidden_dim);
    auto fill = [&rng](Matrix& mat, double fan_in) {
      const double bound = 1.0 / std::sqrt(fan_in);
      std::uniform_real_distribution<double> u(-bound, bound);
      for (Eigen::Index i = 0; i < mat.size(); ++i) {
        mat.data()[i] = static_cast<Scalar>(u(rng));
      }
    };
    fill(m.embed_w, 2.0);
    fill(m.embed_b, 2.0);
    for (auto* cell : {&m.forward, &m.backward}) {
      fill(cell->w_input, embed_dim);
      fill(cell->w_hidden, hidden_dim);
      fill(cell->bias, hidden_dim);
      cell->bias.middleRows(hidden_dim, hidden_dim).array() += Scalar(1);
    }
    return m;
  }

  /// Visits every trainable tensor as (name, matrix).
  template <typename F>
  void visit(F&& f) {
    f(std::string_view("embed_w"), embed_w);
    f(std::string_view("embed_b"), embed_b);
    f(std::string_view("forward.w_input"), forward.w_input);
    f(std::string_view("forward.w_hidden"), forward.w_hidden);
    f(std::string_view("forward.bias"), forward.bias);
    f(std::string_view("backward.w_input"), backward.w_input);
    f(std::string_view("backward.w_hidden"), backward.w_hidden);
    f(std::string_view("backward.bias"), backward.bias);
    f(std::string_view("decode_w"), decode_w);
    f(std::string_view("decode_b"), decode_b);
  }

  template <typename F>
  void visit(F&& f) const {
    const_cast<WarpModelT*>(this)->visit(
        [&f](std::string_view name, Matrix& m) { f(name, static_cast<const Matrix&>(m)); });
  }

  Eigen::Index parameter_count() const {
    Eigen::Index n = 0;
    visit([&n](std::string_view, const Matrix& m) { n += m.size(); });
    return n;
  }

  bool all_finite() const {
    bool ok = std::isfinite(static_cast<double>(input_scale)) && input_center.allFinite();
    visit([&ok](std::string_view, const Matrix& m) { ok = ok && m.allFinite(); });
    return ok;
  }

  template <typename Other>
  WarpModelT<Other> cast() const {
    WarpModelT<Other> out = WarpModelT<Other>::zeros(embed_dim, hidden_dim);
    out.embed_w = embed_w.template cast<Other>();
    out.embed_b = embed_b.template cast<Other>();
    out.forward = {forward.w_input.template cast<Other>(), forward.w_hidden.template cast<Other>(),
                   forward.bias.template cast<Other>()};
    out.backward = {backward.w_input.template cast<Other>(),
                    backward.w_hidden.template cast<Other>(), backward.bias.template cast<Other>()};
    out.decode_w = decode_w.template cast<Other>();
    out.decode_b = decode_b.template cast<Other>();
    out.input_center = input_center.template cast<Other>();
    out.input_scale = static_cast<Other>(input_scale);
    return out;
  }

  /// All trainable entries concatenated in visit order, each tensor column-major.
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> flatten() const {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(parameter_count());
    Eigen::Index offset = 0;
    visit([&](std::string_view, const Matrix& m) {
      out.segment(offset, m.size()) = m.reshaped();
      offset += m.size();
    });
    return out;
  }

  void unflatten(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& flat) {
    if (flat.size() != parameter_count()) {
      throw std::invalid_argument("WarpModel::unflatten: size mismatch");
    }
    Eigen::Index offset = 0;
    visit([&](std::string_view, Matrix& m) {
      m.reshaped() = flat.segment(offset, m.size());
      offset += m.size();
    });
  }

  bool operator==(const WarpModelT& o) const {
    return embed_dim == o.embed_dim && hidden_dim == o.hidden_dim &&
           input_center == o.input_center && input_scale == o.input_scale &&
           flatten() == o.flatten();
  }
};

using WarpModel = WarpModelT<double>;

namespace detail {

template <typename Scalar>
struct DirectionTrace {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Matrix gates;   // 4H x T, post-activation
  Matrix cell;    // H x T
  Matrix hidden;  // H x T
};

template <typename Scalar>
struct WarpTrace {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Matrix inputs;  // 2 x T, normalized
  Matrix embed;   // E x T
  DirectionTrace<Scalar> forward;
  DirectionTrace<Scalar> backward;
  Matrix offsets;  // 2 x T, meters
};

template <typename Scalar>
Scalar sigmoid(Scalar z) {
  using std::exp;
  return Scalar(1) / (Scalar(1) + exp(-z));
}

// Runs one direction over columns of `embed`; `reverse` walks from the last
// column to the first.
template <typename Scalar>
void run_direction(const LstmParams<Scalar>& p, const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& embed,
                   bool reverse, DirectionTrace<Scalar>& trace) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using std::tanh;
  const Eigen::Index h = p.w_hidden.cols();
  const Eigen::Index steps = embed.cols();
  Matrix pre = p.w_input * embed;
  pre.colwise() += p.bias.col(0);
  trace.gates.resize(4 * h, steps);
  trace.cell.resize(h, steps);
  trace.hidden.resize(h, steps);
  Vector hidden = Vector::Zero(h);
  Vector cell = Vector::Zero(h);
  for (Eigen::Index k = 0; k < steps; ++k) {
    const Eigen::Index t = reverse ? steps - 1 - k : k;
    Vector z = pre.col(t);
    z.noalias() += p.w_hidden * hidden;
    for (Eigen::Index j = 0; j < h; ++j) {
      z(j) = sigmoid(z(j));
      z(h + j) = sigmoid(z(h + j));
      z(2 * h + j) = tanh(z(2 * h + j));
      z(3 * h + j) = sigmoid(z(3 * h + j));
    }
    cell = z.segment(h, h).cwiseProduct(cell) + z.head(h).cwiseProduct(z.segment(2 * h, h));
    hidden = z.tail(h).cwiseProduct(cell.unaryExpr([](Scalar c) { return tanh(c); }));
    trace.gates.col(t) = z;
    trace.cell.col(t) = cell;
    trace.hidden.col(t) = hidden;
  }
}

// Accumulates parameter gradients of one direction and adds the gradient
// with respect to the embeddings into `d_embed`.
template <typename Scalar>
void backprop_direction(const LstmParams<Scalar>& p, const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& embed,
                        const DirectionTrace<Scalar>& trace,
                        const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& d_hidden_ext,
                        bool reverse, LstmParams<Scalar>& grad,
                        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& d_embed) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using std::tanh;
  const Eigen::Index h = p.w_hidden.cols();
  const Eigen::Index steps = embed.cols();
  Matrix d_pre(4 * h, steps);
  Matrix prev_hidden = Matrix::Zero(h, steps);
  Vector dh_next = Vector::Zero(h);
  Vector dc_next = Vector::Zero(h);
  for (Eigen::Index k = steps - 1; k >= 0; --k) {
    const Eigen::Index t = reverse ? steps - 1 - k : k;
    const bool first = k == 0;
    const Eigen::Index t_prev = reverse ? t + 1 : t - 1;
    const auto gates = trace.gates.col(t);
    const auto in_gate = gates.head(h);
    const auto forget = gates.segment(h, h);
    const auto cand = gates.segment(2 * h, h);
    const auto out_gate = gates.tail(h);
    const Vector c_prev = first ? Vector(Vector::Zero(h)) : Vector(trace.cell.col(t_prev));
    if (!first) {
      prev_hidden.col(t) = trace.hidden.col(t_prev);
    }
    const Vector tanh_c = trace.cell.col(t).unaryExpr([](Scalar c) { return tanh(c); });
    const Vector dh = d_hidden_ext.col(t) + dh_next;
    const Vector dc = dc_next + dh.cwiseProduct(out_gate).cwiseProduct(
                                    (Scalar(1) - tanh_c.array().square()).matrix());
    auto dz = d_pre.col(t);
    dz.head(h) = dc.cwiseProduct(cand).cwiseProduct(
        (in_gate.array() * (Scalar(1) - in_gate.array())).matrix());
    dz.segment(h, h) = dc.cwiseProduct(c_prev).cwiseProduct(
        (forget.array() * (Scalar(1) - forget.array())).matrix());
    dz.segment(2 * h, h) =
        dc.cwiseProduct(in_gate).cwiseProduct((Scalar(1) - cand.array().square()).matrix());
    dz.tail(h) = dh.cwiseProduct(tanh_c).cwiseProduct(
        (out_gate.array() * (Scalar(1) - out_gate.array())).matrix());
    dc_next = dc.cwiseProduct(forget);
    dh_next.noalias() = p.w_hidden.transpose() * dz;
  }
  grad.w_input.noalias() += d_pre * embed.transpose();
  grad.w_hidden.noalias() += d_pre * prev_hidden.transpose();
  grad.bias.noalias() += d_pre.rowwise().sum();
  d_embed.noalias() += p.w_input.transpose() * d_pre;
}

}  // namespace detail

/// Per-step offsets (T x 2, meters) for a nominal path (T x 2). Offsets at a
/// step depend only on the hidden states at that step.
template <typename Scalar>
PathT<Scalar> warp_offsets(const WarpModelT<Scalar>& model, const PathT<Scalar>& nominal,
                           detail::WarpTrace<Scalar>* trace_out = nullptr) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (nominal.rows() < 1) {
    throw std::invalid_argument("warp_offsets: empty nominal path");
  }
  detail::WarpTrace<Scalar> local;
  auto& trace = trace_out != nullptr ? *trace_out : local;
  trace.inputs = (nominal.transpose().colwise() - model.input_center) / model.input_scale;
  trace.embed = model.embed_w * trace.inputs;
  trace.embed.colwise() += model.embed_b.col(0);
  detail::run_direction(model.forward, trace.embed, false, trace.forward);
  detail::run_direction(model.backward, trace.embed, true, trace.backward);
  const Eigen::Index h = model.hidden_dim;
  Matrix decoded = model.decode_w.leftCols(h) * trace.forward.hidden;
  decoded.noalias() += model.decode_w.rightCols(h) * trace.backward.hidden;
  decoded.colwise() += model.decode_b.col(0);
  trace.offsets = decoded * model.input_scale;
  if (!trace.offsets.allFinite()) {
    throw DivergenceError("warp_offsets: non-finite offsets");
  }
  return trace.offsets.transpose();
}

/// Mean over frames and both coordinates of the squared error.
template <typename DerivedA, typename DerivedB>
auto mean_squared_error(const Eigen::MatrixBase<DerivedA>& warped,
                        const Eigen::MatrixBase<DerivedB>& truth) {
  if (warped.rows() != truth.rows() || warped.cols() != truth.cols() || warped.size() == 0) {
    throw std::invalid_argument("warp_loss: length mismatch");
  }
  return (warped - truth).squaredNorm() / static_cast<double>(warped.size());
}

/// Exact gradient of the mean squared error between nominal + offsets and
/// `truth` with respect to every trainable tensor. Writes the loss to
/// `loss_out` when given.
template <typename Scalar>
WarpModelT<Scalar> warp_gradient(const WarpModelT<Scalar>& model, const PathT<Scalar>& nominal,
                                 const PathT<Scalar>& truth, Scalar* loss_out = nullptr) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (nominal.rows() != truth.rows()) {
    throw std::invalid_argument("warp_gradient: nominal and truth lengths differ");
  }
  detail::WarpTrace<Scalar> trace;
  const PathT<Scalar> offsets = warp_offsets(model, nominal, &trace);
  const Matrix residual = (nominal + offsets - truth).transpose();  // 2 x T
  const auto count = static_cast<Scalar>(residual.size());
  if (loss_out != nullptr) {
    *loss_out = residual.squaredNorm() / count;
  }
  WarpModelT<Scalar> grad = WarpModelT<Scalar>::zeros(model.embed_dim, model.hidden_dim);
  grad.input_center = model.input_center;
  grad.input_scale = model.input_scale;

  const Eigen::Index h = model.hidden_dim;
  // d loss / d decoded (pre-scale offsets).
  const Matrix d_decoded = residual * (Scalar(2) * model.input_scale / count);
  grad.decode_w.leftCols(h).noalias() = d_decoded * trace.forward.hidden.transpose();
  grad.decode_w.rightCols(h).noalias() = d_decoded * trace.backward.hidden.transpose();
  grad.decode_b = d_decoded.rowwise().sum();
  const Matrix d_fwd = model.decode_w.leftCols(h).transpose() * d_decoded;
  const Matrix d_bwd = model.decode_w.rightCols(h).transpose() * d_decoded;

  Matrix d_embed = Matrix::Zero(model.embed_dim, trace.embed.cols());
  detail::backprop_direction(model.forward, trace.embed, trace.forward, d_fwd, false, grad.forward,
                             d_embed);
  detail::backprop_direction(model.backward, trace.embed, trace.backward, d_bwd, true,
                             grad.backward, d_embed);
  grad.embed_w.noalias() = d_embed * trace.inputs.transpose();
  grad.embed_b = d_embed.rowwise().sum();
  if (!grad.all_finite()) {
    throw DivergenceError("warp_gradient: non-finite gradient");
  }
  return grad;
}

/// Observation concatenated with a nominal continuation.
struct NominalFullTrajectory {
  Trajectory positions;
  int observed_len = 1;
};

/// Observation followed by the straight-line continuation to `goal`.
NominalFullTrajectory make_nominal(const Trajectory& history, const Position& goal, int steps);

struct WarpResult {
  Trajectory warped;
  Path offsets;
};

/// Warped trajectory = nominal + offsets, frame by frame.
WarpResult warp_forward(const WarpModel& model, const NominalFullTrajectory& nominal);

double warp_loss(const Trajectory& warped, const Trajectory& ground_truth);

/// Exact gradients of warp_loss(warp_forward(model, nominal), truth).
WarpModel backward(const WarpModel& model, const NominalFullTrajectory& nominal,
                   const Trajectory& ground_truth, double* loss_out = nullptr);

struct AdamConfig {
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Adam with bias correction, one moment pair per trainable tensor.
class Adam {
 public:
  Adam(const WarpModel& shape, AdamConfig config);
  void step(WarpModel& params, const WarpModel& grads);
  long long steps_taken() const { return step_; }

 private:
  AdamConfig config_;
  WarpModel first_moment_;
  WarpModel second_moment_;
  long long step_ = 0;
};

}  // namespace mif
