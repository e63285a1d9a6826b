#pragma once

#include <Eigen/Dense>
#include <random>
#include <vector>

// Stacked GRU with manual backpropagation, templated on the scalar so the
// simulator can train in float while gradient checks run in double.
//
// Layer parameters are stored with the three gates stacked row-wise in the
// order [update; reset; candidate], which lets the input projection of a
// whole sequence run as one matrix product.

namespace ttosc {

template <class Scalar>
using MatS = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using VecS = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <class Scalar>
struct GruLayer {
  MatS<Scalar> input_weight;      // 3H x in
  MatS<Scalar> recurrent_weight;  // 3H x H
  VecS<Scalar> bias;              // 3H

  int hidden() const { return static_cast<int>(recurrent_weight.cols()); }
  int input() const { return static_cast<int>(input_weight.cols()); }
};

template <class Scalar>
struct GruStack {
  std::vector<GruLayer<Scalar>> layers;

  int hidden() const { return layers.back().hidden(); }
  int input() const { return layers.front().input(); }
};

// Forward activations kept for backprop. hidden[k] is the state entering
// step k (hidden[0] is the zero initial state), so hidden has K+1 entries.
template <class Scalar>
struct GruCache {
  struct Layer {
    std::vector<MatS<Scalar>> inputs;                    // K entries, in x N
    std::vector<MatS<Scalar>> update, reset, candidate;  // K entries, H x N
    std::vector<MatS<Scalar>> hidden;                    // K+1 entries, H x N
  };
  std::vector<Layer> layers;
};

template <class Scalar>
struct GruGrads {
  std::vector<GruLayer<Scalar>> layers;  // same shapes as the stack
};

template <class Scalar>
GruStack<Scalar> make_gru(int input, int hidden, int layers, std::mt19937_64& g);

// steps: K matrices of (input x batch). Returns the final hidden state
// (hidden x batch). Pass a cache to enable a later backward pass.
template <class Scalar>
MatS<Scalar> gru_forward(const GruStack<Scalar>& stack, const std::vector<MatS<Scalar>>& steps,
                         GruCache<Scalar>* cache = nullptr);

// Backpropagates d(loss)/d(final hidden). Parameter gradients are
// accumulated into `grads` (caller zeroes them); input gradients are written
// to `input_grads` when non-null.
template <class Scalar>
void gru_backward(const GruStack<Scalar>& stack, const GruCache<Scalar>& cache,
                  const MatS<Scalar>& final_hidden_grad, GruGrads<Scalar>& grads,
                  std::vector<MatS<Scalar>>* input_grads = nullptr);

template <class Scalar>
GruGrads<Scalar> zero_grads_like(const GruStack<Scalar>& stack);

}  // namespace ttosc
