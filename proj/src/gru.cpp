#include "ttosc/gru.hpp"

#include <cmath>
#include <stdexcept>

namespace ttosc {

namespace {

template <class Scalar>
MatS<Scalar> uniform_matrix(int rows, int cols, Scalar bound, std::mt19937_64& g) {
  MatS<Scalar> m(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r)
      m(r, c) = static_cast<Scalar>(
          (static_cast<double>(g() >> 11) * 0x1.0p-53 * 2.0 - 1.0) * static_cast<double>(bound));
  return m;
}

}  // namespace

template <class Scalar>
GruStack<Scalar> make_gru(int input, int hidden, int layers, std::mt19937_64& g) {
  if (input < 1 || hidden < 1 || layers < 1)
    throw std::invalid_argument("make_gru: dimensions must be >= 1");
  GruStack<Scalar> stack;
  stack.layers.resize(layers);
  for (int l = 0; l < layers; ++l) {
    const int in = l == 0 ? input : hidden;
    const Scalar bound = static_cast<Scalar>(1.0 / std::sqrt(static_cast<double>(in)));
    const Scalar rbound = static_cast<Scalar>(1.0 / std::sqrt(static_cast<double>(hidden)));
    stack.layers[l].input_weight = uniform_matrix<Scalar>(3 * hidden, in, bound, g);
    stack.layers[l].recurrent_weight = uniform_matrix<Scalar>(3 * hidden, hidden, rbound, g);
    stack.layers[l].bias = VecS<Scalar>::Zero(3 * hidden);
  }
  return stack;
}

template <class Scalar>
MatS<Scalar> gru_forward(const GruStack<Scalar>& stack, const std::vector<MatS<Scalar>>& steps,
                         GruCache<Scalar>* cache) {
  if (steps.empty()) throw std::invalid_argument("gru_forward: empty sequence");
  const int k_steps = static_cast<int>(steps.size());
  const int batch = static_cast<int>(steps[0].cols());
  if (cache) cache->layers.resize(stack.layers.size());

  std::vector<MatS<Scalar>> inputs = steps;
  MatS<Scalar> state;
  for (size_t l = 0; l < stack.layers.size(); ++l) {
    const auto& layer = stack.layers[l];
    const int hidden = layer.hidden();
    if (inputs[0].rows() != layer.input())
      throw std::invalid_argument("gru_forward: input width does not match layer");

    // Input projection of the whole sequence in one product.
    MatS<Scalar> packed(layer.input(), k_steps * batch);
    for (int k = 0; k < k_steps; ++k) packed.middleCols(k * batch, batch) = inputs[k];
    MatS<Scalar> projected = layer.input_weight * packed;
    projected.colwise() += layer.bias;

    typename GruCache<Scalar>::Layer* cl = cache ? &cache->layers[l] : nullptr;
    if (cl) {
      cl->inputs = inputs;
      cl->update.resize(k_steps);
      cl->reset.resize(k_steps);
      cl->candidate.resize(k_steps);
      cl->hidden.assign(1, MatS<Scalar>::Zero(hidden, batch));
    }

    state = MatS<Scalar>::Zero(hidden, batch);
    std::vector<MatS<Scalar>> outputs(k_steps);
    for (int k = 0; k < k_steps; ++k) {
      const auto pre = projected.middleCols(k * batch, batch);
      MatS<Scalar> gate_zr =
          layer.recurrent_weight.topRows(2 * hidden) * state + pre.topRows(2 * hidden);
      MatS<Scalar> update =
          ((-gate_zr.topRows(hidden).array()).exp() + Scalar(1)).inverse().matrix();
      MatS<Scalar> reset =
          ((-gate_zr.bottomRows(hidden).array()).exp() + Scalar(1)).inverse().matrix();
      MatS<Scalar> gated_state = reset.array() * state.array();
      MatS<Scalar> candidate =
          (layer.recurrent_weight.bottomRows(hidden) * gated_state + pre.bottomRows(hidden))
              .array()
              .tanh()
              .matrix();
      state = ((Scalar(1) - update.array()) * state.array() + update.array() * candidate.array())
                  .matrix();
      if (cl) {
        cl->update[k] = std::move(update);
        cl->reset[k] = std::move(reset);
        cl->candidate[k] = std::move(candidate);
        cl->hidden.push_back(state);
      }
      outputs[k] = state;
    }
    inputs = std::move(outputs);
  }
  return state;
}

template <class Scalar>
GruGrads<Scalar> zero_grads_like(const GruStack<Scalar>& stack) {
  GruGrads<Scalar> grads;
  grads.layers.resize(stack.layers.size());
  for (size_t l = 0; l < stack.layers.size(); ++l) {
    const auto& layer = stack.layers[l];
    grads.layers[l].input_weight = MatS<Scalar>::Zero(layer.input_weight.rows(), layer.input_weight.cols());
    grads.layers[l].recurrent_weight =
        MatS<Scalar>::Zero(layer.recurrent_weight.rows(), layer.recurrent_weight.cols());
    grads.layers[l].bias = VecS<Scalar>::Zero(layer.bias.size());
  }
  return grads;
}

template <class Scalar>
void gru_backward(const GruStack<Scalar>& stack, const GruCache<Scalar>& cache,
                  const MatS<Scalar>& final_hidden_grad, GruGrads<Scalar>& grads,
                  std::vector<MatS<Scalar>>* input_grads) {
  if (cache.layers.size() != stack.layers.size())
    throw std::invalid_argument("gru_backward: cache does not match stack");
  const int k_steps = static_cast<int>(cache.layers[0].inputs.size());
  const int batch = static_cast<int>(final_hidden_grad.cols());

  // Per-step gradients flowing into each layer's outputs. Only the top
  // layer's final step receives a gradient from outside.
  std::vector<MatS<Scalar>> output_grads(k_steps, MatS<Scalar>::Zero(stack.hidden(), batch));
  output_grads[k_steps - 1] = final_hidden_grad;

  for (int l = static_cast<int>(stack.layers.size()) - 1; l >= 0; --l) {
    const auto& layer = stack.layers[l];
    const auto& cl = cache.layers[l];
    const int hidden = layer.hidden();
    auto& gl = grads.layers[l];

    std::vector<MatS<Scalar>> below_grads;
    const bool need_input_grads = l > 0 || input_grads != nullptr;
    if (need_input_grads)
      below_grads.assign(k_steps, MatS<Scalar>::Zero(layer.input(), batch));

    MatS<Scalar> state_grad = MatS<Scalar>::Zero(hidden, batch);
    MatS<Scalar> gate_grads(3 * hidden, batch);
    for (int k = k_steps - 1; k >= 0; --k) {
      MatS<Scalar> dh = state_grad + output_grads[k];
      const auto& update = cl.update[k];
      const auto& reset = cl.reset[k];
      const auto& candidate = cl.candidate[k];
      const auto& h_prev = cl.hidden[k];

      // h = (1-z) h_prev + z c
      MatS<Scalar> dz = dh.array() * (candidate.array() - h_prev.array());
      MatS<Scalar> dc = dh.array() * update.array();
      state_grad = (dh.array() * (Scalar(1) - update.array())).matrix();

      auto da_z = gate_grads.topRows(hidden);
      auto da_r = gate_grads.middleRows(hidden, hidden);
      auto da_c = gate_grads.bottomRows(hidden);
      da_c = (dc.array() * (Scalar(1) - candidate.array().square())).matrix();

      // candidate pre-activation consumed (reset . h_prev)
      MatS<Scalar> d_gated = layer.recurrent_weight.bottomRows(hidden).transpose() * da_c;
      MatS<Scalar> dr = d_gated.array() * h_prev.array();
      state_grad.array() += d_gated.array() * reset.array();
      da_r = (dr.array() * reset.array() * (Scalar(1) - reset.array())).matrix();
      da_z = (dz.array() * update.array() * (Scalar(1) - update.array())).matrix();

      gl.input_weight.noalias() += gate_grads * cl.inputs[k].transpose();
      gl.recurrent_weight.topRows(2 * hidden).noalias() +=
          gate_grads.topRows(2 * hidden) * h_prev.transpose();
      MatS<Scalar> gated_state = reset.array() * h_prev.array();
      gl.recurrent_weight.bottomRows(hidden).noalias() += da_c * gated_state.transpose();
      gl.bias += gate_grads.rowwise().sum();

      state_grad.noalias() +=
          layer.recurrent_weight.topRows(2 * hidden).transpose() * gate_grads.topRows(2 * hidden);
      if (need_input_grads)
        below_grads[k].noalias() = layer.input_weight.transpose() * gate_grads;
    }
    if (l > 0)
      output_grads = std::move(below_grads);
    else if (input_grads)
      *input_grads = std::move(below_grads);
  }
}

template GruStack<float> make_gru<float>(int, int, int, std::mt19937_64&);
template GruStack<double> make_gru<double>(int, int, int, std::mt19937_64&);
template MatS<float> gru_forward<float>(const GruStack<float>&, const std::vector<MatS<float>>&,
                                        GruCache<float>*);
template MatS<double> gru_forward<double>(const GruStack<double>&,
                                          const std::vector<MatS<double>>&, GruCache<double>*);
template GruGrads<float> zero_grads_like<float>(const GruStack<float>&);
template GruGrads<double> zero_grads_like<double>(const GruStack<double>&);
template void gru_backward<float>(const GruStack<float>&, const GruCache<float>&,
                                  const MatS<float>&, GruGrads<float>&, std::vector<MatS<float>>*);
template void gru_backward<double>(const GruStack<double>&, const GruCache<double>&,
                                   const MatS<double>&, GruGrads<double>&,
                                   std::vector<MatS<double>>*);

}  // namespace ttosc
