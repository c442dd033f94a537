#pragma once

#include <cstdint>
#include <vector>

#include "ganlab/activations.hpp"
#include "ganlab/types.hpp"

namespace ganlab {

// -------------------------------------------------------------------------
// Dense network engine: forward pass, mean binary cross-entropy, reverse-mode
// gradients, Adam updates, and a finite-difference oracle for checking them.
// -------------------------------------------------------------------------

struct DenseLayer {
    Matrix weights;   // in_dim x out_dim
    RowVector bias;   // out_dim
    Activation activation = Activation::identity;
};

struct Mlp {
    std::vector<DenseLayer> layers;

    Index input_dim() const { return layers.front().weights.rows(); }
    Index output_dim() const { return layers.back().weights.cols(); }
};

// Per-layer pre- and post-activation values captured by forward(); everything
// backward() needs.
struct LayerCache {
    Matrix pre;
    Matrix post;
};

struct ForwardCache {
    Matrix input;
    std::vector<LayerCache> layers;

    const Matrix& output() const { return layers.back().post; }
};

// One gradient (or moment) tensor per parameter tensor.
struct LayerGrads {
    Matrix weights;
    RowVector bias;
};

struct Gradients {
    std::vector<LayerGrads> layers;
    Matrix input;  // d loss / d network-input, for chaining through a frozen net
};

struct AdamParams {
    double learning_rate = 2e-4;
    double beta1 = 0.5;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

struct AdamState {
    AdamParams params;
    long step = 0;  // advances by one per applied update
    std::vector<LayerGrads> m;
    std::vector<LayerGrads> v;
};

// Glorot-uniform weights (a = sqrt(6 / (fan_in + fan_out))), zero biases,
// deterministic given the seed.
Mlp init_mlp(const std::vector<Index>& layer_sizes,
             const std::vector<Activation>& activations, std::uint64_t seed);

// Pure: never mutates the model. Throws ShapeError on a column mismatch.
ForwardCache forward(const Mlp& mlp, const Matrix& input);

// Mean over all elements of -[y ln p + (1-y) ln(1-p)], with predictions
// clamped to [kBceEps, 1 - kBceEps] before the logs.
inline constexpr double kBceEps = 1e-12;
double bce_loss(const Matrix& predictions, const Matrix& labels);

// Gradients of bce_loss(output, labels) with respect to every parameter and
// to the input. The cache must come from a forward() call on the same model.
Gradients backward(const Mlp& mlp, const ForwardCache& cache, const Matrix& labels);

// Same reverse pass but seeded with an arbitrary upstream d loss / d output.
Gradients backward_from(const Mlp& mlp, const ForwardCache& cache, const Matrix& output_grad);

AdamState make_adam(const Mlp& mlp, AdamParams params = {});

// Bias-corrected Adam update in place; advances state.step by one.
void adam_step(Mlp& mlp, const Gradients& grads, AdamState& state);

// Max relative error between backward() and a central finite difference of
// the BCE loss, over every parameter. Diagnostic; h must lie in [1e-7, 1e-3].
double gradient_check(const Mlp& mlp, const Matrix& input, const Matrix& labels, double h);

// Elementwise sum of two gradient sets (e.g. losses on two batches).
void accumulate(Gradients& into, const Gradients& other);

// Flip the sign of every gradient; turns a descent step into an ascent step.
void negate(Gradients& grads);

bool same_parameters(const Mlp& a, const Mlp& b);

}  // namespace ganlab
