#include "ganlab/nn.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "ganlab/errors.hpp"
#include "ganlab/rng.hpp"

namespace ganlab {

namespace {

std::string dim_str(Index rows, Index cols) {
    return std::to_string(rows) + "x" + std::to_string(cols);
}

void check_layer_chain(const Mlp& mlp) {
    if (mlp.layers.empty()) throw ConfigError("mlp has no layers");
    for (size_t i = 0; i < mlp.layers.size(); ++i) {
        const auto& layer = mlp.layers[i];
        if (layer.weights.cols() != layer.bias.cols())
            throw ShapeError("layer " + std::to_string(i) + ": bias length " +
                             std::to_string(layer.bias.cols()) + " != weight cols " +
                             std::to_string(layer.weights.cols()));
        if (i > 0 && mlp.layers[i - 1].weights.cols() != layer.weights.rows())
            throw ShapeError("layer " + std::to_string(i) + ": input dim " +
                             std::to_string(layer.weights.rows()) + " != previous output dim " +
                             std::to_string(mlp.layers[i - 1].weights.cols()));
    }
}

void check_cache_matches(const Mlp& mlp, const ForwardCache& cache) {
    if (cache.layers.size() != mlp.layers.size())
        throw ConsistencyError("cache has " + std::to_string(cache.layers.size()) +
                               " layers, model has " + std::to_string(mlp.layers.size()));
    for (size_t i = 0; i < mlp.layers.size(); ++i) {
        if (cache.layers[i].pre.cols() != mlp.layers[i].weights.cols())
            throw ConsistencyError("cache layer " + std::to_string(i) +
                                   " width does not match model");
    }
}

Matrix clamped(const Matrix& predictions) {
    return predictions.array().max(kBceEps).min(1.0 - kBceEps).matrix();
}

// Shared reverse sweep. `delta` enters as d loss / d post-activation of the
// last layer and leaves as d loss / d network-input.
Gradients reverse_sweep(const Mlp& mlp, const ForwardCache& cache, Matrix delta) {
    Gradients grads;
    grads.layers.resize(mlp.layers.size());
    for (Index l = static_cast<Index>(mlp.layers.size()) - 1; l >= 0; --l) {
        const auto& layer = mlp.layers[l];
        const auto& lc = cache.layers[l];
        const Matrix dpre =
            (delta.array() * activation_grad(layer.activation, lc.pre, lc.post).array()).matrix();
        const Matrix& layer_input = (l == 0) ? cache.input : cache.layers[l - 1].post;
        grads.layers[l].weights.noalias() = layer_input.transpose() * dpre;
        grads.layers[l].bias = dpre.colwise().sum();
        delta.noalias() = dpre * layer.weights.transpose();
    }
    grads.input = std::move(delta);
    return grads;
}

template <typename Mat>
void adam_update(Mat& param, const Mat& grad, Mat& m, Mat& v, const AdamParams& p,
                 double bias1, double bias2) {
    m = p.beta1 * m + (1.0 - p.beta1) * grad;
    v.array() = p.beta2 * v.array() + (1.0 - p.beta2) * grad.array().square();
    param.array() -= p.learning_rate * (m.array() / bias1) / ((v.array() / bias2).sqrt() + p.epsilon);
}

}  // namespace

Mlp init_mlp(const std::vector<Index>& layer_sizes,
             const std::vector<Activation>& activations, std::uint64_t seed) {
    if (layer_sizes.size() < 2)
        throw ConfigError("need at least an input and an output size");
    if (activations.size() != layer_sizes.size() - 1)
        throw ConfigError("got " + std::to_string(activations.size()) + " activations for " +
                          std::to_string(layer_sizes.size()) + " sizes; need one per layer");
    for (Index size : layer_sizes)
        if (size < 1) throw ConfigError("layer sizes must be >= 1");

    Rng rng(seed);
    Mlp mlp;
    mlp.layers.resize(activations.size());
    for (size_t l = 0; l < activations.size(); ++l) {
        const Index fan_in = layer_sizes[l];
        const Index fan_out = layer_sizes[l + 1];
        const double a = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        DenseLayer& layer = mlp.layers[l];
        layer.weights.resize(fan_in, fan_out);
        for (Index i = 0; i < fan_in; ++i)
            for (Index j = 0; j < fan_out; ++j) layer.weights(i, j) = rng.uniform(-a, a);
        layer.bias = RowVector::Zero(fan_out);
        layer.activation = activations[l];
    }
    return mlp;
}

ForwardCache forward(const Mlp& mlp, const Matrix& input) {
    check_layer_chain(mlp);
    if (input.cols() != mlp.input_dim())
        throw ShapeError("forward: input is " + dim_str(input.rows(), input.cols()) +
                         ", expected " + std::to_string(mlp.input_dim()) + " columns");

    ForwardCache cache;
    cache.input = input;
    cache.layers.resize(mlp.layers.size());
    const Matrix* current = &cache.input;
    for (size_t l = 0; l < mlp.layers.size(); ++l) {
        const auto& layer = mlp.layers[l];
        LayerCache& lc = cache.layers[l];
        lc.pre.noalias() = *current * layer.weights;
        lc.pre.rowwise() += layer.bias;
        lc.post = apply_activation(layer.activation, lc.pre);
        current = &lc.post;
    }
    return cache;
}

double bce_loss(const Matrix& predictions, const Matrix& labels) {
    if (predictions.rows() != labels.rows() || predictions.cols() != labels.cols())
        throw ShapeError("bce_loss: predictions " + dim_str(predictions.rows(), predictions.cols()) +
                         " vs labels " + dim_str(labels.rows(), labels.cols()));
    const Matrix pc = clamped(predictions);
    const auto p = pc.array();
    const auto y = labels.array();
    return -(y * p.log() + (1.0 - y) * (1.0 - p).log()).mean();
}

Gradients backward(const Mlp& mlp, const ForwardCache& cache, const Matrix& labels) {
    check_cache_matches(mlp, cache);
    const Matrix& output = cache.output();
    if (output.rows() != labels.rows() || output.cols() != labels.cols())
        throw ShapeError("backward: output " + dim_str(output.rows(), output.cols()) +
                         " vs labels " + dim_str(labels.rows(), labels.cols()));

    // d(mean BCE)/d p, evaluated at the clamped prediction. The activation
    // derivative downstream uses the unclamped output, so saturated sigmoid
    // units still get an (exactly or nearly) zero gradient.
    const double n = static_cast<double>(output.size());
    const Matrix pc = clamped(output);
    const auto p = pc.array();
    const Matrix delta = ((p - labels.array()) / (p * (1.0 - p)) / n).matrix();
    return reverse_sweep(mlp, cache, delta);
}

Gradients backward_from(const Mlp& mlp, const ForwardCache& cache, const Matrix& output_grad) {
    check_cache_matches(mlp, cache);
    const Matrix& output = cache.output();
    if (output.rows() != output_grad.rows() || output.cols() != output_grad.cols())
        throw ShapeError("backward_from: output " + dim_str(output.rows(), output.cols()) +
                         " vs upstream gradient " + dim_str(output_grad.rows(), output_grad.cols()));
    return reverse_sweep(mlp, cache, output_grad);
}

AdamState make_adam(const Mlp& mlp, AdamParams params) {
    AdamState state;
    state.params = params;
    state.m.resize(mlp.layers.size());
    state.v.resize(mlp.layers.size());
    for (size_t l = 0; l < mlp.layers.size(); ++l) {
        const auto& layer = mlp.layers[l];
        state.m[l].weights = Matrix::Zero(layer.weights.rows(), layer.weights.cols());
        state.m[l].bias = RowVector::Zero(layer.bias.cols());
        state.v[l] = state.m[l];
    }
    return state;
}

void adam_step(Mlp& mlp, const Gradients& grads, AdamState& state) {
    if (grads.layers.size() != mlp.layers.size() || state.m.size() != mlp.layers.size())
        throw ShapeError("adam_step: gradient/state layer count does not match model");
    for (size_t l = 0; l < mlp.layers.size(); ++l) {
        const auto& layer = mlp.layers[l];
        const auto& g = grads.layers[l];
        if (g.weights.rows() != layer.weights.rows() || g.weights.cols() != layer.weights.cols() ||
            g.bias.cols() != layer.bias.cols())
            throw ShapeError("adam_step: gradient shape mismatch at layer " + std::to_string(l));
    }

    ++state.step;
    const double bias1 = 1.0 - std::pow(state.params.beta1, static_cast<double>(state.step));
    const double bias2 = 1.0 - std::pow(state.params.beta2, static_cast<double>(state.step));
    for (size_t l = 0; l < mlp.layers.size(); ++l) {
        auto& layer = mlp.layers[l];
        adam_update(layer.weights, grads.layers[l].weights, state.m[l].weights,
                    state.v[l].weights, state.params, bias1, bias2);
        adam_update(layer.bias, grads.layers[l].bias, state.m[l].bias, state.v[l].bias,
                    state.params, bias1, bias2);
    }
}

double gradient_check(const Mlp& mlp, const Matrix& input, const Matrix& labels, double h) {
    if (!(h >= 1e-7 && h <= 1e-3))
        throw ConfigError("gradient_check: h must lie in [1e-7, 1e-3]");

    const Gradients analytic = backward(mlp, forward(mlp, input), labels);

    Mlp probe = mlp;
    const auto loss_at = [&]() { return bce_loss(forward(probe, input).output(), labels); };
    const auto relative_error = [](double a, double n) {
        return std::abs(a - n) / std::max(1e-8, std::abs(a) + std::abs(n));
    };

    double worst = 0.0;
    const auto check_entry = [&](double& theta, double analytic_g) {
        const double saved = theta;
        theta = saved + h;
        const double up = loss_at();
        theta = saved - h;
        const double down = loss_at();
        theta = saved;
        const double numeric = (up - down) / (2.0 * h);
        worst = std::max(worst, relative_error(analytic_g, numeric));
    };

    for (size_t l = 0; l < probe.layers.size(); ++l) {
        auto& layer = probe.layers[l];
        for (Index i = 0; i < layer.weights.rows(); ++i)
            for (Index j = 0; j < layer.weights.cols(); ++j)
                check_entry(layer.weights(i, j), analytic.layers[l].weights(i, j));
        for (Index j = 0; j < layer.bias.cols(); ++j)
            check_entry(layer.bias(0, j), analytic.layers[l].bias(0, j));
    }
    return worst;
}

void accumulate(Gradients& into, const Gradients& other) {
    if (into.layers.size() != other.layers.size())
        throw ShapeError("accumulate: layer count mismatch");
    for (size_t l = 0; l < into.layers.size(); ++l) {
        into.layers[l].weights += other.layers[l].weights;
        into.layers[l].bias += other.layers[l].bias;
    }
}

void negate(Gradients& grads) {
    for (auto& layer : grads.layers) {
        layer.weights = -layer.weights;
        layer.bias = -layer.bias;
    }
    if (grads.input.size() > 0) grads.input = -grads.input;
}

bool same_parameters(const Mlp& a, const Mlp& b) {
    if (a.layers.size() != b.layers.size()) return false;
    for (size_t l = 0; l < a.layers.size(); ++l) {
        if (a.layers[l].weights.rows() != b.layers[l].weights.rows() ||
            a.layers[l].weights.cols() != b.layers[l].weights.cols() ||
            a.layers[l].bias.cols() != b.layers[l].bias.cols())
            return false;
        if ((a.layers[l].weights.array() != b.layers[l].weights.array()).any()) return false;
        if ((a.layers[l].bias.array() != b.layers[l].bias.array()).any()) return false;
    }
    return true;
}

}  // namespace ganlab
