#pragma once

#include <Eigen/Dense>

#include "ganlab/errors.hpp"
#include "ganlab/types.hpp"

namespace ganlab {

enum class Activation { identity, relu, leaky_relu, tanh, sigmoid };

inline constexpr double kLeakySlope = 0.2;

// Elementwise activations as expression-friendly free functions: they accept
// any Eigen array expression and return one, so callers can fuse them into
// larger expressions.

template <typename Derived>
auto sigmoid(const Eigen::ArrayBase<Derived>& z) {
    return 1.0 / (1.0 + (-z).exp());
}

template <typename Derived>
auto relu(const Eigen::ArrayBase<Derived>& z) {
    return z.max(0.0);
}

template <typename Derived>
auto leaky_relu(const Eigen::ArrayBase<Derived>& z, double slope = kLeakySlope) {
    return z.max(slope * z);
}

inline Matrix apply_activation(Activation act, const Matrix& pre) {
    switch (act) {
        case Activation::identity: return pre;
        case Activation::relu: return relu(pre.array()).matrix();
        case Activation::leaky_relu: return leaky_relu(pre.array()).matrix();
        case Activation::tanh: return pre.array().tanh().matrix();
        case Activation::sigmoid: return sigmoid(pre.array()).matrix();
    }
    throw ConfigError("unknown activation tag");
}

// Derivative with respect to the pre-activation. `post` is the forward output
// for the same `pre`; tanh and sigmoid derivatives reuse it.
// At the relu/leaky kink (pre == 0) the left derivative is used.
inline Matrix activation_grad(Activation act, const Matrix& pre, const Matrix& post) {
    switch (act) {
        case Activation::identity: return Matrix::Ones(pre.rows(), pre.cols());
        case Activation::relu: return (pre.array() > 0.0).cast<double>().matrix();
        case Activation::leaky_relu:
            return ((pre.array() > 0.0).cast<double>() * (1.0 - kLeakySlope) + kLeakySlope)
                .matrix();
        case Activation::tanh: return (1.0 - post.array().square()).matrix();
        case Activation::sigmoid: return (post.array() * (1.0 - post.array())).matrix();
    }
    throw ConfigError("unknown activation tag");
}

inline const char* activation_name(Activation act) {
    switch (act) {
        case Activation::identity: return "identity";
        case Activation::relu: return "relu";
        case Activation::leaky_relu: return "leaky_relu";
        case Activation::tanh: return "tanh";
        case Activation::sigmoid: return "sigmoid";
    }
    return "?";
}

}  // namespace ganlab
