#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ganlab/errors.hpp"
#include "ganlab/nn.hpp"
#include "ganlab/rng.hpp"

using namespace ganlab;

namespace {

Matrix random_matrix(Index rows, Index cols, Rng& rng, double lo = -1.0, double hi = 1.0) {
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) m(i, j) = rng.uniform(lo, hi);
    return m;
}

Matrix random_labels(Index rows, Index cols, Rng& rng) {
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) m(i, j) = rng.below(2) ? 1.0 : 0.0;
    return m;
}

double grad_norm(const Gradients& grads) {
    double sum = 0.0;
    for (const auto& layer : grads.layers) {
        sum += layer.weights.squaredNorm();
        sum += layer.bias.squaredNorm();
    }
    return std::sqrt(sum);
}

}  // namespace

TEST_CASE("init_mlp is deterministic under a seed") {
    const std::vector<Index> sizes{2, 4, 1};
    const std::vector<Activation> acts{Activation::tanh, Activation::sigmoid};
    const Mlp a = init_mlp(sizes, acts, 7);
    const Mlp b = init_mlp(sizes, acts, 7);
    CHECK(same_parameters(a, b));
    const Mlp c = init_mlp(sizes, acts, 8);
    CHECK_FALSE(same_parameters(a, c));
}

TEST_CASE("init_mlp zero biases and glorot bound") {
    const Mlp mlp = init_mlp({2, 4, 1}, {Activation::relu, Activation::sigmoid}, 7);
    for (const auto& layer : mlp.layers) CHECK(layer.bias.cwiseAbs().maxCoeff() == 0.0);
    // first layer: a = sqrt(6 / (2 + 4)) = 1.0
    CHECK(mlp.layers[0].weights.cwiseAbs().maxCoeff() <= 1.0);
    // second layer: a = sqrt(6 / 5)
    CHECK(mlp.layers[1].weights.cwiseAbs().maxCoeff() <= std::sqrt(6.0 / 5.0));
    // and the draws actually spread out instead of collapsing near zero
    CHECK(mlp.layers[0].weights.cwiseAbs().maxCoeff() > 0.1);
}

TEST_CASE("init_mlp rejects bad configurations") {
    CHECK_THROWS_AS(init_mlp({2, 4, 1}, {Activation::relu}, 1), ConfigError);
    CHECK_THROWS_AS(init_mlp({2, 0, 1}, {Activation::relu, Activation::relu}, 1), ConfigError);
    CHECK_THROWS_AS(init_mlp({5}, {}, 1), ConfigError);
}

TEST_CASE("forward identity layer returns input unchanged") {
    Mlp mlp;
    mlp.layers.push_back({Matrix::Identity(3, 3), RowVector::Zero(3), Activation::identity});
    Rng rng(11);
    const Matrix input = random_matrix(5, 3, rng);
    const ForwardCache cache = forward(mlp, input);
    CHECK((cache.output().array() == input.array()).all());
}

TEST_CASE("forward sigmoid output stays strictly inside (0,1)") {
    const Mlp mlp = init_mlp({2, 8, 1}, {Activation::tanh, Activation::sigmoid}, 3);
    Rng rng(4);
    const Matrix input = random_matrix(32, 2, rng, -5.0, 5.0);
    const Matrix out = forward(mlp, input).output();
    CHECK((out.array() > 0.0).all());
    CHECK((out.array() < 1.0).all());
}

TEST_CASE("forward is pure and batch-independent") {
    const Mlp mlp = init_mlp({2, 6, 3}, {Activation::leaky_relu, Activation::tanh}, 9);
    Rng rng(10);
    const Matrix a = random_matrix(3, 2, rng);
    const Matrix b = random_matrix(2, 2, rng);

    // purity: same input, bit-identical output
    const Matrix out1 = forward(mlp, a).output();
    const Matrix out2 = forward(mlp, a).output();
    CHECK((out1.array() == out2.array()).all());

    // forward(concat(A,B)) row-equals concat(forward(A), forward(B))
    Matrix ab(a.rows() + b.rows(), 2);
    ab << a, b;
    const Matrix joint = forward(mlp, ab).output();
    CHECK((joint.topRows(a.rows()).array() == out1.array()).all());
    CHECK((joint.bottomRows(b.rows()).array() == forward(mlp, b).output().array()).all());
}

TEST_CASE("forward rejects shape mismatch") {
    const Mlp mlp = init_mlp({2, 4, 1}, {Activation::relu, Activation::sigmoid}, 1);
    CHECK_THROWS_AS(forward(mlp, Matrix::Zero(3, 5)), ShapeError);
}

TEST_CASE("bce_loss hand cases") {
    // p = 0.5, y = 1: -ln(0.5) = ln 2
    Matrix p(1, 1), y(1, 1);
    p << 0.5;
    y << 1.0;
    CHECK(bce_loss(p, y) == doctest::Approx(std::log(2.0)).epsilon(1e-12));

    // p = 1, y = 1: zero after clamping
    p << 1.0;
    CHECK(bce_loss(p, y) <= 1e-11);

    // p = (0.9, 0.1), y = (1, 0): -(ln 0.9 + ln 0.9)/2, re-derived inline
    Matrix p2(1, 2), y2(1, 2);
    p2 << 0.9, 0.1;
    y2 << 1.0, 0.0;
    const double expected = -(std::log(0.9) + std::log(1.0 - 0.1)) / 2.0;
    CHECK(expected == doctest::Approx(0.105361).epsilon(1e-5));
    CHECK(bce_loss(p2, y2) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("bce_loss bounds and shape checks") {
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const Matrix p = random_matrix(4, 2, rng, 0.0, 1.0);
        const Matrix y = random_labels(4, 2, rng);
        CHECK(bce_loss(p, y) >= 0.0);
        // zero only when the clamped predictions match the labels
        if (((p - y).cwiseAbs().array() > 1e-6).any()) CHECK(bce_loss(p, y) > 1e-7);
    }
    CHECK_THROWS_AS(bce_loss(Matrix::Zero(2, 2), Matrix::Zero(3, 2)), ShapeError);
}

TEST_CASE("backward gradient vanishes at the loss minimum") {
    // Saturate the sigmoid so the prediction equals the label exactly.
    Mlp mlp;
    Matrix w(1, 1);
    w << 1.0;
    RowVector bias(1);
    bias << 50.0;  // sigmoid(50) rounds to exactly 1.0 in double
    mlp.layers.push_back({w, bias, Activation::sigmoid});

    const Matrix input = Matrix::Zero(4, 1);
    const Matrix labels = Matrix::Ones(4, 1);
    const ForwardCache cache = forward(mlp, input);
    CHECK(cache.output()(0, 0) == 1.0);
    CHECK(grad_norm(backward(mlp, cache, labels)) <= 1e-9);
}

TEST_CASE("backward is invariant to duplicating the batch") {
    const Mlp mlp = init_mlp({3, 5, 2}, {Activation::tanh, Activation::sigmoid}, 21);
    Rng rng(22);
    const Matrix one_row = random_matrix(1, 3, rng);
    Matrix labels1(1, 2);
    labels1 << 1.0, 0.0;

    Matrix two_rows(2, 3);
    two_rows << one_row, one_row;
    Matrix labels2(2, 2);
    labels2 << labels1, labels1;

    const Gradients g1 = backward(mlp, forward(mlp, one_row), labels1);
    const Gradients g2 = backward(mlp, forward(mlp, two_rows), labels2);
    for (size_t l = 0; l < g1.layers.size(); ++l) {
        CHECK((g1.layers[l].weights - g2.layers[l].weights).cwiseAbs().maxCoeff() <= 1e-15);
        CHECK((g1.layers[l].bias - g2.layers[l].bias).cwiseAbs().maxCoeff() <= 1e-15);
    }
}

TEST_CASE("backward rejects a cache from a different model") {
    const Mlp a = init_mlp({2, 4, 1}, {Activation::relu, Activation::sigmoid}, 1);
    const Mlp b = init_mlp({2, 3, 1}, {Activation::relu, Activation::sigmoid}, 1);
    Rng rng(2);
    const ForwardCache cache = forward(a, random_matrix(2, 2, rng));
    CHECK_THROWS_AS(backward(b, cache, Matrix::Ones(2, 1)), ConsistencyError);
}

TEST_CASE("adam zero gradient is a fixed point") {
    Mlp mlp = init_mlp({2, 3, 1}, {Activation::tanh, Activation::sigmoid}, 13);
    const Mlp before = mlp;
    AdamState state = make_adam(mlp);

    Gradients zeros;
    zeros.layers.resize(mlp.layers.size());
    for (size_t l = 0; l < mlp.layers.size(); ++l) {
        zeros.layers[l].weights = Matrix::Zero(mlp.layers[l].weights.rows(),
                                               mlp.layers[l].weights.cols());
        zeros.layers[l].bias = RowVector::Zero(mlp.layers[l].bias.cols());
    }

    adam_step(mlp, zeros, state);
    CHECK(state.step == 1);
    CHECK(same_parameters(mlp, before));
}

TEST_CASE("adam first step moves by -lr * sign(g)") {
    Mlp mlp;
    Matrix w(2, 2);
    w << 0.5, -0.25, 0.75, 0.1;
    RowVector bias(2);
    bias << 0.0, 0.0;
    mlp.layers.push_back({w, bias, Activation::identity});
    AdamState state = make_adam(mlp);
    const double lr = state.params.learning_rate;

    Gradients grads;
    grads.layers.resize(1);
    Matrix g(2, 2);
    g << 3.0, -2.5, 4.0, -8.0;  // |g| >> eps so the eps term is negligible
    grads.layers[0].weights = g;
    grads.layers[0].bias = RowVector::Zero(2);

    Mlp stepped = mlp;
    adam_step(stepped, grads, state);
    for (Index i = 0; i < 2; ++i)
        for (Index j = 0; j < 2; ++j) {
            const double delta = stepped.layers[0].weights(i, j) - w(i, j);
            const double expected = -lr * (g(i, j) > 0 ? 1.0 : -1.0);
            CHECK(std::abs(delta - expected) <= 1e-12);
        }
}

TEST_CASE("adam is stateful across calls") {
    const Mlp base = init_mlp({1, 1}, {Activation::identity}, 3);
    Gradients grads;
    grads.layers.resize(1);
    grads.layers[0].weights = Matrix::Constant(1, 1, 1.0);
    grads.layers[0].bias = RowVector::Zero(1);

    Mlp once = base;
    AdamState s1 = make_adam(once);
    adam_step(once, grads, s1);

    Mlp twice = base;
    AdamState s2 = make_adam(twice);
    adam_step(twice, grads, s2);
    adam_step(twice, grads, s2);

    CHECK(s2.step == 2);
    CHECK_FALSE(same_parameters(once, twice));
}

TEST_CASE("adam rejects mismatched gradient shapes") {
    Mlp mlp = init_mlp({2, 3, 1}, {Activation::relu, Activation::sigmoid}, 1);
    const Mlp before = mlp;
    AdamState state = make_adam(mlp);
    Gradients bad;
    bad.layers.resize(2);
    bad.layers[0].weights = Matrix::Zero(2, 2);  // wrong width
    bad.layers[0].bias = RowVector::Zero(3);
    bad.layers[1].weights = Matrix::Zero(3, 1);
    bad.layers[1].bias = RowVector::Zero(1);
    CHECK_THROWS_AS(adam_step(mlp, bad, state), ShapeError);
    // rejected before any mutation
    CHECK(same_parameters(mlp, before));
    CHECK(state.step == 0);
}

TEST_CASE("gradient_check on the reference small net") {
    const Mlp mlp = init_mlp({2, 8, 1}, {Activation::tanh, Activation::sigmoid}, 41);
    Rng rng(42);
    const Matrix input = random_matrix(4, 2, rng);
    const Matrix labels = random_labels(4, 1, rng);
    CHECK(gradient_check(mlp, input, labels, 1e-5) <= 1e-4);
}

TEST_CASE("gradient_check with leaky_relu away from kinks") {
    const Mlp mlp = init_mlp({2, 6, 1}, {Activation::leaky_relu, Activation::sigmoid}, 17);
    Rng rng(18);
    Matrix input, labels;
    // resample until every pre-activation is at least 1e-2 from the kink
    for (int attempt = 0; attempt < 100; ++attempt) {
        input = random_matrix(3, 2, rng);
        labels = random_labels(3, 1, rng);
        const ForwardCache cache = forward(mlp, input);
        if (cache.layers[0].pre.cwiseAbs().minCoeff() >= 1e-2) break;
    }
    CHECK(gradient_check(mlp, input, labels, 1e-5) <= 1e-4);
}

TEST_CASE("gradient_check validates h") {
    const Mlp mlp = init_mlp({1, 1}, {Activation::sigmoid}, 1);
    CHECK_THROWS_AS(gradient_check(mlp, Matrix::Zero(1, 1), Matrix::Ones(1, 1), 1e-8),
                    ConfigError);
    CHECK_THROWS_AS(gradient_check(mlp, Matrix::Zero(1, 1), Matrix::Ones(1, 1), 1e-2),
                    ConfigError);
}

TEST_CASE("gradient correctness over 100 random small nets") {
    Rng rng(1234);
    const std::vector<Activation> hidden{Activation::tanh, Activation::sigmoid,
                                         Activation::leaky_relu, Activation::relu,
                                         Activation::identity};
    int accepted = 0;
    std::uint64_t net_seed = 1;
    while (accepted < 100) {
        const Index in_dim = 1 + static_cast<Index>(rng.below(8));
        const Index hid_dim = 1 + static_cast<Index>(rng.below(8));
        const Index out_dim = 1 + static_cast<Index>(rng.below(4));
        const Activation act = hidden[rng.below(hidden.size())];
        const Mlp mlp = init_mlp({in_dim, hid_dim, out_dim}, {act, Activation::sigmoid},
                                 net_seed++);

        const Index rows = 1 + static_cast<Index>(rng.below(5));
        const Matrix input = random_matrix(rows, in_dim, rng);
        const Matrix labels = random_labels(rows, out_dim, rng);

        if (act == Activation::relu || act == Activation::leaky_relu) {
            // finite differences need the loss locally smooth: skip batches
            // that graze a kink
            const ForwardCache cache = forward(mlp, input);
            if (cache.layers[0].pre.cwiseAbs().minCoeff() < 1e-2) continue;
        }
        ++accepted;
        CHECK(gradient_check(mlp, input, labels, 1e-5) <= 1e-4);
    }
}
