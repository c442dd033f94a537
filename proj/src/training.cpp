#include "ganlab/training.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "ganlab/datasets.hpp"
#include "ganlab/errors.hpp"

namespace ganlab {

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t ns_since(Clock::time_point start) {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count();
}

}  // namespace

bool ErrorPair::finite() const { return std::isfinite(dx) && std::isfinite(dz); }

ErrorPair compute_errors(const GanModel& model, const Matrix& real_batch, Rng& rng) {
    if (real_batch.rows() < 1) throw ShapeError("compute_errors: empty real batch");
    const Matrix z = sample_latent(real_batch.rows(), model.latent_dim, rng);
    const Matrix fake = forward(model.generator, z).output();
    const Matrix real_scores = forward(model.discriminator, real_batch).output();
    const Matrix fake_scores = forward(model.discriminator, fake).output();
    ErrorPair errors;
    errors.dx = bce_loss(real_scores, Matrix::Ones(real_scores.rows(), real_scores.cols()));
    errors.dz = bce_loss(fake_scores, Matrix::Zero(fake_scores.rows(), fake_scores.cols()));
    return errors;
}

ErrorPair train_discriminator_step(GanModel& model, const Matrix& real_batch, Rng& rng) {
    if (real_batch.rows() < 1) throw ShapeError("train_discriminator_step: empty real batch");
    const Matrix z = sample_latent(real_batch.rows(), model.latent_dim, rng);
    const Matrix fake = forward(model.generator, z).output();  // constant w.r.t. D

    const ForwardCache real_cache = forward(model.discriminator, real_batch);
    const ForwardCache fake_cache = forward(model.discriminator, fake);
    const Matrix ones = Matrix::Ones(real_batch.rows(), 1);
    const Matrix zeros = Matrix::Zero(fake.rows(), 1);

    ErrorPair errors;
    errors.dx = bce_loss(real_cache.output(), ones);
    errors.dz = bce_loss(fake_cache.output(), zeros);

    Gradients grads = backward(model.discriminator, real_cache, ones);
    accumulate(grads, backward(model.discriminator, fake_cache, zeros));
    adam_step(model.discriminator, grads, model.disc_opt);
    return errors;
}

double train_generator_step(GanModel& model, Index batch_rows, Rng& rng) {
    if (batch_rows < 1) throw ShapeError("train_generator_step: batch_rows must be >= 1");
    const Matrix z = sample_latent(batch_rows, model.latent_dim, rng);
    const ForwardCache gen_cache = forward(model.generator, z);
    const ForwardCache disc_cache = forward(model.discriminator, gen_cache.output());
    const Matrix zeros = Matrix::Zero(batch_rows, 1);
    const double dz = bce_loss(disc_cache.output(), zeros);

    // Ascent on dz, taken literally: push the fakes towards being scored as
    // real. The discriminator only transports the gradient; it is not updated.
    const Gradients through_disc = backward(model.discriminator, disc_cache, zeros);
    Gradients gen_grads = backward_from(model.generator, gen_cache, through_disc.input);
    negate(gen_grads);
    adam_step(model.generator, gen_grads, model.gen_opt);
    return dz;
}

StepReport gan_iteration(GanModel& model, const Matrix& real_batch, Rng& rng) {
    const auto start = Clock::now();
    StepReport report;
    report.errors = train_discriminator_step(model, real_batch, rng);
    train_generator_step(model, real_batch.rows(), rng);
    report.g_updated = true;
    report.d_updated = true;
    report.elapsed_ns = ns_since(start);
    return report;
}

GateDecision cen_gate(const ErrorPair& current, const GateState& state) {
    if (!state.prev_gen_error.has_value() || !state.prev_disc_error.has_value())
        return {true, true};  // cold start: no history, neither module is stronger
    GateDecision decision;
    decision.train_g = current.generator_error() < *state.prev_gen_error;
    decision.train_d = current.discriminator_error() > *state.prev_disc_error;
    return decision;
}

std::pair<StepReport, GateState> cen_iteration(GanModel& model, const Matrix& real_batch,
                                               const GateState& state, Rng& rng) {
    const auto start = Clock::now();
    StepReport report;
    report.errors = compute_errors(model, real_batch, rng);
    const GateDecision gate = cen_gate(report.errors, state);
    if (gate.train_g) train_generator_step(model, real_batch.rows(), rng);
    if (gate.train_d) train_discriminator_step(model, real_batch, rng);
    report.g_updated = gate.train_g;
    report.d_updated = gate.train_d;
    report.elapsed_ns = ns_since(start);

    GateState next;
    next.prev_gen_error = report.errors.generator_error();
    next.prev_disc_error = report.errors.discriminator_error();
    return {report, next};
}

RunLog run_training(GanModel& model, const Matrix& dataset, const TrainOptions& options, Rng& rng,
                    const std::function<double(const Matrix& generated)>& js_eval,
                    const CheckpointHook& on_checkpoint, const IterationHook& on_iteration) {
    if (options.epochs < 1) throw ConfigError("run_training: epochs must be >= 1");
    if (options.checkpoint_every < 1)
        throw ConfigError("run_training: checkpoint_every must be >= 1");
    if (!js_eval) throw ConfigError("run_training: js_eval is required");

    RunLog log;
    GateState gate_state;  // persists across epoch boundaries
    std::int64_t cumulative_ns = 0;
    long g_updates = 0;
    long d_updates = 0;

    for (long epoch = 1; epoch <= options.epochs; ++epoch) {
        const auto batches = shuffled_batches(dataset, options.batch_size, rng);
        for (size_t b = 0; b < batches.size(); ++b) {
            StepReport report;
            if (options.mode == TrainMode::gan) {
                report = gan_iteration(model, batches[b], rng);
            } else {
                auto [r, next_state] = cen_iteration(model, batches[b], gate_state, rng);
                report = r;
                gate_state = next_state;
            }
            if (!report.errors.finite())
                throw DivergenceError("non-finite loss at epoch " + std::to_string(epoch) +
                                          ", batch " + std::to_string(b),
                                      epoch, static_cast<long>(b));
            cumulative_ns += report.elapsed_ns;
            g_updates += report.g_updated ? 1 : 0;
            d_updates += report.d_updated ? 1 : 0;
            if (on_iteration) on_iteration(epoch, static_cast<long>(b), report);
        }

        if (epoch % options.checkpoint_every == 0) {
            const Matrix z = sample_latent(dataset.rows(), model.latent_dim, rng);
            const Matrix generated = forward(model.generator, z).output();
            RunLogRow row;
            row.epoch = epoch;
            row.js_divergence = js_eval(generated);
            row.cumulative_elapsed_ns = cumulative_ns;
            row.g_updates = g_updates;
            row.d_updates = d_updates;
            record_checkpoint(log, row);
            if (on_checkpoint) on_checkpoint(epoch, generated, row);
        }
    }
    return log;
}

}  // namespace ganlab
