#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>

#include "ganlab/metrics.hpp"
#include "ganlab/nn.hpp"
#include "ganlab/rng.hpp"
#include "ganlab/types.hpp"

namespace ganlab {

// ---------------------------------------------------------------------------
// The two training loops. Both are built from the same step primitives; the
// cooperative variant differs only in the gate that decides, per batch, which
// module is allowed to improve.
// ---------------------------------------------------------------------------

struct GanModel {
    Mlp generator;
    Mlp discriminator;
    AdamState gen_opt;
    AdamState disc_opt;
    Index latent_dim = 2;
};

// Dx: discriminator's error on the real batch (real scored as fake).
// Dz: discriminator's error on the generated batch (fakes scored as real);
// doubles as the generator's score to maximize.
struct ErrorPair {
    double dx = 0.0;
    double dz = 0.0;

    double generator_error() const { return dz; }
    double discriminator_error() const { return dx + dz; }
    bool finite() const;
};

// Previous-iteration errors remembered by the cooperative gate. Both fields
// are set together at the end of every iteration; absent only before the
// first one.
struct GateState {
    std::optional<double> prev_gen_error;
    std::optional<double> prev_disc_error;
};

struct GateDecision {
    bool train_g = true;
    bool train_d = true;
};

struct StepReport {
    ErrorPair errors;  // top-of-iteration errors (pre-update)
    bool g_updated = false;
    bool d_updated = false;
    std::int64_t elapsed_ns = 0;
};

// Fresh-z error measurement: dx = bce(D(X), 1), dz = bce(D(G(z)), 0).
// Pure with respect to the model; only the rng advances.
ErrorPair compute_errors(const GanModel& model, const Matrix& real_batch, Rng& rng);

// One Adam step on the discriminator against dx + dz with a fresh z. The
// generator is left untouched (its output enters as a constant). Returns the
// pre-update errors.
ErrorPair train_discriminator_step(GanModel& model, const Matrix& real_batch, Rng& rng);

// One gradient-ascent Adam step on the generator's objective dz =
// bce(D(G(z)), 0), with a fresh z. The discriminator is left untouched.
// Returns the pre-update dz.
double train_generator_step(GanModel& model, Index batch_rows, Rng& rng);

// Competitive iteration: discriminator step first, then generator step,
// each with its own fresh z. Both update flags are always true.
StepReport gan_iteration(GanModel& model, const Matrix& real_batch, Rng& rng);

// The cooperative gate. With g = current generator error and d = current
// discriminator error: train the generator iff g strictly decreased, train
// the discriminator iff d strictly increased. Ties count as "stronger", so
// neither trains on a tie. With no history, both train (cold start).
GateDecision cen_gate(const ErrorPair& current, const GateState& state);

// Cooperative iteration: measure errors with a fresh z, gate, then run the
// gated steps (generator first), each with its own fresh z. The returned
// state always carries this iteration's top-of-iteration errors, whether or
// not any update ran.
std::pair<StepReport, GateState> cen_iteration(GanModel& model, const Matrix& real_batch,
                                               const GateState& state, Rng& rng);

enum class TrainMode { gan, cen };

struct TrainOptions {
    TrainMode mode = TrainMode::gan;
    long epochs = 1;
    Index batch_size = 64;
    long checkpoint_every = 1;
};

// Called at each checkpoint with the freshly generated sample and the row
// just recorded.
using CheckpointHook = std::function<void(long epoch, const Matrix& generated, const RunLogRow&)>;

// Called after every iteration; lets tests audit gate behaviour.
using IterationHook = std::function<void(long epoch, long batch_index, const StepReport&)>;

// Full run: epochs x shuffled batches, the gate state persisting across epoch
// boundaries. Every checkpoint_every epochs a sample of |dataset| rows is
// generated and scored with js_eval, and one RunLog row is recorded. A
// non-finite loss aborts with DivergenceError naming the epoch and batch.
RunLog run_training(GanModel& model, const Matrix& dataset, const TrainOptions& options, Rng& rng,
                    const std::function<double(const Matrix& generated)>& js_eval,
                    const CheckpointHook& on_checkpoint = {},
                    const IterationHook& on_iteration = {});

}  // namespace ganlab
