#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ganlab/metrics.hpp"
#include "ganlab/nn.hpp"
#include "ganlab/rng.hpp"
#include "ganlab/training.hpp"

namespace ganlab {

enum class RunMode { gan, cen, both };
enum class DatasetKind { sine, ellipses, circles, mnist, mnist123 };

struct ExperimentConfig {
    RunMode mode = RunMode::both;
    DatasetKind dataset = DatasetKind::sine;
    long epochs = 800;            // the reference figure range
    Index batch_size = 64;
    Index dataset_size = 2048;    // synthetic datasets only
    std::uint64_t seed = 42;
    long checkpoint_every = 100;  // the reference snapshot cadence
    Index bins = 50;
    std::filesystem::path out_dir = "out";
    std::filesystem::path mnist_images;
    std::filesystem::path mnist_labels;
    bool no_timing = false;  // zero time columns in CSVs for byte-determinism
};

// Parse the CLI argument list (without argv[0]). Throws ConfigError with a
// usage-worthy message on unknown flags, bad enum values, or invalid counts.
// When --help is present, `help_requested` is set and the config is unusable.
struct CliResult {
    ExperimentConfig config;
    bool help_requested = false;
    std::string help_text;
};
CliResult parse_cli(const std::vector<std::string>& args);

// Final-checkpoint comparison of a GAN log and a CEN log over identical
// checkpoint sets.
struct ComparisonSummary {
    double gan_final_js = 0.0;
    double cen_final_js = 0.0;
    std::int64_t gan_total_ns = 0;
    std::int64_t cen_total_ns = 0;
    double time_ratio = 0.0;  // cen / gan
    long gan_g_updates = 0, gan_d_updates = 0;
    long cen_g_updates = 0, cen_d_updates = 0;
};
ComparisonSummary compare_runs(const RunLog& gan_log, const RunLog& cen_log);

// `epoch,js_divergence,cumulative_time_ms,g_updates,d_updates`, floats with
// six decimals, one '\n' per line. Refuses an empty log.
void emit_metrics_csv(const RunLog& log, const std::filesystem::path& path,
                      bool zero_timing = false);

void emit_summary_csv(const ComparisonSummary& summary, const std::filesystem::path& path,
                      bool zero_timing = false);

// The reference architectures: both trainers share them so the gate is the
// only experimental variable.
GanModel build_model(const ExperimentConfig& config, std::uint64_t init_seed);

// Materialize the configured ground-truth dataset (synthetic generation or
// IDX loading/subsetting).
Matrix build_dataset(const ExperimentConfig& config, Rng& rng);

struct ExperimentResult {
    std::vector<std::pair<std::string, RunLog>> runs;  // ("gan"/"cen", log)
    std::optional<ComparisonSummary> summary;          // mode == both only
};

// Run the configured experiment(s) and write metrics CSVs, checkpoint SVGs,
// and (for mode both) summary.csv under config.out_dir. In both-mode the two
// runs start from bit-identical weights on the identical dataset.
ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace ganlab
