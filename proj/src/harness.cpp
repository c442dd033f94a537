#include "ganlab/harness.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <utility>

#include "ganlab/datasets.hpp"
#include "ganlab/errors.hpp"
#include "ganlab/mnist.hpp"
#include "ganlab/svg.hpp"

namespace ganlab {

namespace {

std::string fixed6(double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.6f", v);
    return buffer;
}

double ns_to_ms(std::int64_t ns) { return static_cast<double>(ns) / 1e6; }

bool is_mnist(DatasetKind kind) {
    return kind == DatasetKind::mnist || kind == DatasetKind::mnist123;
}

const std::map<std::string, RunMode> kModeNames = {
    {"gan", RunMode::gan}, {"cen", RunMode::cen}, {"both", RunMode::both}};

const std::map<std::string, DatasetKind> kDatasetNames = {{"sine", DatasetKind::sine},
                                                          {"ellipses", DatasetKind::ellipses},
                                                          {"circles", DatasetKind::circles},
                                                          {"mnist", DatasetKind::mnist},
                                                          {"mnist123", DatasetKind::mnist123}};

}  // namespace

CliResult parse_cli(const std::vector<std::string>& args) {
    CLI::App app{"Competitive vs cooperative training of generative networks"};
    app.name("ganlab");

    CliResult result;
    ExperimentConfig& config = result.config;
    std::string mode_name = "both";
    std::string dataset_name = "sine";
    std::string out_dir = "out";
    std::string mnist_images, mnist_labels;

    app.add_option("--mode", mode_name, "gan | cen | both")
        ->check(CLI::IsMember({"gan", "cen", "both"}));
    app.add_option("--dataset", dataset_name, "sine | ellipses | circles | mnist | mnist123")
        ->check(CLI::IsMember({"sine", "ellipses", "circles", "mnist", "mnist123"}));
    app.add_option("--epochs", config.epochs, "training epochs")->capture_default_str();
    app.add_option("--batch-size", config.batch_size)->capture_default_str();
    app.add_option("--dataset-size", config.dataset_size, "points for synthetic datasets")
        ->capture_default_str();
    app.add_option("--seed", config.seed)->capture_default_str();
    app.add_option("--checkpoint-every", config.checkpoint_every, "epochs between snapshots")
        ->capture_default_str();
    app.add_option("--bins", config.bins, "histogram bins per axis")->capture_default_str();
    app.add_option("--out-dir", out_dir)->capture_default_str();
    app.add_option("--mnist-images", mnist_images, "IDX image file (mnist modes)");
    app.add_option("--mnist-labels", mnist_labels, "IDX label file (mnist modes)");
    app.add_flag("--no-timing", config.no_timing, "zero time columns in CSV outputs");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        result.help_requested = true;
        result.help_text = app.help();
        return result;
    } catch (const CLI::ParseError& e) {
        throw ConfigError(std::string("usage: ") + e.what());
    }

    config.mode = kModeNames.at(mode_name);
    config.dataset = kDatasetNames.at(dataset_name);
    config.out_dir = out_dir;
    config.mnist_images = mnist_images;
    config.mnist_labels = mnist_labels;

    if (config.epochs < 1) throw ConfigError("--epochs must be >= 1");
    if (config.batch_size < 1) throw ConfigError("--batch-size must be >= 1");
    if (config.dataset_size < 1) throw ConfigError("--dataset-size must be >= 1");
    if (config.checkpoint_every < 1) throw ConfigError("--checkpoint-every must be >= 1");
    if (config.bins < 1) throw ConfigError("--bins must be >= 1");
    if (is_mnist(config.dataset)) {
        if (mnist_images.empty()) throw ConfigError("--mnist-images is required for mnist modes");
        if (mnist_labels.empty()) throw ConfigError("--mnist-labels is required for mnist modes");
    }
    if (config.epochs < config.checkpoint_every)
        std::cerr << "warning: epochs < checkpoint-every, no checkpoint will be recorded\n";
    return result;
}

GanModel build_model(const ExperimentConfig& config, std::uint64_t init_seed) {
    Rng derive(init_seed);
    const std::uint64_t gen_seed = derive.next_u64();
    const std::uint64_t disc_seed = derive.next_u64();

    GanModel model;
    if (is_mnist(config.dataset)) {
        model.latent_dim = 64;
        model.generator = init_mlp({64, 256, 784},
                                   {Activation::leaky_relu, Activation::sigmoid}, gen_seed);
        model.discriminator = init_mlp({784, 256, 1},
                                       {Activation::leaky_relu, Activation::sigmoid}, disc_seed);
    } else {
        model.latent_dim = 2;
        model.generator =
            init_mlp({2, 32, 32, 2},
                     {Activation::leaky_relu, Activation::leaky_relu, Activation::identity},
                     gen_seed);
        model.discriminator =
            init_mlp({2, 32, 32, 1},
                     {Activation::leaky_relu, Activation::leaky_relu, Activation::sigmoid},
                     disc_seed);
    }
    model.gen_opt = make_adam(model.generator);
    model.disc_opt = make_adam(model.discriminator);
    return model;
}

Matrix build_dataset(const ExperimentConfig& config, Rng& rng) {
    switch (config.dataset) {
        case DatasetKind::sine: return gen_sine(config.dataset_size, rng);
        case DatasetKind::ellipses: return gen_ellipses(config.dataset_size, rng);
        case DatasetKind::circles: return gen_circles(config.dataset_size, rng);
        case DatasetKind::mnist:
            return load_mnist_idx(config.mnist_images, config.mnist_labels).images;
        case DatasetKind::mnist123: {
            const MnistSet full = load_mnist_idx(config.mnist_images, config.mnist_labels);
            return subset_mnist(full, {{1, 5000}, {2, 3000}, {3, 2000}}).images;
        }
    }
    throw ConfigError("unknown dataset kind");
}

ComparisonSummary compare_runs(const RunLog& gan_log, const RunLog& cen_log) {
    if (gan_log.rows.empty() || cen_log.rows.empty())
        throw ComparisonError("compare_runs: empty run log");
    if (gan_log.rows.size() != cen_log.rows.size())
        throw ComparisonError("compare_runs: different checkpoint counts");
    for (size_t i = 0; i < gan_log.rows.size(); ++i)
        if (gan_log.rows[i].epoch != cen_log.rows[i].epoch)
            throw ComparisonError("compare_runs: checkpoint epochs differ at row " +
                                  std::to_string(i));

    ComparisonSummary summary;
    summary.gan_final_js = gan_log.rows.back().js_divergence;
    summary.cen_final_js = cen_log.rows.back().js_divergence;
    summary.gan_total_ns = gan_log.rows.back().cumulative_elapsed_ns;
    summary.cen_total_ns = cen_log.rows.back().cumulative_elapsed_ns;
    summary.time_ratio =
        static_cast<double>(summary.cen_total_ns) / static_cast<double>(summary.gan_total_ns);
    summary.gan_g_updates = gan_log.rows.back().g_updates;
    summary.gan_d_updates = gan_log.rows.back().d_updates;
    summary.cen_g_updates = cen_log.rows.back().g_updates;
    summary.cen_d_updates = cen_log.rows.back().d_updates;
    return summary;
}

void emit_metrics_csv(const RunLog& log, const std::filesystem::path& path, bool zero_timing) {
    if (log.rows.empty()) throw ConfigError("emit_metrics_csv: refusing to write an empty log");
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "epoch,js_divergence,cumulative_time_ms,g_updates,d_updates\n";
    for (const RunLogRow& row : log.rows) {
        const double ms = zero_timing ? 0.0 : ns_to_ms(row.cumulative_elapsed_ns);
        out << row.epoch << "," << fixed6(row.js_divergence) << "," << fixed6(ms) << ","
            << row.g_updates << "," << row.d_updates << "\n";
    }
    if (!out) throw IoError("failed writing " + path.string());
}

void emit_summary_csv(const ComparisonSummary& summary, const std::filesystem::path& path,
                      bool zero_timing) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "gan_final_js,cen_final_js,gan_time_ms,cen_time_ms,time_ratio_cen_over_gan,"
           "gan_g_updates,gan_d_updates,cen_g_updates,cen_d_updates\n";
    const double gan_ms = zero_timing ? 0.0 : ns_to_ms(summary.gan_total_ns);
    const double cen_ms = zero_timing ? 0.0 : ns_to_ms(summary.cen_total_ns);
    const double ratio = zero_timing ? 0.0 : summary.time_ratio;
    out << fixed6(summary.gan_final_js) << "," << fixed6(summary.cen_final_js) << ","
        << fixed6(gan_ms) << "," << fixed6(cen_ms) << "," << fixed6(ratio) << ","
        << summary.gan_g_updates << "," << summary.gan_d_updates << "," << summary.cen_g_updates
        << "," << summary.cen_d_updates << "\n";
    if (!out) throw IoError("failed writing " + path.string());
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    std::error_code ec;
    std::filesystem::create_directories(config.out_dir, ec);
    if (ec) throw IoError("cannot create " + config.out_dir.string() + ": " + ec.message());

    // One master stream fans out into dataset / init / training sub-seeds so
    // runs are reproducible from the single --seed value.
    Rng master(config.seed);
    const std::uint64_t dataset_seed = master.next_u64();
    const std::uint64_t init_seed = master.next_u64();
    const std::uint64_t train_seed = master.next_u64();

    Rng dataset_rng(dataset_seed);
    const Matrix dataset = build_dataset(config, dataset_rng);
    const bool image_data = is_mnist(config.dataset);

    // For image data the JS divergence is taken over a (mean, variance)
    // projection of the images; the 2-D datasets are scored directly.
    const Matrix ground_truth_2d = image_data ? mean_variance_projection(dataset) : dataset;
    const Support support = fit_support(ground_truth_2d);
    const auto js_eval = [&](const Matrix& generated) {
        const Matrix gen_2d = image_data ? mean_variance_projection(generated) : generated;
        return js_divergence(histogram2d(gen_2d, support, config.bins),
                             histogram2d(ground_truth_2d, support, config.bins));
    };

    // Both runs start from bit-identical weights on the identical dataset;
    // the training loop is the only difference.
    const GanModel initial_model = build_model(config, init_seed);

    std::vector<TrainMode> modes;
    if (config.mode == RunMode::gan || config.mode == RunMode::both)
        modes.push_back(TrainMode::gan);
    if (config.mode == RunMode::cen || config.mode == RunMode::both)
        modes.push_back(TrainMode::cen);

    ExperimentResult result;
    for (TrainMode mode : modes) {
        const std::string mode_name = mode == TrainMode::gan ? "gan" : "cen";
        GanModel model = initial_model;
        Rng rng(train_seed);

        TrainOptions options;
        options.mode = mode;
        options.epochs = config.epochs;
        options.batch_size = config.batch_size;
        options.checkpoint_every = config.checkpoint_every;

        const auto on_checkpoint = [&](long epoch, const Matrix& generated, const RunLogRow& row) {
            const std::string tag = mode_name + "_" + std::to_string(epoch) + ".svg";
            if (image_data) {
                emit_digit_grid_svg(generated, 28, 28, config.out_dir / ("grid_" + tag));
            } else {
                emit_scatter_svg(dataset, generated, support, config.out_dir / ("scatter_" + tag));
            }
            std::cout << mode_name << " epoch " << epoch << "  js=" << fixed6(row.js_divergence)
                      << "  g_updates=" << row.g_updates << "  d_updates=" << row.d_updates
                      << "\n";
        };

        RunLog log = run_training(model, dataset, options, rng, js_eval, on_checkpoint);
        if (!log.rows.empty())
            emit_metrics_csv(log, config.out_dir / ("metrics_" + mode_name + ".csv"),
                             config.no_timing);
        result.runs.emplace_back(mode_name, std::move(log));
    }

    if (config.mode == RunMode::both) {
        result.summary = compare_runs(result.runs[0].second, result.runs[1].second);
        emit_summary_csv(*result.summary, config.out_dir / "summary.csv", config.no_timing);
    }
    return result;
}

}  // namespace ganlab
