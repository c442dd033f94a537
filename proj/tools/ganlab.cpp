// Command-line front end: train the competitive and/or cooperative variant
// on a chosen dataset and write metric CSVs plus checkpoint SVG snapshots.

#include <iostream>
#include <vector>

#include "ganlab/errors.hpp"
#include "ganlab/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitDivergence = 4;

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        const ganlab::CliResult cli = ganlab::parse_cli(args);
        if (cli.help_requested) {
            std::cout << cli.help_text;
            return kExitOk;
        }
        const ganlab::ExperimentResult result = ganlab::run_experiment(cli.config);
        for (const auto& [mode, log] : result.runs) {
            if (log.rows.empty()) continue;
            const auto& last = log.rows.back();
            std::cout << mode << ": final js=" << last.js_divergence
                      << "  total_ms=" << static_cast<double>(last.cumulative_elapsed_ns) / 1e6
                      << "  updates g=" << last.g_updates << " d=" << last.d_updates << "\n";
        }
        if (result.summary) {
            std::cout << "time ratio cen/gan: " << result.summary->time_ratio << "\n";
        }
        return kExitOk;
    } catch (const ganlab::ConfigError& e) {
        std::cerr << "ganlab: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ganlab::DivergenceError& e) {
        std::cerr << "ganlab: " << e.what() << "\n";
        return kExitDivergence;
    } catch (const ganlab::Error& e) {
        std::cerr << "ganlab: " << e.what() << "\n";
        return kExitData;
    }
}
