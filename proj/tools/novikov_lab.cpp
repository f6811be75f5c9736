#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "novikov/experiment.hpp"

int main(int argc, char** argv) {
    using namespace novikov;

    CLI::App app{"Experiments for the Novikov equation: peakons, characteristic solver, metrics"};
    std::string command;
    std::string config_path;
    std::string out;
    app.add_option("command", command, "peakons | semilinear | smooth | metric | ch | concentration")->required();
    app.add_option("--config", config_path, "JSON config file")->required();
    app.add_option("--out", out, "output directory (overrides output_dir)");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInvalidConfig;
    }

    std::ifstream in(config_path, std::ios::binary);
    if (!in) {
        std::cerr << "error: cannot read " << config_path << "\n";
        return kExitInvalidConfig;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    ExperimentConfig cfg;
    try {
        cfg = parse_config(json::parse(text), command);
    } catch (const json::parse_error& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return kExitInvalidConfig;
    } catch (const ConfigError& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return kExitInvalidConfig;
    }

    const std::filesystem::path dir = out.empty() ? cfg.output_dir : out;
    try {
        const RunResult r = run_experiment(cfg, text, dir);
        if (r.exit_code == kExitInvalidConfig) {
            std::cerr << "invalid config: " << r.message << "\n";
        } else if (!r.message.empty()) {
            std::cerr << r.message << "\n";
        }
        if (r.exit_code != kExitInvalidConfig) {
            std::cout << command << ": " << r.files.size() << " files written to " << dir.string() << "\n";
        }
        return r.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}
