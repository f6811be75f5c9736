#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "novikov/characteristic.hpp"
#include "novikov/io.hpp"
#include "novikov/tangent.hpp"

namespace novikov {

enum class Command { peakons, semilinear, smooth, metric, ch, concentration };
enum class SolverKind { rk4, picard };

struct PeakonTerm {
    double p;
    double q;
};
struct GaussianTerm {
    double amp;
    double width;
    double center;
};

// Flattened sum of peakons and Gaussians.
struct InitialData {
    std::vector<PeakonTerm> peakons;
    std::vector<GaussianTerm> gaussians;
};

struct ExperimentConfig {
    Command command = Command::semilinear;
    InitialData initial;
    bool has_initial = false;
    double L = 20.0;
    std::size_t n = 4096;
    std::optional<double> t_end;
    double dt = 1e-3;
    std::optional<std::size_t> store_every;
    SolverKind solver = SolverKind::rk4;
    double picard_window = 0.05;
    std::string output_dir = "out";
    std::uint64_t seed = 0;
    LabelGrading grading;
    std::size_t metric_pairs = 20;
    std::size_t n_theta = 33;
    json raw;  // the parsed config, echoed into the manifest
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Command parse_command(const std::string& name);
const char* command_name(Command c);

/**
 * Reads a config object. `command` overrides a "command" key in the file.
 * Throws ConfigError on any missing or invalid field.
 */
ExperimentConfig parse_config(const json& j, const std::optional<std::string>& command = std::nullopt);

// Closed-form profile of the initial data; kinks at the peakon positions.
InitialProfile make_profile(const InitialData& d);

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInvalidConfig = 2;
inline constexpr int kExitBlowup = 3;
inline constexpr int kExitNoCollision = 4;

struct RunResult {
    int exit_code = kExitOk;
    std::string message;
    std::vector<std::string> files;  // relative to the output directory
};

/**
 * Runs the configured pipeline and writes its artifacts, the manifest
 * (manifest.json) and the wall-clock stats (timing.json) into out_dir.
 * `config_text` is the raw config file content, hashed into the manifest.
 * Everything except timing.json is a deterministic function of the config.
 */
RunResult run_experiment(const ExperimentConfig& cfg, const std::string& config_text,
                         const std::filesystem::path& out_dir);

// Seeded random families for the metric and growth studies.
// Gaussian a e^{-(x-c)^2/w^2} with |a| <= 0.6, w in [0.5, 1.1], |c| <= 1.
GridFunction random_gaussian_field(std::mt19937_64& rng, double L, std::size_t n);
// 0.9 sin(0.9 x + phase): |f| <= 1 and |f'| <= 1.
GridFunction random_test_function(std::mt19937_64& rng, double L, std::size_t n);
// v a sum of three Gaussian bumps, w a small centered Gaussian.
TangentFrame random_tangent(std::mt19937_64& rng, const GridFunction& grid);

// Git blob id: SHA-1 of "blob <size>\0" followed by the content, in hex.
std::string git_blob_hash(const std::string& content);

} // namespace novikov
