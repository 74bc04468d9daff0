#pragma once

// Experiment configuration, validation and result files for the hroc tool.
//
// A run is described by one JSON document. Every key is optional and falls
// back to the defaults below; unknown keys are rejected. Command-line flags
// are applied on top of the parsed document before validation.
//
//   {
//     "model":       {"name": "ksd", "dim": 2, "params": {}},
//     "convexify":   {"N": 1000, "r": 1.0, "k_max": 10},
//     "point":       [[0.2, 0.1], [0.1, 0.3]],
//     "surface":     {"base": null, "components": [[0, 0], [1, 1]],
//                     "lo": -1.0, "hi": 1.0, "delta": 0.05},
//     "convergence": {"N_values": [10, 50, 300, 1000, 5000], "repetitions": 5},
//     "path":        {"t0": 1.0, "t1": 2.0, "samples": 101},
//     "microstructure": {"epsilon": 0.25, "separation": 8.0, "m": 64},
//     "n_rot": 16, "threads": 1, "seed": 0,
//     "output": {"dir": "hroc-out"}
//   }

#include "hroc/directions.hpp"
#include "hroc/experiments.hpp"
#include "hroc/registry.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hroc::harness {

/// Malformed or inconsistent configuration. The tool exits with code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ModelConfig {
    std::string name = "ksd";
    int dim = 0;  ///< 0 selects the model default
    ModelParams params;
};

struct SurfaceConfig {
    std::optional<Matrix> base;
    int row1 = 0, col1 = 0, row2 = 1, col2 = 1;
    double lo = -1.0, hi = 1.0, delta = 0.05;
};

struct ConvergenceConfig {
    std::vector<int> N_values{10, 50, 300, 1000, 5000};
    int repetitions = 5;
};

struct ExperimentConfig {
    ModelConfig model;
    int N = 1000;
    double r = 1.0;
    int k_max = 10;
    std::optional<Matrix> point;
    SurfaceConfig surface;
    ConvergenceConfig convergence;
    PathSpec path;  ///< n_rot is kept in sync with the top-level value
    double epsilon = 0.25;
    double separation = 8.0;
    int m = 64;
    int n_rot = 16;
    int threads = 1;
    std::uint64_t seed = 0;
    std::string out_dir = "hroc-out";

    /// Model dimension after defaults are applied.
    int dim() const;
    /// Evaluation point, or the model's default point when none is given.
    Matrix point_or_default() const;
    ConvexifyParams convexify_params() const;
    EnergyPtr energy() const;
};

/// Parses a JSON document. Syntax errors report line and column; unknown
/// keys and type errors report the line of the offending key.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

/// Range and consistency checks that need the whole configuration.
void validate(const ExperimentConfig& config);

/// Canonical JSON form, used for hashing and echoed into sidecars.
std::string to_json(const ExperimentConfig& config, int indent = -1);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);
/// FNV-1a of the canonical compact JSON, as 16 lowercase hex digits.
std::string config_hash(const ExperimentConfig& config);

/// "a,b;c,d" with rows separated by ';' into a square matrix.
Matrix parse_matrix(std::string_view text);

struct RunOutput {
    std::vector<std::string> files;  ///< every file written, sidecar last
    std::string summary;             ///< one-line human-readable result
};

/// Each command writes its CSV/JSON files into config.out_dir and a sidecar
/// <command>.json with the config, its hash and the library version.
/// Domain and convergence failures propagate as exceptions.
RunOutput cmd_point(const ExperimentConfig& config);
RunOutput cmd_surface(const ExperimentConfig& config);
RunOutput cmd_convergence(const ExperimentConfig& config);
RunOutput cmd_material_path(const ExperimentConfig& config);
RunOutput cmd_microstructure(const ExperimentConfig& config);

}  // namespace hroc::harness
