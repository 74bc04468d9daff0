// hroc: command-line front end for pointwise relaxation, plane sampling,
// convergence studies, the damage material-point path and microstructure
// export. Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include "harness/harness.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

namespace {

using hroc::harness::ConfigError;
using hroc::harness::ExperimentConfig;

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Flags {
    std::string config;
    std::optional<std::string> model;
    std::optional<int> dim;
    std::vector<std::string> params;
    std::optional<int> N;
    std::optional<double> r;
    std::optional<int> kmax;
    std::optional<int> nrot;
    std::optional<std::string> out;
    std::optional<int> threads;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> F;
    std::optional<double> t;
    std::vector<int> Ns;
    std::optional<int> reps;
    std::optional<double> delta, lo, hi;
    std::optional<double> t0, t1;
    std::optional<int> samples;
    std::optional<int> m;
    std::optional<double> eps, sep;
};

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("-c,--config", f.config, "JSON configuration file");
    cmd->add_option("--model", f.model, "energy model: ksd, multiwell, fail, quadratic, damage-nh1, damage-nh2");
    cmd->add_option("--dim", f.dim, "dimension d (2 or 3)");
    cmd->add_option("--param", f.params, "model parameter key=value (repeatable)");
    cmd->add_option("--N", f.N, "samples per rank-one line");
    cmd->add_option("--r", f.r, "infinity-norm radius of the search box");
    cmd->add_option("--kmax", f.kmax, "maximum lamination depth");
    cmd->add_option("--nrot", f.nrot, "rotations for stress averaging");
    cmd->add_option("--out", f.out, "output directory");
    cmd->add_option("--threads", f.threads, "worker threads for grid sweeps");
    cmd->add_option("--seed", f.seed, "seed recorded with the run");
    cmd->add_option("--F", f.F, "evaluation matrix, rows separated by ';', e.g. \"0.2,0.1;0.1,0.3\"");
    cmd->add_option("--t", f.t, "evaluation matrix t * I");
}

void apply(const Flags& f, ExperimentConfig& c) {
    if (f.model) c.model.name = *f.model;
    if (f.dim) c.model.dim = *f.dim;
    for (const auto& kv : f.params) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("--param expects key=value, got '" + kv + "'");
        try {
            c.model.params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
        } catch (const std::exception&) {
            throw ConfigError("--param '" + kv + "': value is not a number");
        }
    }
    if (f.N) c.N = *f.N;
    if (f.r) c.r = *f.r;
    if (f.kmax) c.k_max = *f.kmax;
    if (f.nrot) c.n_rot = c.path.n_rot = *f.nrot;
    if (f.out) c.out_dir = *f.out;
    if (f.threads) c.threads = *f.threads;
    if (f.seed) c.seed = *f.seed;
    if (f.F) c.point = hroc::harness::parse_matrix(*f.F);
    if (f.t) c.point = hroc::Matrix::identity(c.dim()) * *f.t;
    if (!f.Ns.empty()) c.convergence.N_values = f.Ns;
    if (f.reps) c.convergence.repetitions = *f.reps;
    if (f.delta) c.surface.delta = *f.delta;
    if (f.lo) c.surface.lo = *f.lo;
    if (f.hi) c.surface.hi = *f.hi;
    if (f.t0) c.path.t0 = *f.t0;
    if (f.t1) c.path.t1 = *f.t1;
    if (f.samples) c.path.samples = *f.samples;
    if (f.m) c.m = *f.m;
    if (f.eps) c.epsilon = *f.eps;
    if (f.sep) c.separation = *f.sep;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hroc: hierarchical rank-one sequence convexification"};
    app.set_version_flag("--version", std::string(hroc::version()));
    app.require_subcommand(1);
    Flags f;

    auto* point = app.add_subcommand("point", "relax one deformation gradient");
    auto* surface = app.add_subcommand("surface", "sample W and W_rc on a plane of two matrix entries");
    auto* convergence = app.add_subcommand("convergence", "error and timing against N");
    auto* path = app.add_subcommand("material-path", "biaxial damage path with rotational averaging");
    auto* micro = app.add_subcommand("microstructure", "reconstruct and project a laminate field");
    auto* check = app.add_subcommand("validate-config", "validate a configuration and print its hash");
    for (auto* cmd : {point, surface, convergence, path, micro, check}) add_common(cmd, f);

    convergence->add_option("--Ns", f.Ns, "N values")->delimiter(',');
    convergence->add_option("--reps", f.reps, "timed repetitions per N");
    surface->add_option("--delta", f.delta, "grid step");
    surface->add_option("--lo", f.lo, "lower end of both axes");
    surface->add_option("--hi", f.hi, "upper end of both axes");
    path->add_option("--t0", f.t0, "first path parameter");
    path->add_option("--t1", f.t1, "last path parameter");
    path->add_option("--samples", f.samples, "number of path samples");
    micro->add_option("--m", f.m, "grid cells per axis");
    micro->add_option("--eps", f.eps, "laminate period");
    micro->add_option("--sep", f.sep, "period ratio between lamination levels");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    ExperimentConfig config;
    try {
        if (!f.config.empty()) config = hroc::harness::load_config(f.config);
        apply(f, config);
        hroc::harness::validate(config);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    }

    if (check->parsed()) {
        std::cout << "config_hash " << hroc::harness::config_hash(config) << "\n"
                  << hroc::harness::to_json(config, 2) << "\n";
        return 0;
    }

    using Command = hroc::harness::RunOutput (*)(const ExperimentConfig&);
    const std::map<CLI::App*, Command> commands = {
        {point, hroc::harness::cmd_point},
        {surface, hroc::harness::cmd_surface},
        {convergence, hroc::harness::cmd_convergence},
        {path, hroc::harness::cmd_material_path},
        {micro, hroc::harness::cmd_microstructure},
    };
    try {
        for (const auto& [cmd, run] : commands) {
            if (!cmd->parsed()) continue;
            const auto result = run(config);
            std::cout << result.summary << "\n";
            for (const auto& file : result.files) std::cout << "  wrote " << file << "\n";
        }
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
    return 0;
}
