#include "harness.hpp"

#include "hroc/tree_io.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace hroc::harness {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// An analytic envelope counts as attained when HROC is within this distance,
// scaled by max(1, |analytic|).
constexpr double kAttainedTolerance = 1e-2;

// Collects the files of one command and stamps each with the config hash.
class Writer {
public:
    Writer(const ExperimentConfig& config, std::string command)
        : config_(config), command_(std::move(command)), hash_(config_hash(config)) {
        std::error_code ec;
        fs::create_directories(config.out_dir, ec);
        if (ec) throw std::runtime_error("cannot create output directory '" + config.out_dir + "': " + ec.message());
    }

    const std::string& hash() const { return hash_; }

    std::string stamp() const {
        return std::string("hroc ") + version() + " command=" + command_ + " config_hash=" + hash_;
    }

    std::ofstream open(const std::string& name) {
        const std::string path = (fs::path(config_.out_dir) / name).string();
        std::ofstream os(path);
        if (!os) throw std::runtime_error("cannot write '" + path + "'");
        os << std::setprecision(17);
        out_.files.push_back(path);
        return os;
    }

    /// CSV with a '#' comment line carrying version and hash, then the header.
    std::ofstream csv(const std::string& name, const std::string& header) {
        std::ofstream os = open(name);
        os << "# " << stamp() << "\n" << header << "\n";
        return os;
    }

    RunOutput finish(json summary, std::string line) {
        json side = {{"command", command_},
                     {"version", version()},
                     {"config_hash", hash_},
                     {"config", json::parse(to_json(config_))},
                     {"summary", std::move(summary)}};
        json files = json::array();
        for (const auto& f : out_.files) files.push_back(fs::path(f).filename().string());
        side["files"] = files;
        std::ofstream os = open(command_ + ".json");
        os << side.dump(2) << "\n";
        out_.summary = std::move(line);
        return out_;
    }

private:
    const ExperimentConfig& config_;
    std::string command_;
    std::string hash_;
    RunOutput out_;
};

std::string matrix_header(const std::string& prefix, int d) {
    std::string h;
    for (int i = 1; i <= d; ++i)
        for (int j = 1; j <= d; ++j) h += (h.empty() ? "" : ",") + prefix + std::to_string(i) + std::to_string(j);
    return h;
}

void write_matrix(std::ostream& os, const Matrix& m) {
    for (int k = 0; k < m.size(); ++k) os << (k ? "," : "") << m.flat()[static_cast<std::size_t>(k)];
}

json matrix_json(const Matrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.dim(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.dim(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

// NaN becomes null in JSON.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json summary_json(const TreeSummary& s) { return {{"depth", s.depth}, {"leaves", s.leaves}, {"splits", s.splits}}; }

bool attained(double abs_error, double analytic) {
    return abs_error <= kAttainedTolerance * std::max(1.0, std::abs(analytic));
}

}  // namespace

RunOutput cmd_point(const ExperimentConfig& config) {
    validate(config);
    const auto W = config.energy();
    const Matrix F = config.point_or_default();
    HrocEngine engine(config.convexify_params());
    const PointResult r = run_point(engine, *W, F);
    const int d = F.dim();

    Writer out(config, "point");
    {
        auto os = out.csv("point.csv", matrix_header("F", d) +
                                           ",W,W_rc,W_analytic,abs_error,rel_error,attained," +
                                           matrix_header("P", d) + ",depth,leaves,splits,seconds");
        write_matrix(os, F);
        os << "," << r.W << "," << r.W_rc << ",";
        if (r.W_analytic) os << *r.W_analytic;
        os << "," << r.abs_error << "," << r.rel_error << ",";
        if (r.W_analytic) os << (attained(r.abs_error, *r.W_analytic) ? 1 : 0);
        os << ",";
        write_matrix(os, r.P);
        os << "," << r.summary.depth << "," << r.summary.leaves << "," << r.summary.splits << "," << r.seconds << "\n";
    }
    {
        auto os = out.open("point_tree.json");
        json doc = {{"version", version()}, {"config_hash", out.hash()}, {"tree", json::parse(r.tree_json)}};
        os << doc.dump(2) << "\n";
    }

    json A = json::array();
    for (double a : r.A.flat()) A.push_back(a);
    json s = {{"F", matrix_json(F)},
              {"W", number(r.W)},
              {"W_rc", r.W_rc},
              {"W_analytic", r.W_analytic ? json(*r.W_analytic) : json(nullptr)},
              {"abs_error", number(r.abs_error)},
              {"rel_error", number(r.rel_error)},
              {"attained", r.W_analytic ? json(attained(r.abs_error, *r.W_analytic)) : json(nullptr)},
              {"P", matrix_json(r.P)},
              {"A", A},
              {"tree", summary_json(r.summary)},
              {"seconds", r.seconds}};
    std::ostringstream line;
    line << std::setprecision(10) << "W=" << r.W << " W_rc=" << r.W_rc;
    if (r.W_analytic)
        line << " analytic=" << *r.W_analytic << " abs_error=" << r.abs_error
             << (attained(r.abs_error, *r.W_analytic) ? "" : " (analytic envelope not attained)");
    line << " depth=" << r.summary.depth << " leaves=" << r.summary.leaves;
    return out.finish(std::move(s), line.str());
}

RunOutput cmd_surface(const ExperimentConfig& config) {
    validate(config);
    const auto W = config.energy();
    SurfaceSpec spec;
    if (config.surface.base) spec.base = *config.surface.base;
    spec.row1 = config.surface.row1;
    spec.col1 = config.surface.col1;
    spec.row2 = config.surface.row2;
    spec.col2 = config.surface.col2;
    spec.lo = config.surface.lo;
    spec.hi = config.surface.hi;
    spec.delta = config.surface.delta;
    const SurfaceResult r = run_surface(config.convexify_params(), *W, spec, config.threads);

    Writer out(config, "surface");
    {
        auto os = out.csv("surface.csv", "s1,s2,W,W_rc,W_analytic,abs_error,rel_error,depth,leaves");
        for (const auto& n : r.nodes) {
            os << n.s1 << "," << n.s2 << "," << n.W << "," << n.W_rc << ",";
            if (n.W_analytic) os << *n.W_analytic;
            os << "," << n.abs_error << "," << n.rel_error << "," << n.summary.depth << "," << n.summary.leaves
               << "\n";
        }
        os << "# summary nodes=" << r.nodes.size() << " max_abs_error=" << r.max_abs_error
           << " max_rel_error=" << r.max_rel_error << "\n";
    }
    json s = {{"n1", r.n1},
              {"n2", r.n2},
              {"nodes", r.nodes.size()},
              {"max_abs_error", number(r.max_abs_error)},
              {"max_rel_error", number(r.max_rel_error)},
              {"seconds", r.seconds}};
    std::ostringstream line;
    line << r.n1 << "x" << r.n2 << " nodes, max_rel_error=" << r.max_rel_error << ", " << r.seconds << " s";
    return out.finish(std::move(s), line.str());
}

RunOutput cmd_convergence(const ExperimentConfig& config) {
    validate(config);
    const auto W = config.energy();
    const Matrix F = config.point_or_default();
    const ConvergenceResult r =
        run_convergence(*W, F, config.convergence.N_values, config.r, config.k_max, config.convergence.repetitions);

    Writer out(config, "convergence");
    json rows = json::array();
    {
        auto os = out.csv("convergence.csv", "N,W_rc,error,median_seconds,depth,leaves");
        for (const auto& row : r.rows) {
            os << row.N << "," << row.W_rc << "," << row.error << "," << row.median_seconds << ","
               << row.summary.depth << "," << row.summary.leaves << "\n";
            rows.push_back({{"N", row.N},
                            {"W_rc", row.W_rc},
                            {"error", number(row.error)},
                            {"median_seconds", row.median_seconds},
                            {"samples", row.samples}});
        }
        os << "# summary time_slope=" << r.time_slope << "\n";
    }
    json s = {{"point", matrix_json(F)}, {"rows", rows}, {"time_slope", number(r.time_slope)}};
    std::ostringstream line;
    line << r.rows.size() << " N values, log-log time slope " << r.time_slope;
    return out.finish(std::move(s), line.str());
}

RunOutput cmd_material_path(const ExperimentConfig& config) {
    validate(config);
    if (config.dim() != 2) throw ConfigError("config: material-path runs the biaxial path in d = 2");
    const auto W = config.energy();
    PathSpec spec = config.path;
    spec.n_rot = config.n_rot;
    const PathResult r = run_material_path(config.convexify_params(), *W, spec);

    Writer out(config, "material-path");
    {
        auto os = out.csv("material_path.csv",
                          "t,W,W_rc,P11,P22,P11_rot,P22_rot,W_rot,dW_dt_half,dWrot_dt_half,alpha,depth,leaves");
        for (const auto& row : r.rows)
            os << row.t << "," << row.W << "," << row.W_rc << "," << row.P11 << "," << row.P22 << ","
               << row.P11_rot << "," << row.P22_rot << "," << row.W_rot << "," << row.dW_dt_half << ","
               << row.dWrot_dt_half << "," << row.alpha << "," << row.summary.depth << "," << row.summary.leaves
               << "\n";
    }
    const double scale = r.max_abs_P_rot > 0.0 ? r.max_abs_P_rot : 1.0;
    json s = {{"samples", r.rows.size()},
              {"max_abs_P_rot", r.max_abs_P_rot},
              {"rot_asymmetry", r.max_rot_asymmetry / scale},
              {"fd_deviation", r.max_fd_deviation / scale},
              {"fd_deviation_rot", r.max_fd_deviation_rot / scale}};
    std::ostringstream line;
    line << r.rows.size() << " samples, asymmetry " << r.max_rot_asymmetry / scale << ", fd deviation "
         << r.max_fd_deviation / scale << " (relative to max |P_rot| = " << r.max_abs_P_rot << ")";
    return out.finish(std::move(s), line.str());
}

RunOutput cmd_microstructure(const ExperimentConfig& config) {
    validate(config);
    const auto W = config.energy();
    const Matrix F = config.point_or_default();
    const MicrostructureResult r =
        run_microstructure(config.convexify_params(), *W, F, config.epsilon, config.separation, config.m);
    const int d = F.dim();
    const TreeSummary ts = summarize(r.hroc.tree);

    Writer out(config, "microstructure");
    {
        auto os = out.open("microstructure_tree.json");
        json doc = {{"version", version()},
                    {"config_hash", out.hash()},
                    {"tree", json::parse(tree_to_json(r.hroc.tree))}};
        os << doc.dump(2) << "\n";
    }
    {
        std::string header;
        for (int k = 1; k <= d; ++k) header += "x" + std::to_string(k) + ",";
        auto os = out.csv("coefficient.csv", header + "leaf," + matrix_header("F", d));
        const auto phases = leaves(r.hroc.tree).phases;
        const int m = config.m;
        const std::size_t cells = r.phases.size();
        for (std::size_t c = 0; c < cells; ++c) {
            std::size_t rest = c;
            for (int k = 0; k < d; ++k) {
                os << (static_cast<double>(rest % static_cast<std::size_t>(m)) + 0.5) / m << ",";
                rest /= static_cast<std::size_t>(m);
            }
            const int leaf = r.phases[c];
            os << leaf << ",";
            write_matrix(os, phases[static_cast<std::size_t>(leaf)].F);
            os << "\n";
        }
    }
    {
        auto os = out.open("displacement.csv");
        os << "# " << out.stamp() << "\n";
        write_field_csv(os, r.field);
    }
    {
        std::ostringstream vtk;
        write_field_vtk(vtk, r.field, r.phases);
        std::string text = vtk.str();
        // The second line of a legacy VTK file is a free-form title.
        const auto first = text.find('\n');
        const auto second = text.find('\n', first + 1);
        text.replace(first + 1, second - first - 1, out.stamp());
        auto os = out.open("displacement.vtk");
        os << text;
    }

    json s = {{"F", matrix_json(F)},
              {"W_rc", r.hroc.W_rc},
              {"tree", summary_json(ts)},
              {"tree_fractions", r.tree_fractions},
              {"grid_fractions", r.grid_fractions},
              {"max_fraction_error", r.max_fraction_error},
              {"residual", r.field.residual},
              {"iterations", r.field.iterations},
              {"misfit", r.field.misfit},
              {"misfit_at_zero", r.field.misfit_at_zero}};
    auto vec = [](const Vector& v) {
        json a = json::array();
        for (int i = 0; i < v.dim(); ++i) a.push_back(v[i]);
        return a;
    };
    if (r.stripe_normal) s["stripe_normal"] = vec(*r.stripe_normal);
    if (r.split_normal) s["split_normal"] = vec(*r.split_normal);
    std::ostringstream line;
    line << "tree depth " << ts.depth << ", " << ts.leaves << " leaves, max fraction error " << r.max_fraction_error
         << ", residual " << r.field.residual;
    return out.finish(std::move(s), line.str());
}

}  // namespace hroc::harness
