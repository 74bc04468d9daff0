#include "hroc/experiments.hpp"

#include "hroc/damage.hpp"
#include "hroc/tree_io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <thread>

namespace hroc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

double median(std::vector<double> v) {
    if (v.empty()) return kNaN;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

const char* version() { return HROC_VERSION_STRING; }

double relative_error(double value, double reference) {
    const double diff = std::abs(value - reference);
    return std::abs(reference) > 1e-12 ? diff / std::abs(reference) : diff;
}

PointResult run_point(HrocEngine& engine, const EnergyDensity& W, const Matrix& F) {
    PointResult out;
    out.F = F;
    const auto start = Clock::now();
    HrocResult r = engine.run(W, F);
    out.seconds = seconds_since(start);
    out.W = r.W;
    out.W_rc = r.W_rc;
    out.P = r.P;
    out.A = r.A;
    out.summary = summarize(r.tree);
    out.tree_json = tree_to_json(r.tree);
    out.W_analytic = W.envelope(F);
    if (out.W_analytic) {
        out.abs_error = std::abs(out.W_rc - *out.W_analytic);
        out.rel_error = relative_error(out.W_rc, *out.W_analytic);
    } else {
        out.abs_error = out.rel_error = kNaN;
    }
    return out;
}

int SurfaceSpec::nodes_per_axis() const {
    if (!(delta > 0.0) || !(hi > lo)) throw std::invalid_argument("surface: need delta > 0 and hi > lo");
    return static_cast<int>(std::lround((hi - lo) / delta)) + 1;
}

SurfaceResult run_surface(const ConvexifyParams& params, const EnergyDensity& W, const SurfaceSpec& spec,
                          int threads) {
    const int d = params.dirs.dim();
    const Matrix base = spec.base.dim() == d ? spec.base : Matrix(d);
    for (int idx : {spec.row1, spec.col1, spec.row2, spec.col2})
        if (idx < 0 || idx >= d) throw std::invalid_argument("surface: component index out of range");
    if (spec.row1 == spec.row2 && spec.col1 == spec.col2)
        throw std::invalid_argument("surface: the two varying components coincide");

    SurfaceResult out;
    out.n1 = out.n2 = spec.nodes_per_axis();
    const int total = out.n1 * out.n2;
    const double step = (spec.hi - spec.lo) / (out.n1 - 1);
    out.nodes.resize(static_cast<std::size_t>(total));

    const auto start = Clock::now();
    auto work = [&](int worker, int workers, std::exception_ptr& error) {
        try {
            HrocEngine engine(params, HrocOptions{false});
            for (int k = worker; k < total; k += workers) {
                SurfaceNode& node = out.nodes[static_cast<std::size_t>(k)];
                node.s1 = spec.lo + (k % out.n1) * step;
                node.s2 = spec.lo + (k / out.n1) * step;
                Matrix F = base;
                F(spec.row1, spec.col1) = node.s1;
                F(spec.row2, spec.col2) = node.s2;
                const HrocResult r = engine.run(W, F);
                node.W = r.W;
                node.W_rc = r.W_rc;
                node.summary = summarize(r.tree);
                node.W_analytic = W.envelope(F);
                if (node.W_analytic) {
                    node.abs_error = std::abs(node.W_rc - *node.W_analytic);
                    node.rel_error = relative_error(node.W_rc, *node.W_analytic);
                } else {
                    node.abs_error = node.rel_error = kNaN;
                }
            }
        } catch (...) {
            error = std::current_exception();
        }
    };

    const int workers = std::max(1, std::min(threads, total));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    if (workers == 1) {
        work(0, 1, errors[0]);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work, w, workers, std::ref(errors[static_cast<std::size_t>(w)]));
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    out.seconds = seconds_since(start);

    bool analytic = true;
    for (const auto& n : out.nodes) {
        if (!n.W_analytic) {
            analytic = false;
            continue;
        }
        out.max_abs_error = std::max(out.max_abs_error, n.abs_error);
        out.max_rel_error = std::max(out.max_rel_error, n.rel_error);
    }
    if (!analytic) out.max_abs_error = out.max_rel_error = kNaN;
    return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need >= 2 pairs");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ConvergenceResult run_convergence(const EnergyDensity& W, const Matrix& F, const std::vector<int>& Ns, double r,
                                  int k_max, int repetitions) {
    if (repetitions < 1) throw std::invalid_argument("convergence: repetitions must be >= 1");
    ConvergenceResult out;
    const auto analytic = W.envelope(F);
    for (int N : Ns) {
        HrocEngine engine(make_params(F.dim(), N, r, k_max), HrocOptions{false});
        ConvergenceRow row;
        row.N = N;
        const HrocResult warm = engine.run(W, F);
        row.W_rc = warm.W_rc;
        row.summary = summarize(warm.tree);
        row.error = analytic ? std::abs(warm.W_rc - *analytic) : kNaN;
        for (int k = 0; k < repetitions; ++k) {
            const auto start = Clock::now();
            const HrocResult res = engine.run(W, F);
            row.samples.push_back(seconds_since(start));
            if (res.W_rc != row.W_rc) throw std::logic_error("convergence: repeated call changed the result");
        }
        row.median_seconds = median(row.samples);
        out.rows.push_back(std::move(row));
    }
    if (out.rows.size() >= 2) {
        std::vector<double> n, t;
        for (const auto& row : out.rows) {
            n.push_back(row.N);
            t.push_back(row.median_seconds);
        }
        out.time_slope = loglog_slope(n, t);
    } else {
        out.time_slope = kNaN;
    }
    return out;
}

PathResult run_material_path(const ConvexifyParams& params, const EnergyDensity& W, const PathSpec& spec) {
    if (params.dirs.dim() != 2) throw std::invalid_argument("material-path: the biaxial path is two-dimensional");
    if (spec.samples < 3 || !(spec.t1 > spec.t0)) throw std::invalid_argument("material-path: need >= 3 samples and t1 > t0");
    const auto* damage = dynamic_cast<const IncrementalDamageEnergy*>(&W);

    PathResult out;
    HrocEngine engine(params, HrocOptions{false});
    ContinuityCache cache;
    const ContinuityCache::PointId point = 0, rotations = 1;
    const double dt = (spec.t1 - spec.t0) / (spec.samples - 1);
    for (int k = 0; k < spec.samples; ++k) {
        PathRow row;
        row.t = spec.t0 + k * dt;
        const Matrix F = Matrix::diagonal({row.t, row.t});
        const HrocResult r = engine.run(W, F, &cache, point);
        row.W = r.W;
        row.W_rc = r.W_rc;
        row.P11 = r.P(0, 0);
        row.P22 = r.P(1, 1);
        row.summary = summarize(r.tree);
        const RotationalAverage avg = rotational_average(engine, W, F, spec.n_rot, &cache, rotations);
        row.P11_rot = avg.P_rot(0, 0);
        row.P22_rot = avg.P_rot(1, 1);
        row.W_rot = avg.W_avg;
        row.alpha = damage ? damage->updated_alpha(F) : kNaN;
        out.rows.push_back(row);
    }

    const std::size_t n = out.rows.size();
    for (std::size_t k = 0; k < n; ++k) {
        PathRow& row = out.rows[k];
        if (k == 0 || k + 1 == n) {
            row.dW_dt_half = row.dWrot_dt_half = kNaN;
        } else {
            row.dW_dt_half = 0.25 * (out.rows[k + 1].W_rc - out.rows[k - 1].W_rc) / dt;
            row.dWrot_dt_half = 0.25 * (out.rows[k + 1].W_rot - out.rows[k - 1].W_rot) / dt;
            for (double p : {row.P11_rot, row.P22_rot}) {
                out.max_fd_deviation = std::max(out.max_fd_deviation, std::abs(p - row.dW_dt_half));
                out.max_fd_deviation_rot = std::max(out.max_fd_deviation_rot, std::abs(p - row.dWrot_dt_half));
            }
        }
        out.max_abs_P_rot = std::max({out.max_abs_P_rot, std::abs(row.P11_rot), std::abs(row.P22_rot)});
        out.max_rot_asymmetry = std::max(out.max_rot_asymmetry, std::abs(row.P11_rot - row.P22_rot));
    }
    return out;
}

MicrostructureResult run_microstructure(const TreeNode& tree, double epsilon, double separation, int m) {
    MicrostructureResult out;
    out.hroc.tree = tree;
    LaminateField field{&out.hroc.tree, epsilon, separation, m};
    field.validate();
    out.field = project(field);
    out.phases = phase_map(field);
    out.grid_fractions = phase_fractions(field);
    for (const auto& p : leaves(out.hroc.tree).phases) out.tree_fractions.push_back(p.fraction);
    for (std::size_t i = 0; i < out.tree_fractions.size(); ++i)
        out.max_fraction_error =
            std::max(out.max_fraction_error, std::abs(out.grid_fractions[i] - out.tree_fractions[i]));
    const TreeSummary s = summarize(out.hroc.tree);
    if (s.splits == 1) {
        out.split_normal = split_normal(*out.hroc.tree.split);
        out.stripe_normal = stripe_normal(out.phases, m, tree.F.dim());
    }
    return out;
}

MicrostructureResult run_microstructure(const ConvexifyParams& params, const EnergyDensity& W, const Matrix& F,
                                        double epsilon, double separation, int m) {
    HrocResult r = hroc(params, W, F);
    MicrostructureResult out = run_microstructure(r.tree, epsilon, separation, m);
    out.hroc = std::move(r);
    return out;
}

}  // namespace hroc
