#pragma once

// Experiment drivers shared by the command-line tool, the acceptance suite
// and the benchmarks. They return plain records; serialisation lives in the
// harness.

#include "hroc/hroc.hpp"
#include "hroc/microstructure.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hroc {

/// Library version string baked in at build time.
const char* version();

/// Absolute error, and the relative one where the reference is nonzero.
/// At a zero reference the relative error falls back to the absolute error.
double relative_error(double value, double reference);

struct PointResult {
    Matrix F;
    double W = 0.0;
    double W_rc = 0.0;
    std::optional<double> W_analytic;
    double abs_error = 0.0;  ///< NaN without an analytic envelope
    double rel_error = 0.0;
    Matrix P;
    Tensor4 A;
    TreeSummary summary;
    std::string tree_json;
    double seconds = 0.0;
};

PointResult run_point(HrocEngine& engine, const EnergyDensity& W, const Matrix& F);

struct SurfaceSpec {
    Matrix base;                    ///< fixed components; zero matrix if empty
    int row1 = 0, col1 = 0;         ///< first varying component
    int row2 = 1, col2 = 1;         ///< second varying component
    double lo = -1.0, hi = 1.0;     ///< extent of both axes
    double delta = 0.05;            ///< grid step

    int nodes_per_axis() const;
};

struct SurfaceNode {
    double s1 = 0.0, s2 = 0.0;
    double W = 0.0, W_rc = 0.0;
    std::optional<double> W_analytic;
    double abs_error = 0.0, rel_error = 0.0;
    TreeSummary summary;
};

struct SurfaceResult {
    int n1 = 0, n2 = 0;
    std::vector<SurfaceNode> nodes;  ///< first axis fastest
    double max_abs_error = 0.0;      ///< NaN without analytic envelope
    double max_rel_error = 0.0;
    double seconds = 0.0;
};

/// Nodes are split across `threads` workers by index; output is independent
/// of the thread count.
SurfaceResult run_surface(const ConvexifyParams& params, const EnergyDensity& W, const SurfaceSpec& spec,
                          int threads = 1);

struct ConvergenceRow {
    int N = 0;
    double W_rc = 0.0;
    double error = 0.0;           ///< |W_rc - analytic|, NaN without analytic envelope
    double median_seconds = 0.0;
    std::vector<double> samples;  ///< timed repetitions
    TreeSummary summary;
};

struct ConvergenceResult {
    std::vector<ConvergenceRow> rows;
    double time_slope = 0.0;  ///< least-squares slope of log t against log N
};

/// One warm-up call, then `repetitions` timed calls per N.
ConvergenceResult run_convergence(const EnergyDensity& W, const Matrix& F, const std::vector<int>& Ns, double r,
                                  int k_max, int repetitions = 5);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct PathSpec {
    double t0 = 1.0;
    double t1 = 2.0;
    int samples = 101;
    int n_rot = 16;
};

struct PathRow {
    double t = 0.0;
    double W = 0.0;
    double W_rc = 0.0;
    double P11 = 0.0, P22 = 0.0;
    double P11_rot = 0.0, P22_rot = 0.0;
    double W_rot = 0.0;
    double dW_dt_half = 0.0;     ///< half the central difference of W_rc(t); NaN at the ends
    double dWrot_dt_half = 0.0;  ///< the same for the rotation-averaged energy
    double alpha = 0.0;       ///< internal-variable update at F, NaN if not a damage model
    TreeSummary summary;
};

struct PathResult {
    std::vector<PathRow> rows;
    double max_abs_P_rot = 0.0;
    double max_rot_asymmetry = 0.0;  ///< max |P11_rot - P22_rot|
    double max_fd_deviation = 0.0;   ///< max |P_ii_rot - dW/dt / 2| over interior samples
    double max_fd_deviation_rot = 0.0;  ///< the same against the averaged energy
};

/// Biaxial path F = diag(t, t) in d = 2, evaluated sequentially with a
/// continuity cache shared along the path.
PathResult run_material_path(const ConvexifyParams& params, const EnergyDensity& W, const PathSpec& spec);

struct MicrostructureResult {
    HrocResult hroc;
    DisplacementField field;
    std::vector<int> phases;
    std::vector<double> grid_fractions;
    std::vector<double> tree_fractions;
    double max_fraction_error = 0.0;
    std::optional<Vector> stripe_normal;  ///< set for first-order laminates
    std::optional<Vector> split_normal;
};

MicrostructureResult run_microstructure(const ConvexifyParams& params, const EnergyDensity& W, const Matrix& F,
                                        double epsilon, double separation, int m);

/// Same driver on a given tree.
MicrostructureResult run_microstructure(const TreeNode& tree, double epsilon, double separation, int m);

}  // namespace hroc
