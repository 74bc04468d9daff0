#pragma once

// Hierarchical rank-one sequence convexification.
//
// Starting from a single-leaf tree at F, every leaf is convexified along all
// rank-one lines of the direction set; the line whose envelope lowers the
// whole-tree energy the most splits the leaf into a simple laminate. Leaves
// are processed breadth first until no line improves or k_max is reached.
// The result is an upper bound of the rank-one convex envelope together with
// the H-sequence that attains it.

#include "hroc/convexify1d.hpp"
#include "hroc/directions.hpp"
#include "hroc/energy.hpp"
#include "hroc/lamination_tree.hpp"

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

namespace hroc {

struct LaminateCandidate {
    Matrix F_plus;
    Matrix F_minus;
    Dyad R;
    int direction_index = -1;
    double lambda = 0.0;  ///< volume fraction of F_minus
    double value = 0.0;   ///< whole-tree energy with this split applied
};

/// Remembers, per material point and tree level, the direction of the last
/// accepted split so that successive calls along a load path keep their
/// laminate orientation unless another one is clearly better.
class ContinuityCache {
public:
    using PointId = std::uint64_t;

    std::optional<int> direction(PointId point, int level) const;
    void store(PointId point, int level, int direction_index);
    bool contains(PointId point) const;
    std::size_t size() const;
    void clear();

private:
    mutable std::mutex mutex_;
    std::unordered_map<PointId, std::map<int, int>> entries_;
};

struct HrocOptions {
    bool with_hessian = true;
    /// Relative decrease a split must achieve: 1e-10 (1 + |W_ref|).
    double split_tolerance = 1e-10;
    /// Extra relative decrease needed to abandon a cached direction.
    double continuity_tolerance = 1e-8;
};

struct HrocResult {
    TreeNode tree;
    double W = 0.0;     ///< unrelaxed W(F)
    double W_rc = 0.0;  ///< sum xi_i W(F_i) over the leaves
    Matrix P;
    Tensor4 A;
    HSequence sequence;
};

/// Per-worker engine owning the line buffers. Not thread-safe; use one per
/// thread. The energy is only read.
class HrocEngine {
public:
    explicit HrocEngine(ConvexifyParams params, HrocOptions options = {});

    const ConvexifyParams& params() const { return params_; }
    const HrocOptions& options() const { return options_; }

    /// Best lamination of `leaf` (a leaf of `root` carrying volume fraction
    /// `leaf_fraction`). `preferred` is a direction index that other
    /// directions must beat by the continuity tolerance.
    std::optional<LaminateCandidate> kernel(const TreeNode& root, const TreeNode& leaf, double leaf_fraction,
                                            const EnergyDensity& W, std::optional<int> preferred = std::nullopt);

    HrocResult run(const EnergyDensity& W, const Matrix& F, ContinuityCache* cache = nullptr,
                   ContinuityCache::PointId point = 0);

private:
    ConvexifyParams params_;
    HrocOptions options_;
    std::vector<double> x_;
    std::vector<double> w_;
    ConvexHull1D hull_;
};

/// Kernel call on a tree whose leaf at F_eval is located by value.
/// Throws std::invalid_argument if F_eval is not a leaf of root.
std::optional<LaminateCandidate> hroc_kernel(const TreeNode& root, const ConvexifyParams& params,
                                             const EnergyDensity& W, const Matrix& F_eval);

HrocResult hroc(const ConvexifyParams& params, const EnergyDensity& W, const Matrix& F,
                ContinuityCache* cache = nullptr, ContinuityCache::PointId point = 0);

struct RotationalAverage {
    Matrix P_rot;
    double W_avg = 0.0;
    std::vector<double> angles;
};

/// Cache key of rotation j of a material point in rotational_average().
inline ContinuityCache::PointId rotation_point_id(ContinuityCache::PointId point, int j) {
    return (point << 16) | static_cast<ContinuityCache::PointId>(j);
}

/// Mean of Q^T P(Q F) over n_rot rotations Q by j pi / (2 n_rot). d = 2 only.
RotationalAverage rotational_average(HrocEngine& engine, const EnergyDensity& W, const Matrix& F, int n_rot,
                                     ContinuityCache* cache = nullptr, ContinuityCache::PointId point = 0);

}  // namespace hroc
