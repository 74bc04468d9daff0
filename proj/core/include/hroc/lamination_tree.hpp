#pragma once

// Binary lamination trees and the hierarchical rank-one sequences formed by
// their leaves.
//
// A split node F has two children F+ and F- with
//   F = lambda F- + (1 - lambda) F+,   F- - F+ parallel to the rank-one R,
// i.e. lambda is the volume fraction of the minus phase.

#include "hroc/energy.hpp"
#include "hroc/tensor.hpp"

#include <memory>
#include <vector>

namespace hroc {

struct Split;

struct TreeNode {
    Matrix F;
    int depth = 0;
    std::unique_ptr<Split> split;

    TreeNode() = default;
    explicit TreeNode(Matrix f, int depth = 0) : F(f), depth(depth) {}
    TreeNode(const TreeNode& other);
    TreeNode& operator=(const TreeNode& other);
    TreeNode(TreeNode&&) noexcept = default;
    TreeNode& operator=(TreeNode&&) noexcept = default;
    ~TreeNode();

    bool is_leaf() const { return !split; }

    /// Turns this leaf into a split node. `direction_index` refers to the
    /// direction set the split was found in (-1 if none).
    Split& attach(const Matrix& F_plus, const Matrix& F_minus, double lambda, const Dyad& direction,
                  int direction_index = -1);
};

struct Split {
    TreeNode plus;
    TreeNode minus;
    double lambda = 0.5;  ///< volume fraction of `minus`
    Dyad direction;       ///< unscaled rank-one direction; F- - F+ = s * direction, s > 0
    int direction_index = -1;

    /// The jump F- - F+.
    Matrix jump() const { return minus.F - plus.F; }
};

struct Phase {
    double fraction = 1.0;
    Matrix F;
};

/// Flat (volume fraction, matrix) list with sum of fractions 1.
struct HSequence {
    std::vector<Phase> phases;

    std::size_t size() const { return phases.size(); }
    double total_fraction() const;
    /// sum xi_i F_i
    Matrix center() const;
};

/// Leaves in depth-first order, minus before plus; each fraction is the
/// product of branch fractions along its root path.
HSequence leaves(const TreeNode& root);

/// sum xi_i W(F_i) over the leaves.
double evaluate(const TreeNode& root, const EnergyDensity& W);

struct TreeDerivatives {
    Matrix P;   ///< sum xi_i dW(F_i)
    Tensor4 A;  ///< sum xi_i d^2W(F_i)
};

TreeDerivatives derivatives(const TreeNode& root, const EnergyDensity& W, bool with_hessian = true);

struct TreeSummary {
    int depth = 0;
    std::size_t leaves = 0;
    std::size_t splits = 0;
};

TreeSummary summarize(const TreeNode& root);

/// Verifies the H_M condition with the tree as the witness: every split is a
/// rank-one convex combination of its children and the fractions sum to 1.
bool check_HM(const TreeNode& root, double tol = 1e-10);

/// Searches all merge orders for an H_M witness. Exhaustive, so restricted to
/// M <= 6; larger sequences throw std::invalid_argument.
bool check_HM(const HSequence& seq, double tol = 1e-10);

}  // namespace hroc
