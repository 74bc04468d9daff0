#pragma once

// Periodic microstructure reconstruction from a lamination tree.
//
// The laminate coefficient assigns to every x in the unit cell one leaf
// gradient: at a split with normal n and minus fraction lambda, points with
// frac(x.n / eps_l) < 1 - lambda follow the plus child and the rest the minus
// child, where eps_l = eps / separation^l at tree level l. The displacement
// fluctuation u is the periodic, zero-mean L2 projection of the coefficient
// minus its cell average onto gradients of multilinear fields on an m^d grid.

#include "hroc/lamination_tree.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace hroc {

struct LaminateField {
    const TreeNode* tree = nullptr;
    double epsilon = 0.25;
    double separation = 8.0;
    int m = 64;

    void validate() const;
};

/// Unit normal of a split: the b factor of its direction when present,
/// otherwise the dominant row direction of the jump.
Vector split_normal(const Split& s);

struct CoefficientValue {
    Matrix F;
    int leaf = 0;  ///< index into leaves(tree)
};

CoefficientValue coefficient_at(const Vector& x, const TreeNode& tree, double epsilon, double separation = 8.0);

inline Matrix coefficient(const Vector& x, const TreeNode& tree, double epsilon, double separation = 8.0) {
    return coefficient_at(x, tree, epsilon, separation).F;
}

/// Leaf index at each cell centre, cells ordered with axis 0 fastest.
std::vector<int> phase_map(const LaminateField& field);

/// Fraction of cell centres mapped to each leaf of the tree.
std::vector<double> phase_fractions(const LaminateField& field);

/// Unit normal of the stripes in a phase map: dominant eigenvector of the
/// structure tensor of periodic differences of the indicator. d = 2 or 3.
Vector stripe_normal(const std::vector<int>& phases, int m, int dim);

struct ProjectionOptions {
    double tolerance = 1e-8;
    int max_iterations = 20000;
};

struct DisplacementField {
    int m = 0;
    int dim = 0;
    /// Nodal values for the m^d distinct periodic nodes, node-major:
    /// u[node * dim + c]. Node (m, ...) coincides with node (0, ...).
    std::vector<double> u;
    Matrix mean_gradient;         ///< cell average of the coefficient
    double residual = 0.0;        ///< largest relative residual over components
    int iterations = 0;
    double misfit = 0.0;          ///< 1/2 |grad u - (F_pm - mean)|^2 at the solution
    double misfit_at_zero = 0.0;  ///< the same for u = 0
    bool periodic = true;

    int node_count() const;
    /// Value at grid node idx (each entry in [0, m], wrapped periodically).
    double value(const std::vector<int>& idx, int component) const;
    double mean(int component) const;
};

/// Throws std::runtime_error with the reached residual if CG does not converge.
DisplacementField project(const LaminateField& field, const ProjectionOptions& options = {});

/// Relative residual |b - K u| / |b| of a stored solution, recomputed from scratch.
double projection_residual(const LaminateField& field, const DisplacementField& u);

/// Rows x_1..x_d,u_1..u_d for all (m+1)^d nodes including periodic copies.
void write_field_csv(std::ostream& os, const DisplacementField& u);
/// Legacy structured-points file with u as point vectors and the phase map
/// as cell scalars.
void write_field_vtk(std::ostream& os, const DisplacementField& u, const std::vector<int>& phases);

}  // namespace hroc
