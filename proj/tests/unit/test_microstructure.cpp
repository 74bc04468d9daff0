#include "hroc/experiments.hpp"
#include "hroc/microstructure.hpp"
#include "hroc/registry.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace hroc;

namespace {

const Dyad kE11(Vector{1.0, 0.0}, Vector{1.0, 0.0});

TreeNode laminate(const Matrix& F, double lambda, const Dyad& R, double s) {
    TreeNode root(F);
    root.attach(F - (lambda * s) * R.matrix(), F + ((1.0 - lambda) * s) * R.matrix(), lambda, R);
    return root;
}

// Fraction of cell centres carrying each leaf, counted here without
// phase_map().
std::vector<double> counted_fractions(const TreeNode& tree, double eps, int m) {
    const auto seq = leaves(tree);
    std::vector<double> count(seq.size(), 0.0);
    const int d = tree.F.dim();
    const int cells = d == 2 ? m * m : m * m * m;
    for (int c = 0; c < cells; ++c) {
        Vector x(d);
        int rest = c;
        for (int k = 0; k < d; ++k) {
            x[k] = (rest % m + 0.5) / m;
            rest /= m;
        }
        const Matrix G = coefficient(x, tree, eps);
        for (std::size_t i = 0; i < seq.size(); ++i)
            if (G == seq.phases[i].F) {
                count[i] += 1.0;
                break;
            }
    }
    for (double& v : count) v /= cells;
    return count;
}

}  // namespace

TEST(Coefficient, LeafOnlyIsConstant) {
    const TreeNode leaf(Matrix{{1.1, 0.2}, {0.0, 0.9}});
    for (double x : {0.0, 0.13, 0.5, 0.99})
        for (double y : {0.0, 0.77}) EXPECT_EQ(coefficient(Vector{x, y}, leaf, 0.25), leaf.F);
}

TEST(Coefficient, AlternatingStripes) {
    const Matrix F{{0.2, 0.1}, {0.1, 0.3}};
    const TreeNode t = laminate(F, 0.5, kE11, 1.0);
    const Matrix lo = F - 0.5 * kE11.matrix(), hi = F + 0.5 * kE11.matrix();
    for (double y : {0.1, 0.6}) {
        EXPECT_EQ(coefficient(Vector{0.1, y}, t, 0.5), lo);
        EXPECT_EQ(coefficient(Vector{0.3, y}, t, 0.5), hi);
        EXPECT_EQ(coefficient(Vector{0.6, y}, t, 0.5), lo);
        EXPECT_EQ(coefficient(Vector{0.9, y}, t, 0.5), hi);
    }
}

TEST(Coefficient, ValuesAreLeaves) {
    const auto W = make_energy("ksd");
    const auto r = hroc::hroc(make_params(2, 500, 1.0), *W, Matrix{{0.2, 0.1}, {0.1, 0.3}});
    const auto seq = leaves(r.tree);
    Matrix mean(2);
    const int m = 128;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            const auto c = coefficient_at(Vector{(i + 0.5) / m, (j + 0.5) / m}, r.tree, 0.25);
            ASSERT_GE(c.leaf, 0);
            ASSERT_LT(c.leaf, static_cast<int>(seq.size()));
            EXPECT_LE((c.F - seq.phases[static_cast<std::size_t>(c.leaf)].F).max_abs(), 1e-14);
            mean += c.F;
        }
    mean *= 1.0 / (m * m);
    EXPECT_LT((mean - r.tree.F).max_abs(), 0.3);
}

TEST(PhaseFractions, MatchTreeAndCounting) {
    for (double lambda : {0.25, 0.4, 0.5, 0.71}) {
        for (int m : {16, 32, 64}) {
            TreeNode t = laminate(Matrix(2), lambda, Dyad(Vector{1.0, -1.0}, Vector{0.0, 1.0}), 1.0);
            const LaminateField field{&t, 0.25, 8.0, m};
            const auto grid = phase_fractions(field);
            const auto ref = counted_fractions(t, 0.25, m);
            const auto seq = leaves(t);
            ASSERT_EQ(grid.size(), seq.size());
            for (std::size_t i = 0; i < grid.size(); ++i) {
                EXPECT_DOUBLE_EQ(grid[i], ref[i]);
                EXPECT_LE(std::abs(grid[i] - seq.phases[i].fraction), 2.0 / m);
            }
        }
    }
}

TEST(Project, LeafOnlyGivesZeroField) {
    const TreeNode leaf(Matrix{{1.1, 0.2}, {0.0, 0.9}});
    const auto u = project(LaminateField{&leaf, 0.25, 8.0, 16});
    for (double v : u.u) EXPECT_EQ(v, 0.0);
    EXPECT_EQ(u.mean_gradient, leaf.F);
    EXPECT_EQ(u.misfit, 0.0);
}

TEST(Project, AlignedLaminateIsExactSawtooth) {
    // eps = 0.25 and lambda = 0.5 put every interface on a node of the 32 grid.
    const double lambda = 0.5, s = 0.8;
    const TreeNode t = laminate(Matrix(2), lambda, kE11, s);
    const int m = 32;
    const auto u = project(LaminateField{&t, 0.25, 8.0, m});
    EXPECT_LT(u.misfit, 1e-14 * u.misfit_at_zero);
    EXPECT_LE(u.residual, 1e-8);
    // u_1 rises with slope F+ - mean = -lambda s on the plus part of each period
    // and falls back on the minus part; the plus part starts at every period.
    std::vector<double> ref(static_cast<std::size_t>(m + 1));
    for (int i = 0; i <= m; ++i) {
        const double x = static_cast<double>(i) / m;
        const double f = std::fmod(x, 0.25) / 0.25;
        ref[static_cast<std::size_t>(i)] =
            0.25 * (f < 1.0 - lambda ? -lambda * s * f : -lambda * s * (1.0 - lambda) + (1.0 - lambda) * s * (f - (1.0 - lambda)));
    }
    double shift = 0.0;
    for (int i = 0; i < m; ++i) shift += ref[static_cast<std::size_t>(i)] - u.value({i, 0}, 0);
    shift /= m;
    for (int i = 0; i <= m; ++i)
        for (int j : {0, 5, m}) {
            EXPECT_NEAR(u.value({i, j}, 0) + shift, ref[static_cast<std::size_t>(i)], 1e-9);
            EXPECT_NEAR(u.value({i, j}, 1), 0.0, 1e-12);
        }
}

TEST(Project, MisfitDecreasesUnderRefinement) {
    const TreeNode t = laminate(Matrix(2), 0.37, Dyad(Vector{1.0, 0.0}, Vector{1.0, 1.0}), 1.0);
    double previous = INFINITY;
    for (int m : {16, 32, 64}) {
        const auto u = project(LaminateField{&t, 0.3, 8.0, m});
        EXPECT_LT(u.misfit, previous);
        EXPECT_LE(u.misfit, u.misfit_at_zero);
        previous = u.misfit;
    }
}

TEST(Project, ResidualAndEnergyInequality) {
    const auto W = make_energy("damage-nh1");
    const auto r = hroc::hroc(make_params(2, 1000, 1.0), *W, Matrix::diagonal({1.3, 1.3}));
    ASSERT_FALSE(r.tree.is_leaf());
    const LaminateField field{&r.tree, 0.25, 8.0, 48};
    const auto u = project(field);
    EXPECT_LE(projection_residual(field, u), 1e-8);
    EXPECT_LE(u.misfit, u.misfit_at_zero);
    for (int c = 0; c < 2; ++c) EXPECT_NEAR(u.mean(c), 0.0, 1e-12);
    // Periodic copies coincide.
    for (int i = 0; i <= 48; i += 7) EXPECT_EQ(u.value({i, 0}, 0), u.value({i, 48}, 0));
}

TEST(Project, ThreeDimensional) {
    TreeNode t = laminate(Matrix(3), 0.5, Dyad(Vector{0.0, 0.0, 1.0}, Vector{0.0, 0.0, 1.0}), 1.0);
    const LaminateField field{&t, 0.5, 8.0, 8};
    const auto u = project(field);
    EXPECT_LE(projection_residual(field, u), 1e-8);
    EXPECT_LT(u.misfit, 1e-14 * u.misfit_at_zero);
    const Vector n = stripe_normal(phase_map(field), 8, 3);
    EXPECT_NEAR(std::abs(n[2]), 1.0, 1e-12);
}

TEST(Project, ValidationAndFailure) {
    const TreeNode t = laminate(Matrix(2), 0.5, kE11, 1.0);
    EXPECT_THROW(project(LaminateField{&t, 0.0, 8.0, 16}), std::invalid_argument);
    EXPECT_THROW(project(LaminateField{&t, 0.25, 8.0, 2}), std::invalid_argument);
    EXPECT_THROW(project(LaminateField{&t, 0.25, 8.0, 64}, ProjectionOptions{1e-8, 1}), std::runtime_error);
}

TEST(StripeNormal, MatchesSplitNormal) {
    const std::vector<Dyad> dirs{kE11, Dyad(Vector{1.0, 1.0}, Vector{0.0, 1.0}), Dyad(Vector{1.0, -1.0}, Vector{1.0, 1.0})};
    for (const auto& R : dirs) {
        const TreeNode t = laminate(Matrix(2), 0.4, R, 1.0);
        const Vector n = split_normal(*t.split);
        const Vector s = stripe_normal(phase_map(LaminateField{&t, 0.25, 8.0, 128}), 128, 2);
        EXPECT_NEAR(std::abs(n.dot(s)), 1.0, 1e-3) << R.b()[0] << "," << R.b()[1];
    }
}

TEST(Microstructure, FirstOrderDamageLaminate) {
    const auto W = make_energy("damage-nh1");
    const auto r = run_microstructure(make_params(2, 2000, 1.0), *W, Matrix::diagonal({1.24, 1.24}), 0.25, 8.0, 64);
    EXPECT_GE(summarize(r.hroc.tree).splits, 1u);
    EXPECT_LE(r.max_fraction_error, 2.0 / 64);
    EXPECT_LE(r.field.residual, 1e-8);
    std::vector<bool> seen(r.tree_fractions.size(), false);
    for (int p : r.phases) seen[static_cast<std::size_t>(p)] = true;
    for (std::size_t i = 0; i < seen.size(); ++i) EXPECT_TRUE(seen[i]) << "leaf " << i << " missing from the grid";
}

TEST(Microstructure, ConvexRegimeHasNoFluctuation) {
    const auto W = make_energy("damage-nh1");
    const auto r = run_microstructure(make_params(2, 1000, 1.0), *W, Matrix::diagonal({1.05, 1.05}), 0.25, 8.0, 16);
    EXPECT_TRUE(r.hroc.tree.is_leaf());
    for (double v : r.field.u) EXPECT_EQ(v, 0.0);
}

TEST(FieldOutput, CsvAndVtkShapes) {
    const TreeNode t = laminate(Matrix(2), 0.5, kE11, 1.0);
    const LaminateField field{&t, 0.25, 8.0, 8};
    const auto u = project(field);
    std::ostringstream csv, vtk;
    write_field_csv(csv, u);
    write_field_vtk(vtk, u, phase_map(field));
    std::istringstream in(csv.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "x1,x2,u1,u2");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    EXPECT_EQ(rows, 81);
    EXPECT_NE(vtk.str().find("VECTORS u double"), std::string::npos);
    EXPECT_NE(vtk.str().find("CELL_DATA 64"), std::string::npos);
}
