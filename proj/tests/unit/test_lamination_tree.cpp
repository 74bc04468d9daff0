#include "hroc/lamination_tree.hpp"
#include "hroc/tree_io.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace hroc;

namespace {

const Dyad kE11(Vector{1.0, 0.0}, Vector{1.0, 0.0});
const Dyad kE22(Vector{0.0, 1.0}, Vector{0.0, 1.0});

// F = lambda F- + (1 - lambda) F+ with F- - F+ = s R.
void split(TreeNode& node, double lambda, const Dyad& R, double s) {
    const Matrix F_plus = node.F - (lambda * s) * R.matrix();
    const Matrix F_minus = node.F + ((1.0 - lambda) * s) * R.matrix();
    node.attach(F_plus, F_minus, lambda, R);
}

class TableEnergy final : public EnergyDensity {
public:
    std::string name() const override { return "table"; }
    int dim() const override { return 2; }
    double value(const Matrix& F) const override { return F(0, 0) > 0.0 ? 4.0 : 0.0; }
};

}  // namespace

TEST(Leaves, LeafOnly) {
    const TreeNode root(Matrix{{0.2, 0.1}, {0.1, 0.3}});
    const auto seq = leaves(root);
    ASSERT_EQ(seq.size(), 1u);
    EXPECT_EQ(seq.phases[0].fraction, 1.0);
    EXPECT_EQ(seq.phases[0].F, root.F);
}

TEST(Leaves, FirstOrderLaminate) {
    TreeNode root(Matrix(2));
    split(root, 0.25, kE11, 1.0);
    const auto seq = leaves(root);
    ASSERT_EQ(seq.size(), 2u);
    EXPECT_EQ(seq.phases[0].fraction, 0.25);
    EXPECT_EQ(seq.phases[0].F, root.split->minus.F);
    EXPECT_EQ(seq.phases[1].fraction, 0.75);
    EXPECT_EQ(seq.phases[1].F, root.split->plus.F);
}

TEST(Leaves, SecondOrderFractions) {
    TreeNode root(Matrix(2));
    split(root, 0.25, kE11, 1.0);
    split(root.split->plus, 0.5, kE22, 1.0);
    const auto seq = leaves(root);
    ASSERT_EQ(seq.size(), 3u);
    EXPECT_DOUBLE_EQ(seq.phases[0].fraction, 0.25);
    EXPECT_DOUBLE_EQ(seq.phases[1].fraction, 0.375);
    EXPECT_DOUBLE_EQ(seq.phases[2].fraction, 0.375);
    EXPECT_EQ(root.split->plus.depth, 1);
    EXPECT_EQ(root.split->plus.split->minus.depth, 2);
}

TEST(Evaluate, Examples) {
    const MultiwellEnergy mw;
    const TreeNode leaf(Matrix{{0.2, 0.1}, {0.1, 0.3}});
    EXPECT_EQ(evaluate(leaf, mw), mw.value(leaf.F));

    TreeNode wells(Matrix(2));
    split(wells, 0.5, kE11, 2.0);
    EXPECT_EQ(frobenius_norm(wells.split->plus.F), 1.0);
    EXPECT_EQ(evaluate(wells, mw), 0.0);

    TreeNode t(Matrix(2));
    t.attach(Matrix(2), Matrix::diagonal({1.0, 0.0}), 0.25, kE11);
    EXPECT_DOUBLE_EQ(evaluate(t, TableEnergy{}), 1.0);
}

TEST(Evaluate, ChildSwapInvariance) {
    const MultiwellEnergy mw;
    TreeNode a(Matrix{{0.1, 0.2}, {0.0, -0.3}});
    split(a, 0.3, kE11, 0.7);
    TreeNode b(a.F);
    b.attach(a.split->minus.F, a.split->plus.F, 0.7, kE11);
    EXPECT_NEAR(evaluate(a, mw), evaluate(b, mw), 1e-15);
}

TEST(Derivatives, LeafOnly) {
    const MultiwellEnergy mw;
    const Matrix F{{1.0, 0.5}, {-0.2, 0.8}};
    const TreeNode leaf(F);
    const auto d = derivatives(leaf, mw);
    const double n2 = F.ddot(F);
    EXPECT_LT((d.P - 4.0 * (n2 - 1.0) * F).max_abs(), 1e-14);
    EXPECT_EQ(d.P, mw.gradient(F));
    const Tensor4 H = mw.hessian(F);
    for (std::size_t k = 0; k < 16; ++k) EXPECT_EQ(d.A.flat()[k], H.flat()[k]);
}

TEST(Derivatives, AffineSlopeIsExact) {
    const Matrix B{{0.5, -1.5}, {2.0, 0.25}};
    const AffineEnergy L(B, 3.0);
    TreeNode root(Matrix{{0.3, 0.1}, {0.0, 0.4}});
    split(root, 0.3, kE11, 0.9);
    split(root.split->minus, 0.6, kE22, 0.4);
    split(root.split->plus, 0.2, Dyad(Vector{1.0, 1.0}, Vector{1.0, -1.0}), 0.3);
    const auto d = derivatives(root, L);
    EXPECT_LT((d.P - B).max_abs(), 1e-15);
    EXPECT_EQ(d.A.max_abs(), 0.0);
}

TEST(CheckHM, SequenceExamples) {
    const Matrix F{{0.2, 0.1}, {0.1, 0.3}};
    EXPECT_TRUE(check_HM(HSequence{{{1.0, F}}}));
    EXPECT_TRUE(check_HM(HSequence{{{0.4, F}, {0.6, F + kE11.matrix()}}}));
    EXPECT_FALSE(check_HM(HSequence{{{0.5, F}, {0.5, F + Matrix::identity(2)}}}));
    EXPECT_FALSE(check_HM(HSequence{{{0.4, F}, {0.4, F + kE11.matrix()}}}));
}

TEST(CheckHM, RandomTreesAndConservation) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.05, 0.95), s(-1.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        TreeNode root(Matrix{{s(rng), s(rng)}, {s(rng), s(rng)}});
        std::vector<TreeNode*> open{&root};
        for (int k = 0; k < 4; ++k) {
            TreeNode* leaf = open[static_cast<std::size_t>(rng() % open.size())];
            if (!leaf->is_leaf()) continue;
            const Dyad R(Vector{s(rng), s(rng)}, Vector{s(rng), s(rng)});
            split(*leaf, u(rng), R, s(rng));
            open.push_back(&leaf->split->plus);
            open.push_back(&leaf->split->minus);
        }
        const auto seq = leaves(root);
        EXPECT_NEAR(seq.total_fraction(), 1.0, 1e-12);
        EXPECT_LT((seq.center() - root.F).max_abs(), 1e-10 * (1.0 + frobenius_norm(root.F)));
        EXPECT_TRUE(check_HM(root));
        if (seq.size() <= 6) {
            EXPECT_TRUE(check_HM(seq));
        }
    }
}

TEST(CheckHM, ThreePhaseNeedsHierarchy) {
    // Rank-one connected pairwise only through the right merge order.
    const Matrix F(2);
    TreeNode root(F);
    split(root, 0.5, kE11, 1.0);
    split(root.split->minus, 0.5, kE22, 1.0);
    auto seq = leaves(root);
    EXPECT_TRUE(check_HM(seq));
    std::swap(seq.phases[0], seq.phases[2]);
    EXPECT_TRUE(check_HM(seq));
    seq.phases[0].F = seq.phases[0].F + Matrix::identity(2) * 0.1;
    EXPECT_FALSE(check_HM(seq));
}

TEST(CheckHM, TooLargeThrows) {
    HSequence seq;
    for (int i = 0; i < 7; ++i) seq.phases.push_back({1.0 / 7, Matrix(2)});
    EXPECT_THROW(check_HM(seq), std::invalid_argument);
}

TEST(TreeJson, RoundTrip) {
    TreeNode root(Matrix{{0.2, 0.1}, {0.1, 0.3}});
    split(root, 0.25, kE11, 1.0);
    split(root.split->plus, 0.5, kE22, 0.5);
    const TreeNode back = tree_from_json(tree_to_json(root, 2));
    const auto a = leaves(root), b = leaves(back);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a.phases[i].fraction, b.phases[i].fraction);
        EXPECT_EQ(a.phases[i].F, b.phases[i].F);
    }
    EXPECT_EQ(summarize(back).depth, 2);
    EXPECT_THROW(tree_from_json("{\"F\": 3}"), std::invalid_argument);
}

TEST(TreeNode, CopyIsDeep) {
    TreeNode root(Matrix(2));
    split(root, 0.5, kE11, 1.0);
    TreeNode copy = root;
    split(copy.split->plus, 0.5, kE22, 1.0);
    EXPECT_TRUE(root.split->plus.is_leaf());
    EXPECT_EQ(summarize(copy).leaves, 3u);
    EXPECT_EQ(summarize(root).splits, 1u);
}
