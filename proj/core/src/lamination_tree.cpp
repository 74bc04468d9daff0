#include "hroc/lamination_tree.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hroc {

TreeNode::TreeNode(const TreeNode& other)
    : F(other.F), depth(other.depth), split(other.split ? std::make_unique<Split>(*other.split) : nullptr) {}

TreeNode& TreeNode::operator=(const TreeNode& other) {
    if (this != &other) {
        F = other.F;
        depth = other.depth;
        split = other.split ? std::make_unique<Split>(*other.split) : nullptr;
    }
    return *this;
}

TreeNode::~TreeNode() = default;

Split& TreeNode::attach(const Matrix& F_plus, const Matrix& F_minus, double lambda, const Dyad& direction,
                        int direction_index) {
    if (split) throw std::logic_error("TreeNode::attach: node already split");
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("TreeNode::attach: lambda outside [0, 1]");
    split = std::make_unique<Split>();
    split->plus = TreeNode(F_plus, depth + 1);
    split->minus = TreeNode(F_minus, depth + 1);
    split->lambda = lambda;
    split->direction = direction;
    split->direction_index = direction_index;
    return *split;
}

double HSequence::total_fraction() const {
    double s = 0.0;
    for (const auto& p : phases) s += p.fraction;
    return s;
}

Matrix HSequence::center() const {
    if (phases.empty()) throw std::logic_error("HSequence::center: empty sequence");
    Matrix c(phases.front().F.dim());
    for (const auto& p : phases) c.axpy(p.fraction, p.F);
    return c;
}

namespace {

template <class Visit>
void for_each_leaf(const TreeNode& node, double fraction, Visit&& visit) {
    if (node.is_leaf()) {
        visit(fraction, node.F);
        return;
    }
    const Split& s = *node.split;
    for_each_leaf(s.minus, fraction * s.lambda, visit);
    for_each_leaf(s.plus, fraction * (1.0 - s.lambda), visit);
}

}  // namespace

HSequence leaves(const TreeNode& root) {
    HSequence seq;
    for_each_leaf(root, 1.0, [&](double xi, const Matrix& F) { seq.phases.push_back({xi, F}); });
    return seq;
}

double evaluate(const TreeNode& root, const EnergyDensity& W) {
    double sum = 0.0;
    for_each_leaf(root, 1.0, [&](double xi, const Matrix& F) {
        if (xi == 0.0) return;
        const double w = W.value(F);
        if (!std::isfinite(w)) throw DomainError("evaluate: leaf outside the admissible set");
        sum += xi * w;
    });
    return sum;
}

TreeDerivatives derivatives(const TreeNode& root, const EnergyDensity& W, bool with_hessian) {
    const int d = root.F.dim();
    TreeDerivatives out{Matrix(d), Tensor4(d)};
    for_each_leaf(root, 1.0, [&](double xi, const Matrix& F) {
        if (xi == 0.0) return;
        out.P.axpy(xi, W.gradient(F));
        if (with_hessian) out.A.axpy(xi, W.hessian(F));
    });
    return out;
}

TreeSummary summarize(const TreeNode& root) {
    TreeSummary s;
    auto walk = [&](auto&& self, const TreeNode& n) -> void {
        s.depth = std::max(s.depth, n.depth - root.depth);
        if (n.is_leaf()) {
            ++s.leaves;
            return;
        }
        ++s.splits;
        self(self, n.split->minus);
        self(self, n.split->plus);
    };
    walk(walk, root);
    return s;
}

namespace {

bool valid_split(const TreeNode& node, double tol) {
    const Split& s = *node.split;
    if (!(s.lambda >= 0.0 && s.lambda <= 1.0)) return false;
    if (s.minus.depth != node.depth + 1 || s.plus.depth != node.depth + 1) return false;
    Matrix mix = s.lambda * s.minus.F;
    mix.axpy(1.0 - s.lambda, s.plus.F);
    const double scale = 1.0 + frobenius_norm(node.F);
    if (frobenius_norm(mix - node.F) > tol * scale) return false;
    const Matrix jump = s.jump();
    if (!is_rank_one(jump, std::max(tol, kRankTolerance))) return false;
    if (s.direction.dim() != 0 && !is_parallel(jump, s.direction.matrix(), std::max(tol, kRankTolerance)))
        return false;
    return (s.minus.is_leaf() || valid_split(s.minus, tol)) && (s.plus.is_leaf() || valid_split(s.plus, tol));
}

}  // namespace

bool check_HM(const TreeNode& root, double tol) {
    if (root.is_leaf()) return true;
    if (!valid_split(root, tol)) return false;
    const HSequence seq = leaves(root);
    if (std::abs(seq.total_fraction() - 1.0) > std::max(tol, 1e-12)) return false;
    return frobenius_norm(seq.center() - root.F) <= tol * (1.0 + frobenius_norm(root.F));
}

namespace {

bool hm_search(std::vector<Phase>& phases, double tol) {
    if (phases.size() == 1) return true;
    for (std::size_t i = 0; i < phases.size(); ++i) {
        for (std::size_t j = i + 1; j < phases.size(); ++j) {
            if (!is_rank_one(phases[i].F - phases[j].F, tol)) continue;
            const double zeta = phases[i].fraction + phases[j].fraction;
            Phase merged{zeta, Matrix(phases[i].F.dim())};
            if (zeta > 0.0) {
                merged.F.axpy(phases[i].fraction / zeta, phases[i].F);
                merged.F.axpy(phases[j].fraction / zeta, phases[j].F);
            } else {
                merged.F = phases[i].F;
            }
            std::vector<Phase> reduced;
            reduced.reserve(phases.size() - 1);
            reduced.push_back(merged);
            for (std::size_t k = 0; k < phases.size(); ++k)
                if (k != i && k != j) reduced.push_back(phases[k]);
            if (hm_search(reduced, tol)) return true;
        }
    }
    return false;
}

}  // namespace

bool check_HM(const HSequence& seq, double tol) {
    if (seq.phases.empty()) throw std::invalid_argument("check_HM: empty sequence");
    if (seq.size() > 6) throw std::invalid_argument("check_HM: exhaustive search limited to M <= 6");
    for (const auto& p : seq.phases)
        if (p.fraction < 0.0 || p.fraction > 1.0) return false;
    if (std::abs(seq.total_fraction() - 1.0) > std::max(tol, 1e-12)) return false;
    std::vector<Phase> phases = seq.phases;
    return hm_search(phases, tol);
}

}  // namespace hroc
