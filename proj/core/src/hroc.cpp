#include "hroc/hroc.hpp"

#include <cmath>
#include <deque>
#include <numbers>
#include <stdexcept>

namespace hroc {

// ---------------------------------------------------------------------------
// ContinuityCache

std::optional<int> ContinuityCache::direction(PointId point, int level) const {
    std::lock_guard lock(mutex_);
    const auto it = entries_.find(point);
    if (it == entries_.end()) return std::nullopt;
    const auto jt = it->second.find(level);
    if (jt == it->second.end()) return std::nullopt;
    return jt->second;
}

void ContinuityCache::store(PointId point, int level, int direction_index) {
    std::lock_guard lock(mutex_);
    entries_[point][level] = direction_index;
}

bool ContinuityCache::contains(PointId point) const {
    std::lock_guard lock(mutex_);
    return entries_.count(point) != 0;
}

std::size_t ContinuityCache::size() const {
    std::lock_guard lock(mutex_);
    return entries_.size();
}

void ContinuityCache::clear() {
    std::lock_guard lock(mutex_);
    entries_.clear();
}

// ---------------------------------------------------------------------------
// HrocEngine

HrocEngine::HrocEngine(ConvexifyParams params, HrocOptions options)
    : params_(std::move(params)), options_(options) {
    params_.validate();
    x_.resize(static_cast<std::size_t>(params_.N));
    w_.resize(static_cast<std::size_t>(params_.N));
    hull_.y.reserve(static_cast<std::size_t>(params_.N));
    hull_.c.reserve(static_cast<std::size_t>(params_.N));
}

std::optional<LaminateCandidate> HrocEngine::kernel(const TreeNode& root, const TreeNode& leaf,
                                                    double leaf_fraction, const EnergyDensity& W,
                                                    std::optional<int> preferred) {
    if (!leaf.is_leaf()) throw std::invalid_argument("hroc kernel: node is already split");
    const double W_ref = evaluate(root, W);
    const double W_leaf = W.value(leaf.F);
    if (!std::isfinite(W_leaf)) throw DomainError("hroc kernel: leaf outside the admissible set");

    const Matrix& F = leaf.F;
    const std::size_t n = static_cast<std::size_t>(params_.N);

    std::optional<LaminateCandidate> best;
    double best_local = W_leaf;  // envelope value at F of the current best line
    double threshold = W_leaf;   // a line must get strictly below this to win

    auto try_direction = [&](int k) {
        const Dyad& dir = params_.dirs[static_cast<std::size_t>(k)];
        const Matrix& R = dir.matrix();
        const auto sampling = scale_direction(R, params_, root.F, F);
        if (!sampling) return false;

        for (std::size_t idx = 0; idx < n; ++idx) {
            const long i = sampling->i_min + static_cast<long>(idx);
            x_[idx] = static_cast<double>(i);
            if (i == 0) {
                w_[idx] = W_leaf;
                continue;
            }
            Matrix G = F;
            G.axpy(static_cast<double>(i) * sampling->delta, R);
            w_[idx] = W.value(G);
        }
        convexify_into(SampledLine{x_, w_}, hull_);
        const EnvelopePoint env = envelope_at(hull_, 0.0);
        if (env.on_support() || !(env.value < threshold)) return false;

        const double s_plus = hull_.y[env.left] * sampling->delta;
        const double s_minus = hull_.y[env.right] * sampling->delta;
        LaminateCandidate c;
        c.F_plus = F;
        c.F_plus.axpy(s_plus, R);
        c.F_minus = F;
        c.F_minus.axpy(s_minus, R);
        c.R = dir;
        c.direction_index = k;
        c.lambda = 1.0 - env.lambda;
        c.value = W_ref - leaf_fraction * (W_leaf - env.value);
        best = c;
        best_local = env.value;
        threshold = env.value;
        return true;
    };

    const int count = static_cast<int>(params_.dirs.size());
    const double scale = 1.0 + std::abs(W_ref);
    if (preferred && *preferred >= 0 && *preferred < count) {
        // The cached line keeps its place unless beaten by the hysteresis margin.
        if (try_direction(*preferred)) threshold = best_local - options_.continuity_tolerance * scale / leaf_fraction;
        for (int k = 0; k < count; ++k) {
            if (k == *preferred) continue;
            if (try_direction(k)) threshold = best_local;
        }
    } else {
        for (int k = 0; k < count; ++k) try_direction(k);
    }

    if (!best) return std::nullopt;
    if (!(best->value < W_ref - options_.split_tolerance * scale)) return std::nullopt;
    return best;
}

HrocResult HrocEngine::run(const EnergyDensity& W, const Matrix& F, ContinuityCache* cache,
                           ContinuityCache::PointId point) {
    if (W.dim() != 0 && W.dim() != F.dim()) throw std::invalid_argument("hroc: energy and F differ in dimension");
    if (params_.dirs.dim() != F.dim()) throw std::invalid_argument("hroc: direction set and F differ in dimension");
    if (!F.all_finite()) throw std::invalid_argument("hroc: non-finite deformation gradient");

    HrocResult result;
    result.W = W.value(F);
    if (!std::isfinite(result.W)) throw DomainError("hroc: F outside the admissible set of " + W.name());

    TreeNode root(F, 0);

    struct Pending {
        TreeNode* node;
        double fraction;
        std::optional<LaminateCandidate> candidate;
    };
    auto preferred = [&](int level) -> std::optional<int> {
        if (!cache) return std::nullopt;
        return cache->direction(point, level);
    };

    std::deque<Pending> queue;
    queue.push_back({&root, 1.0, kernel(root, root, 1.0, W, preferred(0))});

    while (!queue.empty()) {
        Pending item = std::move(queue.front());
        queue.pop_front();
        if (item.node->depth >= params_.k_max || !item.candidate) continue;

        const LaminateCandidate& c = *item.candidate;
        Split& s = item.node->attach(c.F_plus, c.F_minus, c.lambda, c.R, c.direction_index);
        if (cache) cache->store(point, item.node->depth, c.direction_index);

        const int child_depth = item.node->depth + 1;
        const double f_plus = item.fraction * (1.0 - s.lambda);
        const double f_minus = item.fraction * s.lambda;
        auto child_candidate = [&](const TreeNode& child, double fraction) -> std::optional<LaminateCandidate> {
            if (child_depth >= params_.k_max || fraction == 0.0) return std::nullopt;
            return kernel(root, child, fraction, W, preferred(child_depth));
        };
        auto lc_plus = child_candidate(s.plus, f_plus);
        auto lc_minus = child_candidate(s.minus, f_minus);
        queue.push_back({&s.plus, f_plus, std::move(lc_plus)});
        queue.push_back({&s.minus, f_minus, std::move(lc_minus)});
    }

    result.W_rc = evaluate(root, W);
    auto deriv = derivatives(root, W, options_.with_hessian);
    result.P = deriv.P;
    result.A = deriv.A;
    result.sequence = leaves(root);
    result.tree = std::move(root);
    return result;
}

// ---------------------------------------------------------------------------
// free functions

namespace {

bool find_leaf(const TreeNode& node, const Matrix& F, double fraction, const TreeNode*& found, double& found_fraction) {
    if (node.is_leaf()) {
        if (node.F == F) {
            found = &node;
            found_fraction = fraction;
            return true;
        }
        return false;
    }
    const Split& s = *node.split;
    return find_leaf(s.minus, F, fraction * s.lambda, found, found_fraction) ||
           find_leaf(s.plus, F, fraction * (1.0 - s.lambda), found, found_fraction);
}

}  // namespace

std::optional<LaminateCandidate> hroc_kernel(const TreeNode& root, const ConvexifyParams& params,
                                             const EnergyDensity& W, const Matrix& F_eval) {
    const TreeNode* leaf = nullptr;
    double fraction = 0.0;
    if (!find_leaf(root, F_eval, 1.0, leaf, fraction))
        throw std::invalid_argument("hroc_kernel: F_eval is not a leaf of the tree");
    HrocEngine engine(params, HrocOptions{false});
    return engine.kernel(root, *leaf, fraction, W);
}

HrocResult hroc(const ConvexifyParams& params, const EnergyDensity& W, const Matrix& F, ContinuityCache* cache,
                ContinuityCache::PointId point) {
    HrocEngine engine(params);
    return engine.run(W, F, cache, point);
}

RotationalAverage rotational_average(HrocEngine& engine, const EnergyDensity& W, const Matrix& F, int n_rot,
                                     ContinuityCache* cache, ContinuityCache::PointId point) {
    if (F.dim() != 2) throw std::invalid_argument("rotational_average: only d = 2 is supported");
    if (n_rot < 1) throw std::invalid_argument("rotational_average: n_rot must be >= 1");
    RotationalAverage out{Matrix(2), 0.0, {}};
    for (int j = 0; j < n_rot; ++j) {
        const double theta = j * std::numbers::pi / (2.0 * n_rot);
        const Matrix Q = Matrix::rotation2(theta);
        const HrocResult r = engine.run(W, Q * F, cache, rotation_point_id(point, j));
        out.P_rot += Q.transpose() * r.P;
        out.W_avg += r.W_rc;
        out.angles.push_back(theta);
    }
    out.P_rot *= 1.0 / n_rot;
    out.W_avg /= n_rot;
    return out;
}

}  // namespace hroc
