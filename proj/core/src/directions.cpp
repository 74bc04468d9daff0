#include "hroc/directions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hroc {

namespace {

// All nonzero vectors in {-1,0,1}^d in lexicographic order.
std::vector<Vector> sign_vectors(int d) {
    std::vector<Vector> out;
    int total = 1;
    for (int i = 0; i < d; ++i) total *= 3;
    for (int code = 0; code < total; ++code) {
        Vector v(d);
        int rest = code;
        bool nonzero = false;
        for (int i = d - 1; i >= 0; --i) {
            v[i] = static_cast<double>(rest % 3 - 1);
            nonzero = nonzero || v[i] != 0.0;
            rest /= 3;
        }
        if (nonzero) out.push_back(v);
    }
    return out;
}

}  // namespace

DirectionSet build_direction_set(int d) {
    if (d != 2 && d != 3) throw std::invalid_argument("build_direction_set: d must be 2 or 3");
    DirectionSet set;
    set.dim_ = d;
    const auto vecs = sign_vectors(d);
    for (const auto& a : vecs) {
        for (const auto& b : vecs) {
            ++set.raw_count_;
            Dyad candidate(a, b);
            const bool seen = std::any_of(set.dirs_.begin(), set.dirs_.end(), [&](const Dyad& kept) {
                return is_parallel(kept.matrix(), candidate.matrix());
            });
            if (!seen) set.dirs_.push_back(candidate);
        }
    }
    return set;
}

void ConvexifyParams::validate() const {
    if (N < 2) throw std::invalid_argument("ConvexifyParams: N must be >= 2");
    if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("ConvexifyParams: r must be > 0");
    if (k_max < 1) throw std::invalid_argument("ConvexifyParams: k_max must be >= 1");
    if (dirs.size() == 0) throw std::invalid_argument("ConvexifyParams: empty direction set");
}

ConvexifyParams make_params(int d, int N, double r, int k_max) {
    ConvexifyParams p;
    p.N = N;
    p.r = r;
    p.k_max = k_max;
    p.dirs = build_direction_set(d);
    p.validate();
    return p;
}

std::optional<LineSampling> scale_direction(const Matrix& R, const ConvexifyParams& params,
                                            const Matrix& F_root, const Matrix& F_eval) {
    const double r = params.r;
    const Matrix g = F_eval - F_root;
    const double slack = 1e-12 * (1.0 + r);
    if (g.max_abs() > r + slack) throw std::domain_error("scale_direction: evaluation point outside the box");

    // Intersect the per-component constraints |g_pq + s R_pq| <= r.
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (int k = 0; k < R.size(); ++k) {
        const double rk = R.flat()[static_cast<std::size_t>(k)];
        if (rk == 0.0) continue;
        const double gk = g.flat()[static_cast<std::size_t>(k)];
        double a = (-r - gk) / rk;
        double b = (r - gk) / rk;
        if (a > b) std::swap(a, b);
        lo = std::max(lo, a);
        hi = std::min(hi, b);
    }
    if (!std::isfinite(lo) || !std::isfinite(hi)) throw std::invalid_argument("scale_direction: zero direction");
    // Points sitting on a face (up to rounding) keep s = 0 admissible.
    const double below = std::max(0.0, -lo);
    const double above = std::max(0.0, hi);
    if (below + above <= 0.0) return std::nullopt;

    const long steps = params.N - 1;
    auto step_for = [&](long n_below) {
        const long n_above = steps - n_below;
        double d = std::numeric_limits<double>::infinity();
        if (n_below > 0) d = std::min(d, below / static_cast<double>(n_below));
        if (n_above > 0) d = std::min(d, above / static_cast<double>(n_above));
        return d;
    };

    // The best split of the N - 1 steps is the floor or ceil of the
    // proportional share.
    const double share = static_cast<double>(steps) * below / (below + above);
    long n_lo = std::clamp(static_cast<long>(std::floor(share)), 0L, steps);
    long n_hi = std::clamp(n_lo + 1, 0L, steps);
    if (below == 0.0) n_lo = n_hi = 0;
    if (above == 0.0) n_lo = n_hi = steps;
    const long n_below = step_for(n_hi) > step_for(n_lo) ? n_hi : n_lo;

    LineSampling s;
    s.delta = step_for(n_below);
    s.i_min = -n_below;
    s.i_max = steps - n_below;
    return s;
}

}  // namespace hroc
