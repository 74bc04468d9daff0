#pragma once

// Lower convex envelope of sampled one-dimensional data.
//
// The sweep keeps a stack of support points and pops while the slope sequence
// fails to increase strictly (collinear supports are dropped), so every sample
// is pushed and popped at most once.

#include <cstddef>
#include <span>
#include <vector>

namespace hroc {

/// Stand-in for non-finite samples (e.g. energies outside their admissible
/// set). Such points never become supports of a proper envelope.
inline constexpr double kInadmissiblePenalty = 1e20;

/// Samples w[i] = g(x[i]) of a function on a strictly increasing grid.
struct SampledLine {
    std::span<const double> x;
    std::span<const double> w;

    /// Throws std::invalid_argument unless sizes agree, N >= 2 and x is
    /// strictly increasing and finite.
    void validate() const;
};

struct ConvexHull1D {
    std::vector<double> y;  ///< support abscissae, strictly increasing
    std::vector<double> c;  ///< envelope values at the supports

    std::size_t size() const { return y.size(); }
};

struct EnvelopePoint {
    double value = 0.0;
    std::size_t left = 0;
    std::size_t right = 0;
    /// Weight of the left support: x0 = lambda * y[left] + (1 - lambda) * y[right].
    double lambda = 1.0;

    bool on_support() const { return left == right; }
};

/// Computes the support points of the lower convex envelope.
ConvexHull1D convexify(const SampledLine& line);

/// Same as convexify(), reusing the storage already held by `hull`.
void convexify_into(const SampledLine& line, ConvexHull1D& hull);

/// Evaluates the envelope at x0 and reports the bracketing supports.
/// Throws std::out_of_range when x0 lies outside [y.front(), y.back()].
EnvelopePoint envelope_at(const ConvexHull1D& hull, double x0);

}  // namespace hroc
