#pragma once

// Independent reference computations used by the unit and acceptance tests.
// None of these call into the library's algorithms; they only share the
// Matrix container.

#include "hroc/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace oracle {

using hroc::Matrix;

/// Lower convex hull by exhaustive search. Point i is a support iff it lies
/// strictly below every chord (j, k) with j < i < k; the endpoints always are.
inline std::vector<std::size_t> brute_force_supports(const std::vector<double>& x, const std::vector<double>& w) {
    const std::size_t n = x.size();
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i) {
        bool vertex = true;
        for (std::size_t j = 0; j < i && vertex; ++j)
            for (std::size_t k = i + 1; k < n && vertex; ++k) {
                const double t = (x[i] - x[j]) / (x[k] - x[j]);
                const double chord = (1.0 - t) * w[j] + t * w[k];
                if (!(w[i] < chord)) vertex = false;
            }
        if (vertex) out.push_back(i);
    }
    return out;
}

/// Envelope value at sample i: the lowest chord over all j <= i <= k.
inline double brute_force_envelope(const std::vector<double>& x, const std::vector<double>& w, std::size_t i) {
    double best = w[i];
    for (std::size_t j = 0; j < i; ++j)
        for (std::size_t k = i + 1; k < x.size(); ++k) {
            const double t = (x[i] - x[j]) / (x[k] - x[j]);
            best = std::min(best, (1.0 - t) * w[j] + t * w[k]);
        }
    return best;
}

inline double frob2(const Matrix& F) {
    double s = 0.0;
    for (double v : F.flat()) s += v * v;
    return s;
}

inline double det2(const Matrix& F) { return F(0, 0) * F(1, 1) - F(0, 1) * F(1, 0); }

/// Closed-form rank-one convex envelope of the Kohn-Strang energy.
inline double ksd_rc(const Matrix& F) {
    const double n2 = frob2(F);
    const double d = std::abs(det2(F));
    const double rho = std::sqrt(n2 + 2.0 * d);
    return rho >= 1.0 ? 1.0 + n2 : 2.0 * (rho - d);
}

inline double multiwell_rc(const Matrix& F) {
    const double n2 = frob2(F);
    return n2 <= 1.0 ? 0.0 : (n2 - 1.0) * (n2 - 1.0);
}

/// Fourth-order central difference of a scalar function of F.
inline Matrix gradient_fd(const std::function<double(const Matrix&)>& f, const Matrix& F, double h) {
    Matrix G(F.dim());
    for (int k = 0; k < F.size(); ++k) {
        auto at = [&](double s) {
            Matrix X = F;
            X.flat()[static_cast<std::size_t>(k)] += s;
            return f(X);
        };
        G.flat()[static_cast<std::size_t>(k)] = (8.0 * (at(h) - at(-h)) - (at(2 * h) - at(-2 * h))) / (12.0 * h);
    }
    return G;
}

/// Golden-section minimization in extended precision on [a, b].
template <class F>
long double golden_section(F f, long double a, long double b, long double tol = 1e-15L) {
    const long double g = (std::sqrt(5.0L) - 1.0L) / 2.0L;
    long double c = b - g * (b - a), d = a + g * (b - a);
    long double fc = f(c), fd = f(d);
    while (b - a > tol * (1.0L + std::abs(a) + std::abs(b))) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    return (a + b) / 2.0L;
}

}  // namespace oracle
