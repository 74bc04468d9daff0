#include "hroc/convexify1d.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hroc {

void SampledLine::validate() const {
    if (x.size() != w.size()) throw std::invalid_argument("convexify: x and w differ in length");
    if (x.size() < 2) throw std::invalid_argument("convexify: need at least two samples");
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i])) throw std::invalid_argument("convexify: non-finite abscissa");
        if (i > 0 && !(x[i] > x[i - 1]))
            throw std::invalid_argument("convexify: abscissae must be strictly increasing");
    }
}

ConvexHull1D convexify(const SampledLine& line) {
    ConvexHull1D hull;
    convexify_into(line, hull);
    return hull;
}

void convexify_into(const SampledLine& line, ConvexHull1D& hull) {
    line.validate();
    const auto& x = line.x;
    const auto& w = line.w;
    const std::size_t len = x.size();

    auto sample = [&](std::size_t i) {
        const double v = w[i];
        return std::isfinite(v) ? v : kInadmissiblePenalty;
    };

    auto& y = hull.y;
    auto& c = hull.c;
    y.clear();
    c.clear();
    y.push_back(x[0]);
    c.push_back(sample(0));
    y.push_back(x[1]);
    c.push_back(sample(1));

    for (std::size_t i = 2; i < len; ++i) {
        const double wi = sample(i);
        // Pop while the last support does not lie strictly below the chord
        // to the new sample. At least one support always remains.
        std::size_t n = y.size();
        while (n >= 2 &&
               (c[n - 1] - c[n - 2]) * (x[i] - y[n - 1]) >= (wi - c[n - 1]) * (y[n - 1] - y[n - 2])) {
            --n;
        }
        y.resize(n);
        c.resize(n);
        y.push_back(x[i]);
        c.push_back(wi);
    }
}

EnvelopePoint envelope_at(const ConvexHull1D& hull, double x0) {
    const auto& y = hull.y;
    if (y.empty()) throw std::out_of_range("envelope_at: empty hull");
    if (!(x0 >= y.front() && x0 <= y.back()))
        throw std::out_of_range("envelope_at: point outside the support range");

    const auto it = std::lower_bound(y.begin(), y.end(), x0);
    const std::size_t k = static_cast<std::size_t>(it - y.begin());
    EnvelopePoint p;
    if (*it == x0) {
        p.left = p.right = k;
        p.lambda = 1.0;
        p.value = hull.c[k];
        return p;
    }
    p.left = k - 1;
    p.right = k;
    p.lambda = (y[k] - x0) / (y[k] - y[k - 1]);
    p.value = p.lambda * hull.c[k - 1] + (1.0 - p.lambda) * hull.c[k];
    return p;
}

}  // namespace hroc
