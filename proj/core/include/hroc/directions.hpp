#pragma once

#include "hroc/tensor.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace hroc {

/// Rank-one directions a (x) b with a, b in {-1, 0, 1}^d \ {0}, one
/// representative per line through the origin.
class DirectionSet {
public:
    DirectionSet() = default;

    /// Number of raw (a, b) pairs enumerated before parallel reduction.
    std::size_t raw_count() const { return raw_count_; }
    std::size_t size() const { return dirs_.size(); }
    int dim() const { return dim_; }
    const Dyad& operator[](std::size_t i) const { return dirs_[i]; }
    const std::vector<Dyad>& dyads() const { return dirs_; }

    auto begin() const { return dirs_.begin(); }
    auto end() const { return dirs_.end(); }

private:
    friend DirectionSet build_direction_set(int d);

    std::vector<Dyad> dirs_;
    std::size_t raw_count_ = 0;
    int dim_ = 0;
};

/// Enumerates (a, b) lexicographically (component order -1 < 0 < 1, a before
/// b) and keeps the first member of every parallel class.
DirectionSet build_direction_set(int d);

struct ConvexifyParams {
    int N = 1000;         ///< samples per rank-one line
    double r = 1.0;       ///< infinity-norm radius of the search box around the root
    int k_max = 10;       ///< maximum lamination tree depth
    DirectionSet dirs;

    /// Throws std::invalid_argument on N < 2, r <= 0, k_max < 1 or an empty
    /// direction set.
    void validate() const;
};

ConvexifyParams make_params(int d, int N, double r, int k_max = 10);

/// Uniform sampling F_eval + i * delta * R, i in [i_min, i_max], of the
/// rank-one line through F_eval clipped to the box around F_root.
struct LineSampling {
    double delta = 0.0;
    long i_min = 0;
    long i_max = 0;

    long count() const { return i_max - i_min + 1; }
};

/// Chooses the step so that exactly N samples cover the admissible segment
/// with i = 0 at F_eval. Returns nullopt when the segment degenerates to the
/// single point F_eval. Throws std::domain_error if F_eval is outside the box.
std::optional<LineSampling> scale_direction(const Matrix& R, const ConvexifyParams& params,
                                            const Matrix& F_root, const Matrix& F_eval);

}  // namespace hroc
