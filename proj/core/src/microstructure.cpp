#include "hroc/microstructure.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace hroc {

void LaminateField::validate() const {
    if (!tree) throw std::invalid_argument("LaminateField: no tree");
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw std::invalid_argument("LaminateField: epsilon must lie in (0, 1]");
    if (!(separation >= 1.0)) throw std::invalid_argument("LaminateField: separation must be >= 1");
    if (m < 4) throw std::invalid_argument("LaminateField: grid resolution m must be >= 4");
    const int d = tree->F.dim();
    if (d != 2 && d != 3) throw std::invalid_argument("LaminateField: dimension must be 2 or 3");
}

Vector split_normal(const Split& s) {
    Vector n;
    if (s.direction.dim() != 0) {
        n = s.direction.b();
    } else {
        const Matrix R = s.jump();
        const int d = R.dim();
        int best = 0;
        double best_norm = -1.0;
        for (int i = 0; i < d; ++i) {
            double sq = 0.0;
            for (int j = 0; j < d; ++j) sq += R(i, j) * R(i, j);
            if (sq > best_norm) {
                best_norm = sq;
                best = i;
            }
        }
        n = Vector(d);
        for (int j = 0; j < d; ++j) n[j] = R(best, j);
    }
    const double len = n.norm();
    if (!(len > 0.0)) throw std::invalid_argument("split_normal: split has no normal");
    return n * (1.0 / len);
}

CoefficientValue coefficient_at(const Vector& x, const TreeNode& tree, double epsilon, double separation) {
    CoefficientValue out{tree.F, 0};
    const TreeNode* node = &tree;
    double eps_level = epsilon;
    while (!node->is_leaf()) {
        const Split& s = *node->split;
        const double t = x.dot(split_normal(s)) / eps_level;
        const double frac = t - std::floor(t);
        const Matrix R = s.jump();
        if (frac < 1.0 - s.lambda) {
            out.F.axpy(-s.lambda, R);
            out.leaf += summarize(s.minus).leaves;
            node = &s.plus;
        } else {
            out.F.axpy(1.0 - s.lambda, R);
            node = &s.minus;
        }
        eps_level /= separation;
    }
    return out;
}

namespace {

struct Grid {
    int m;
    int d;
    int cells;

    Grid(int m_, int d_) : m(m_), d(d_), cells(1) {
        for (int k = 0; k < d; ++k) cells *= m;
    }

    std::array<int, 3> unpack(int index) const {
        std::array<int, 3> c{0, 0, 0};
        for (int k = 0; k < d; ++k) {
            c[k] = index % m;
            index /= m;
        }
        return c;
    }

    int pack(std::array<int, 3> c) const {
        int index = 0;
        for (int k = d - 1; k >= 0; --k) index = index * m + ((c[k] % m) + m) % m;
        return index;
    }

    /// Global node of local corner q of cell c.
    int corner(const std::array<int, 3>& c, int q) const {
        std::array<int, 3> n = c;
        for (int k = 0; k < d; ++k) n[k] += (q >> k) & 1;
        return pack(n);
    }
};

/// Reference quantities of the multilinear element on [0,1]^d with the
/// 2-point Gauss rule per axis.
struct Element {
    int d;
    int corners;
    int points;
    std::vector<std::array<double, 3>> xi;        // gauss point coordinates
    std::vector<std::array<double, 3>> grad;      // [gp * corners + q] reference gradient of N_q
    std::vector<double> stiffness;                // [p * corners + q] without the h^(d-2) factor
    double weight;                                // reference weight per gauss point

    explicit Element(int d_) : d(d_), corners(1 << d_), points(1 << d_), weight(1.0 / (1 << d_)) {
        const double g = 0.5 / std::sqrt(3.0);
        xi.resize(static_cast<std::size_t>(points));
        for (int p = 0; p < points; ++p)
            for (int k = 0; k < d; ++k) xi[p][k] = ((p >> k) & 1) ? 0.5 + g : 0.5 - g;
        grad.resize(static_cast<std::size_t>(points * corners));
        for (int p = 0; p < points; ++p) {
            for (int q = 0; q < corners; ++q) {
                std::array<double, 3> gr{0.0, 0.0, 0.0};
                for (int j = 0; j < d; ++j) {
                    double v = ((q >> j) & 1) ? 1.0 : -1.0;
                    for (int k = 0; k < d; ++k) {
                        if (k == j) continue;
                        v *= ((q >> k) & 1) ? xi[p][k] : 1.0 - xi[p][k];
                    }
                    gr[j] = v;
                }
                grad[static_cast<std::size_t>(p * corners + q)] = gr;
            }
        }
        stiffness.assign(static_cast<std::size_t>(corners * corners), 0.0);
        for (int p = 0; p < points; ++p)
            for (int a = 0; a < corners; ++a)
                for (int b = 0; b < corners; ++b) {
                    double s = 0.0;
                    for (int j = 0; j < d; ++j) s += G(p, a)[j] * G(p, b)[j];
                    stiffness[static_cast<std::size_t>(a * corners + b)] += weight * s;
                }
    }

    const std::array<double, 3>& G(int p, int q) const { return grad[static_cast<std::size_t>(p * corners + q)]; }
};

class Projector {
public:
    Projector(const LaminateField& field)
        : field_(field), grid_(field.m, field.tree->F.dim()), el_(grid_.d), h_(1.0 / field.m) {
        const int d = grid_.d;
        coeff_.resize(static_cast<std::size_t>(grid_.cells * el_.points), Matrix(d));
        mean_ = Matrix(d);
        for (int c = 0; c < grid_.cells; ++c) {
            const auto ci = grid_.unpack(c);
            for (int p = 0; p < el_.points; ++p) {
                Vector x(d);
                for (int k = 0; k < d; ++k) x[k] = (ci[k] + el_.xi[p][k]) * h_;
                Matrix& g = coeff_[static_cast<std::size_t>(c * el_.points + p)];
                g = coefficient(x, *field.tree, field.epsilon, field.separation);
                mean_ += g;
            }
        }
        mean_ *= 1.0 / static_cast<double>(coeff_.size());
        if (field.tree->is_leaf()) mean_ = field.tree->F;
        for (auto& g : coeff_) g -= mean_;
        stiffness_scale_ = std::pow(h_, d - 2);
    }

    const Matrix& mean() const { return mean_; }
    int nodes() const { return grid_.cells; }
    int dim() const { return grid_.d; }

    void apply(const std::vector<double>& x, std::vector<double>& y) const {
        std::fill(y.begin(), y.end(), 0.0);
        const int nc = el_.corners;
        std::array<int, 8> idx{};
        std::array<double, 8> loc{};
        for (int c = 0; c < grid_.cells; ++c) {
            const auto ci = grid_.unpack(c);
            for (int q = 0; q < nc; ++q) {
                idx[q] = grid_.corner(ci, q);
                loc[q] = x[static_cast<std::size_t>(idx[q])];
            }
            for (int a = 0; a < nc; ++a) {
                double s = 0.0;
                for (int b = 0; b < nc; ++b) s += el_.stiffness[static_cast<std::size_t>(a * nc + b)] * loc[b];
                y[static_cast<std::size_t>(idx[a])] += stiffness_scale_ * s;
            }
        }
    }

    std::vector<double> rhs(int component) const {
        std::vector<double> b(static_cast<std::size_t>(grid_.cells), 0.0);
        const double scale = el_.weight * std::pow(h_, grid_.d - 1);
        for (int c = 0; c < grid_.cells; ++c) {
            const auto ci = grid_.unpack(c);
            for (int p = 0; p < el_.points; ++p) {
                const Matrix& g = coeff_[static_cast<std::size_t>(c * el_.points + p)];
                for (int q = 0; q < el_.corners; ++q) {
                    double s = 0.0;
                    for (int j = 0; j < grid_.d; ++j) s += g(component, j) * el_.G(p, q)[j];
                    b[static_cast<std::size_t>(grid_.corner(ci, q))] += scale * s;
                }
            }
        }
        return b;
    }

    /// 1/2 sum over gauss points of |grad u - g|^2, and the value for u = 0.
    std::pair<double, double> misfit(const std::vector<double>& u) const {
        const int d = grid_.d;
        const double w = el_.weight * std::pow(h_, d);
        double at_u = 0.0, at_zero = 0.0;
        for (int c = 0; c < grid_.cells; ++c) {
            const auto ci = grid_.unpack(c);
            for (int p = 0; p < el_.points; ++p) {
                const Matrix& g = coeff_[static_cast<std::size_t>(c * el_.points + p)];
                Matrix grad_u(d);
                for (int q = 0; q < el_.corners; ++q) {
                    const int node = grid_.corner(ci, q);
                    for (int i = 0; i < d; ++i)
                        for (int j = 0; j < d; ++j)
                            grad_u(i, j) += u[static_cast<std::size_t>(node * d + i)] * el_.G(p, q)[j] / h_;
                }
                const Matrix diff = grad_u - g;
                at_u += 0.5 * w * diff.ddot(diff);
                at_zero += 0.5 * w * g.ddot(g);
            }
        }
        return {at_u, at_zero};
    }

private:
    const LaminateField& field_;
    Grid grid_;
    Element el_;
    double h_;
    double stiffness_scale_ = 1.0;
    Matrix mean_;
    std::vector<Matrix> coeff_;
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void remove_mean(std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    s /= static_cast<double>(v.size());
    for (double& x : v) x -= s;
}

double relative_residual(const Projector& P, const std::vector<double>& u, const std::vector<double>& b) {
    std::vector<double> Ku(u.size());
    P.apply(u, Ku);
    double rr = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) rr += (b[i] - Ku[i]) * (b[i] - Ku[i]);
    const double bn = std::sqrt(dot(b, b));
    return bn > 0.0 ? std::sqrt(rr) / bn : std::sqrt(rr);
}

}  // namespace

std::vector<int> phase_map(const LaminateField& field) {
    field.validate();
    const Grid grid(field.m, field.tree->F.dim());
    std::vector<int> phases(static_cast<std::size_t>(grid.cells));
    for (int c = 0; c < grid.cells; ++c) {
        const auto ci = grid.unpack(c);
        Vector x(grid.d);
        for (int k = 0; k < grid.d; ++k) x[k] = (ci[k] + 0.5) / field.m;
        phases[static_cast<std::size_t>(c)] = coefficient_at(x, *field.tree, field.epsilon, field.separation).leaf;
    }
    return phases;
}

std::vector<double> phase_fractions(const LaminateField& field) {
    const auto phases = phase_map(field);
    std::vector<double> fractions(static_cast<std::size_t>(summarize(*field.tree).leaves), 0.0);
    for (int p : phases) fractions[static_cast<std::size_t>(p)] += 1.0;
    for (double& f : fractions) f /= static_cast<double>(phases.size());
    return fractions;
}

Vector stripe_normal(const std::vector<int>& phases, int m, int dim) {
    const Grid grid(m, dim);
    if (static_cast<int>(phases.size()) != grid.cells) throw std::invalid_argument("stripe_normal: size mismatch");
    Eigen::Matrix3d S = Eigen::Matrix3d::Zero();
    for (int c = 0; c < grid.cells; ++c) {
        const auto ci = grid.unpack(c);
        // central differences of the indicator of the phase found at c
        const int phase = phases[static_cast<std::size_t>(c)];
        Eigen::Vector3d g = Eigen::Vector3d::Zero();
        for (int k = 0; k < dim; ++k) {
            auto up = ci, down = ci;
            ++up[k];
            --down[k];
            const double a = phases[static_cast<std::size_t>(grid.pack(up))] == phase ? 1.0 : 0.0;
            const double b = phases[static_cast<std::size_t>(grid.pack(down))] == phase ? 1.0 : 0.0;
            g[k] = 0.5 * (a - b);
        }
        S += g * g.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(S);
    const Eigen::Vector3d v = eig.eigenvectors().col(2);
    Vector n(dim);
    for (int k = 0; k < dim; ++k) n[k] = v[k];
    for (int k = 0; k < dim; ++k) {
        if (std::abs(n[k]) > 1e-12) {
            if (n[k] < 0.0) n *= -1.0;
            break;
        }
    }
    return n;
}

int DisplacementField::node_count() const {
    int n = 1;
    for (int k = 0; k < dim; ++k) n *= m;
    return n;
}

double DisplacementField::value(const std::vector<int>& idx, int component) const {
    const Grid grid(m, dim);
    std::array<int, 3> c{0, 0, 0};
    for (int k = 0; k < dim; ++k) c[k] = idx.at(static_cast<std::size_t>(k));
    return u[static_cast<std::size_t>(grid.pack(c) * dim + component)];
}

double DisplacementField::mean(int component) const {
    double s = 0.0;
    const int n = node_count();
    for (int i = 0; i < n; ++i) s += u[static_cast<std::size_t>(i * dim + component)];
    return s / n;
}

DisplacementField project(const LaminateField& field, const ProjectionOptions& options) {
    field.validate();
    const Projector P(field);
    const int d = P.dim();
    const int n = P.nodes();

    DisplacementField out;
    out.m = field.m;
    out.dim = d;
    out.u.assign(static_cast<std::size_t>(n * d), 0.0);
    out.mean_gradient = P.mean();

    std::vector<double> x(static_cast<std::size_t>(n)), r, p, Ap(static_cast<std::size_t>(n));
    for (int comp = 0; comp < d; ++comp) {
        std::vector<double> b = P.rhs(comp);
        remove_mean(b);
        const double bn = std::sqrt(dot(b, b));
        std::fill(x.begin(), x.end(), 0.0);
        int it = 0;
        if (bn > 0.0) {
            r = b;
            p = r;
            double rr = dot(r, r);
            while (std::sqrt(rr) > options.tolerance * bn) {
                if (it >= options.max_iterations) {
                    throw std::runtime_error("project: CG did not converge after " + std::to_string(it) +
                                             " iterations, relative residual " +
                                             std::to_string(std::sqrt(rr) / bn));
                }
                P.apply(p, Ap);
                const double alpha = rr / dot(p, Ap);
                for (int i = 0; i < n; ++i) {
                    x[static_cast<std::size_t>(i)] += alpha * p[static_cast<std::size_t>(i)];
                    r[static_cast<std::size_t>(i)] -= alpha * Ap[static_cast<std::size_t>(i)];
                }
                remove_mean(r);
                const double rr_new = dot(r, r);
                const double beta = rr_new / rr;
                rr = rr_new;
                for (int i = 0; i < n; ++i)
                    p[static_cast<std::size_t>(i)] = r[static_cast<std::size_t>(i)] + beta * p[static_cast<std::size_t>(i)];
                ++it;
            }
            remove_mean(x);
        }
        out.iterations = std::max(out.iterations, it);
        out.residual = std::max(out.residual, relative_residual(P, x, b));
        for (int i = 0; i < n; ++i) out.u[static_cast<std::size_t>(i * d + comp)] = x[static_cast<std::size_t>(i)];
    }
    if (out.residual > options.tolerance)
        throw std::runtime_error("project: true residual " + std::to_string(out.residual) + " above tolerance");
    std::tie(out.misfit, out.misfit_at_zero) = P.misfit(out.u);
    return out;
}

double projection_residual(const LaminateField& field, const DisplacementField& u) {
    field.validate();
    const Projector P(field);
    double worst = 0.0;
    std::vector<double> x(static_cast<std::size_t>(P.nodes()));
    for (int comp = 0; comp < P.dim(); ++comp) {
        std::vector<double> b = P.rhs(comp);
        remove_mean(b);
        for (int i = 0; i < P.nodes(); ++i) x[static_cast<std::size_t>(i)] = u.u[static_cast<std::size_t>(i * P.dim() + comp)];
        worst = std::max(worst, relative_residual(P, x, b));
    }
    return worst;
}

namespace {

template <class Visit>
void for_each_output_node(const DisplacementField& u, Visit&& visit) {
    const int m = u.m, d = u.dim;
    const int k2 = d == 3 ? m : 0;
    std::vector<int> idx(static_cast<std::size_t>(d));
    for (int c = 0; c <= k2; ++c)
        for (int b = 0; b <= m; ++b)
            for (int a = 0; a <= m; ++a) {
                idx[0] = a;
                idx[1] = b;
                if (d == 3) idx[2] = c;
                visit(idx);
            }
}

}  // namespace

void write_field_csv(std::ostream& os, const DisplacementField& u) {
    const int d = u.dim;
    for (int k = 0; k < d; ++k) os << (k ? "," : "") << "x" << k + 1;
    for (int k = 0; k < d; ++k) os << ",u" << k + 1;
    os << '\n' << std::setprecision(17);
    for_each_output_node(u, [&](const std::vector<int>& idx) {
        for (int k = 0; k < d; ++k) os << (k ? "," : "") << static_cast<double>(idx[static_cast<std::size_t>(k)]) / u.m;
        for (int k = 0; k < d; ++k) os << ',' << u.value(idx, k);
        os << '\n';
    });
}

void write_field_vtk(std::ostream& os, const DisplacementField& u, const std::vector<int>& phases) {
    const int m = u.m, d = u.dim;
    const int nz = d == 3 ? m + 1 : 1;
    const long points = static_cast<long>(m + 1) * (m + 1) * nz;
    os << "# vtk DataFile Version 3.0\nlaminate displacement fluctuation\nASCII\nDATASET STRUCTURED_POINTS\n";
    os << "DIMENSIONS " << m + 1 << ' ' << m + 1 << ' ' << nz << '\n';
    os << "ORIGIN 0 0 0\nSPACING " << 1.0 / m << ' ' << 1.0 / m << ' ' << (d == 3 ? 1.0 / m : 1.0) << '\n';
    os << "POINT_DATA " << points << "\nVECTORS u double\n" << std::setprecision(12);
    for_each_output_node(u, [&](const std::vector<int>& idx) {
        os << u.value(idx, 0) << ' ' << u.value(idx, 1) << ' ' << (d == 3 ? u.value(idx, 2) : 0.0) << '\n';
    });
    if (!phases.empty()) {
        os << "CELL_DATA " << phases.size() << "\nSCALARS phase int 1\nLOOKUP_TABLE default\n";
        for (int p : phases) os << p << '\n';
    }
}

}  // namespace hroc
