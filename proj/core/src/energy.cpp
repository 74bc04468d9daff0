#include "hroc/energy.hpp"

#include <cmath>
#include <limits>

namespace hroc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kKsdRadius = std::sqrt(2.0) - 1.0;

// d(F^{-T})_ij / dF_kl = -G_il G_kj with G = F^{-T}
void add_inverse_transpose_derivative(Tensor4& A, const Matrix& G, double s) {
    const int d = G.dim();
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) A(i, j, k, l) -= s * G(i, l) * G(k, j);
}

double plane_strain_I1(const Matrix& F) {
    const double i1 = F.ddot(F);
    return F.dim() == 2 ? i1 + 1.0 : i1;
}

}  // namespace

// ---------------------------------------------------------------------------
// EnergyDensity defaults

double EnergyDensity::fd_step(const Matrix& F) { return 1e-6 * (1.0 + frobenius_norm(F)); }

void EnergyDensity::require_dim(const Matrix& F) const {
    if (dim() != 0 && F.dim() != dim())
        throw std::invalid_argument(name() + ": wrong matrix dimension");
}

void EnergyDensity::require_admissible(const Matrix& F) const {
    if (!admissible(F)) throw DomainError(name() + ": deformation gradient outside admissible set");
}

Matrix EnergyDensity::gradient(const Matrix& F) const {
    require_admissible(F);
    const double h = fd_step(F);
    Matrix g(F.dim());
    Matrix Fp = F;
    for (int k = 0; k < F.size(); ++k) {
        const double base = F.flat()[static_cast<std::size_t>(k)];
        Fp.flat()[static_cast<std::size_t>(k)] = base + h;
        const double wp = value(Fp);
        Fp.flat()[static_cast<std::size_t>(k)] = base - h;
        const double wm = value(Fp);
        Fp.flat()[static_cast<std::size_t>(k)] = base;
        g.flat()[static_cast<std::size_t>(k)] = (wp - wm) / (2.0 * h);
    }
    return g;
}

Tensor4 EnergyDensity::hessian(const Matrix& F) const {
    require_admissible(F);
    const int d = F.dim();
    // Larger step than for the gradient: this differentiates a difference quotient.
    const double h = 1e-4 * (1.0 + frobenius_norm(F));
    Tensor4 A(d);
    Matrix Fp = F;
    for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
            const double base = F(k, l);
            Fp(k, l) = base + h;
            const Matrix gp = gradient(Fp);
            Fp(k, l) = base - h;
            const Matrix gm = gradient(Fp);
            Fp(k, l) = base;
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) A(i, j, k, l) = (gp(i, j) - gm(i, j)) / (2.0 * h);
        }
    return A;
}

// ---------------------------------------------------------------------------
// Kohn-Strang

double KohnStrangEnergy::rho(const Matrix& F) { return std::sqrt(F.ddot(F) + 2.0 * std::abs(det(F))); }

double ksd_value(const Matrix& F) {
    const double n = frobenius_norm(F);
    return n >= kKsdRadius ? 1.0 + n * n : 2.0 * std::sqrt(2.0) * n;
}

double ksd_envelope(const Matrix& F) {
    const double rho = KohnStrangEnergy::rho(F);
    if (rho >= 1.0) return 1.0 + F.ddot(F);
    return 2.0 * (rho - std::abs(det(F)));
}

double KohnStrangEnergy::value(const Matrix& F) const {
    require_dim(F);
    return ksd_value(F);
}

std::optional<double> KohnStrangEnergy::envelope(const Matrix& F) const {
    require_dim(F);
    return ksd_envelope(F);
}

Matrix KohnStrangEnergy::gradient(const Matrix& F) const {
    require_dim(F);
    const double n = frobenius_norm(F);
    if (n >= kKsdRadius) return 2.0 * F;
    if (n == 0.0) return Matrix(F.dim());
    return (2.0 * std::sqrt(2.0) / n) * F;
}

Tensor4 KohnStrangEnergy::hessian(const Matrix& F) const {
    require_dim(F);
    const int d = F.dim();
    const double n = frobenius_norm(F);
    if (n >= kKsdRadius) return 2.0 * Tensor4::identity(d);
    if (n == 0.0) return Tensor4(d);
    const double c = 2.0 * std::sqrt(2.0);
    Tensor4 A = (c / n) * Tensor4::identity(d);
    A.axpy(-c / (n * n * n), Tensor4::outer(F, F));
    return A;
}

// ---------------------------------------------------------------------------
// Multiwell

double multiwell_value(const Matrix& F) {
    const double s = F.ddot(F) - 1.0;
    return s * s;
}

double multiwell_envelope(const Matrix& F) { return F.ddot(F) >= 1.0 ? multiwell_value(F) : 0.0; }

double MultiwellEnergy::value(const Matrix& F) const { return multiwell_value(F); }

std::optional<double> MultiwellEnergy::envelope(const Matrix& F) const { return multiwell_envelope(F); }

Matrix MultiwellEnergy::gradient(const Matrix& F) const { return (4.0 * (F.ddot(F) - 1.0)) * F; }

Tensor4 MultiwellEnergy::hessian(const Matrix& F) const {
    Tensor4 A = (4.0 * (F.ddot(F) - 1.0)) * Tensor4::identity(F.dim());
    A.axpy(8.0, Tensor4::outer(F, F));
    return A;
}

// ---------------------------------------------------------------------------
// Counterexample

double fail_value(const Matrix& F) {
    const auto [nu1, nu2] = signed_singular_values(F);
    auto well = [](double nu) {
        const double a = (nu - 3.0) * (nu + 3.0);
        return a * a;
    };
    const double ring = std::sqrt(nu1 * nu1 + nu2 * nu2) - 1.0;
    return (well(nu1) + well(nu2)) * (ring * ring + 1.0);
}

double FailureEnergy::value(const Matrix& F) const {
    require_dim(F);
    return fail_value(F);
}

std::optional<double> FailureEnergy::envelope(const Matrix& F) const {
    require_dim(F);
    // Only the zero plateau spanned by the outer wells is known in closed form.
    if (signed_singular_values(F).first <= 3.0) return 0.0;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Quadratic

double QuadraticEnergy::value(const Matrix& F) const { return F.ddot(F); }

Matrix QuadraticEnergy::gradient(const Matrix& F) const { return 2.0 * F; }

Tensor4 QuadraticEnergy::hessian(const Matrix& F) const { return 2.0 * Tensor4::identity(F.dim()); }

// ---------------------------------------------------------------------------
// Neo-Hookean NH1

double NeoHookeanNH1::value(const Matrix& F) const {
    require_dim(F);
    const double J = det(F);
    if (!(J > 0.0)) return kInf;
    const double lnJ = std::log(J);
    return 0.5 * p_.mu * (plane_strain_I1(F) - 3.0) - p_.mu * lnJ + 0.5 * p_.lambda * lnJ * lnJ;
}

Matrix NeoHookeanNH1::gradient(const Matrix& F) const {
    require_dim(F);
    require_admissible(F);
    const double lnJ = std::log(det(F));
    const Matrix G = F.inverse().transpose();
    Matrix P = p_.mu * F;
    P.axpy(p_.lambda * lnJ - p_.mu, G);
    return P;
}

Tensor4 NeoHookeanNH1::hessian(const Matrix& F) const {
    require_dim(F);
    require_admissible(F);
    const double lnJ = std::log(det(F));
    const Matrix G = F.inverse().transpose();
    Tensor4 A = p_.mu * Tensor4::identity(F.dim());
    A.axpy(p_.lambda, Tensor4::outer(G, G));
    add_inverse_transpose_derivative(A, G, p_.lambda * lnJ - p_.mu);
    return A;
}

// ---------------------------------------------------------------------------
// Neo-Hookean NH2

double NeoHookeanNH2::value(const Matrix& F) const {
    require_dim(F);
    const double J = det(F);
    if (!(J > 0.0)) return kInf;
    const double c1 = 0.5 * p_.mu;
    const double d1 = 0.5 * p_.lambda;
    const double ibar = std::pow(J, -2.0 / 3.0) * plane_strain_I1(F);
    return c1 * (ibar - 3.0) + (c1 / 6.0 + d1 / 4.0) * (J * J + 1.0 / (J * J) - 2.0);
}

Matrix NeoHookeanNH2::gradient(const Matrix& F) const {
    require_dim(F);
    require_admissible(F);
    const double c1 = 0.5 * p_.mu;
    const double k = c1 / 6.0 + 0.25 * (0.5 * p_.lambda);
    const double J = det(F);
    const double Jm23 = std::pow(J, -2.0 / 3.0);
    const double I1 = plane_strain_I1(F);
    const Matrix G = F.inverse().transpose();
    Matrix P = (2.0 * c1 * Jm23) * F;
    P.axpy(-(2.0 / 3.0) * c1 * Jm23 * I1 + 2.0 * k * (J * J - 1.0 / (J * J)), G);
    return P;
}

Tensor4 NeoHookeanNH2::hessian(const Matrix& F) const {
    require_dim(F);
    require_admissible(F);
    const int d = F.dim();
    const double c1 = 0.5 * p_.mu;
    const double k = c1 / 6.0 + 0.25 * (0.5 * p_.lambda);
    const double J = det(F);
    const double J2 = J * J;
    const double Jm23 = std::pow(J, -2.0 / 3.0);
    const double I1 = plane_strain_I1(F);
    const Matrix G = F.inverse().transpose();

    // 2 c1 J^{-2/3} F
    Tensor4 A = (2.0 * c1 * Jm23) * Tensor4::identity(d);
    A.axpy(-(4.0 / 3.0) * c1 * Jm23, Tensor4::outer(F, G));
    // -(2/3) c1 J^{-2/3} I1 G
    A.axpy((4.0 / 9.0) * c1 * Jm23 * I1, Tensor4::outer(G, G));
    A.axpy(-(4.0 / 3.0) * c1 * Jm23, Tensor4::outer(G, F));
    add_inverse_transpose_derivative(A, G, -(2.0 / 3.0) * c1 * Jm23 * I1);
    // 2 k (J^2 - J^{-2}) G
    A.axpy(2.0 * k * (2.0 * J2 + 2.0 / J2), Tensor4::outer(G, G));
    add_inverse_transpose_derivative(A, G, 2.0 * k * (J2 - 1.0 / J2));
    return A;
}

}  // namespace hroc
