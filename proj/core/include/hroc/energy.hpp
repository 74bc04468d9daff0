#pragma once

// Energy densities W(F) and their analytic rank-one convex envelopes.

#include "hroc/tensor.hpp"

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

namespace hroc {

/// Raised when an energy or one of its derivatives is requested outside the
/// admissible set (e.g. det F <= 0 for Neo-Hookean models).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class EnergyDensity {
public:
    virtual ~EnergyDensity() = default;

    virtual std::string name() const = 0;
    /// Dimension d of the deformation gradient, or 0 if any d in {2, 3} works.
    virtual int dim() const = 0;

    /// Energy value; +infinity outside the admissible set.
    virtual double value(const Matrix& F) const = 0;
    /// dW/dF. The default is a central finite difference of value().
    virtual Matrix gradient(const Matrix& F) const;
    /// d^2W/dFdF. The default is a central finite difference of gradient().
    virtual Tensor4 hessian(const Matrix& F) const;
    virtual bool admissible(const Matrix&) const { return true; }

    /// Closed-form rank-one convex envelope, when known.
    virtual std::optional<double> envelope(const Matrix&) const { return std::nullopt; }

    /// Step used by the finite-difference defaults: 1e-6 (1 + |F|).
    static double fd_step(const Matrix& F);

protected:
    void require_admissible(const Matrix& F) const;
    void require_dim(const Matrix& F) const;
};

using EnergyPtr = std::shared_ptr<const EnergyDensity>;

// ---------------------------------------------------------------------------
// Benchmark densities

/// Kohn-Strang energy, continuous at zero: 1 + |F|^2 outside the ball of
/// radius sqrt(2) - 1, 2 sqrt(2) |F| inside. d = 2.
class KohnStrangEnergy final : public EnergyDensity {
public:
    std::string name() const override { return "ksd"; }
    int dim() const override { return 2; }
    double value(const Matrix& F) const override;
    Matrix gradient(const Matrix& F) const override;
    Tensor4 hessian(const Matrix& F) const override;
    std::optional<double> envelope(const Matrix& F) const override;

    /// rho(F) = sqrt(|F|^2 + 2 |det F|)
    static double rho(const Matrix& F);
};

/// (|F|^2 - 1)^2 in any dimension; envelope is 0 inside the unit ball.
class MultiwellEnergy final : public EnergyDensity {
public:
    std::string name() const override { return "multiwell"; }
    int dim() const override { return 0; }
    double value(const Matrix& F) const override;
    Matrix gradient(const Matrix& F) const override;
    Tensor4 hessian(const Matrix& F) const override;
    std::optional<double> envelope(const Matrix& F) const override;
};

/// Nested-well counterexample built from signed singular values; its
/// rank-one convex envelope vanishes on the ball of radius 3 around 0.
/// Derivatives use the finite-difference defaults.
class FailureEnergy final : public EnergyDensity {
public:
    std::string name() const override { return "fail"; }
    int dim() const override { return 2; }
    double value(const Matrix& F) const override;
    std::optional<double> envelope(const Matrix& F) const override;
};

/// |F|^2, a convex reference used to check that convex input is untouched.
class QuadraticEnergy final : public EnergyDensity {
public:
    std::string name() const override { return "quadratic"; }
    int dim() const override { return 0; }
    double value(const Matrix& F) const override;
    Matrix gradient(const Matrix& F) const override;
    Tensor4 hessian(const Matrix& F) const override;
    std::optional<double> envelope(const Matrix& F) const override { return value(F); }
};

/// L(F) = B : F + c. Affine, so every envelope and tree derivative equals B.
class AffineEnergy final : public EnergyDensity {
public:
    explicit AffineEnergy(Matrix slope, double offset = 0.0) : slope_(slope), offset_(offset) {}
    std::string name() const override { return "affine"; }
    int dim() const override { return slope_.dim(); }
    double value(const Matrix& F) const override { return slope_.ddot(F) + offset_; }
    Matrix gradient(const Matrix&) const override { return slope_; }
    Tensor4 hessian(const Matrix&) const override { return Tensor4(slope_.dim()); }

private:
    Matrix slope_;
    double offset_;
};

double ksd_value(const Matrix& F);
double ksd_envelope(const Matrix& F);
double multiwell_value(const Matrix& F);
double multiwell_envelope(const Matrix& F);
double fail_value(const Matrix& F);

// ---------------------------------------------------------------------------
// Compressible Neo-Hookean effective strain energies. For d = 2 the plane
// strain embedding diag(F, 1) is used, i.e. I1 = tr(F^T F) + 1, J = det F.

struct LameParams {
    double mu = 1.0;
    double lambda = 0.5;
};

/// mu/2 (I1 - 3) - mu ln J + lambda/2 (ln J)^2
class NeoHookeanNH1 final : public EnergyDensity {
public:
    explicit NeoHookeanNH1(LameParams p, int dim = 3) : p_(p), dim_(dim) {}
    std::string name() const override { return "nh1"; }
    int dim() const override { return dim_; }
    double value(const Matrix& F) const override;
    Matrix gradient(const Matrix& F) const override;
    Tensor4 hessian(const Matrix& F) const override;
    bool admissible(const Matrix& F) const override { return det(F) > 0.0; }

private:
    LameParams p_;
    int dim_;
};

/// C1 (J^{-2/3} I1 - 3) + (C1/6 + D1/4)(J^2 + J^{-2} - 2), C1 = mu/2, D1 = lambda/2
class NeoHookeanNH2 final : public EnergyDensity {
public:
    explicit NeoHookeanNH2(LameParams p, int dim = 3) : p_(p), dim_(dim) {}
    std::string name() const override { return "nh2"; }
    int dim() const override { return dim_; }
    double value(const Matrix& F) const override;
    Matrix gradient(const Matrix& F) const override;
    Tensor4 hessian(const Matrix& F) const override;
    bool admissible(const Matrix& F) const override { return det(F) > 0.0; }

private:
    LameParams p_;
    int dim_;
};

}  // namespace hroc
