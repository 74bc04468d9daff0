#pragma once

// Finite-strain continuum damage with an exponential damage function and the
// incremental stress potential obtained by condensing the internal variable.
//
//   psi(F, alpha) = (1 - D(alpha)) psi0(F)
//   D(alpha)      = D_inf (1 - exp(-alpha / D_0))
//   Dbar(alpha)   = int_0^alpha D(s) ds
//   W(F)          = psi(F, alpha) - psi(F_k, alpha_k)
//                   + alpha D(alpha) - alpha_k D(alpha_k) - Dbar(alpha) + Dbar(alpha_k)
//
// dW/dalpha = D'(alpha) (alpha - psi0(F)), so with irreversibility the
// minimizing update is alpha = max(alpha_k, psi0(F)).

#include "hroc/energy.hpp"

namespace hroc {

struct DamageParams {
    double D_inf = 0.9;
    double D_0 = 0.3;

    void validate() const;
};

struct DamageState {
    double alpha = 0.0;  ///< internal variable of the previous increment
    Matrix F;            ///< deformation gradient of the previous increment
};

double damage_D(double alpha, const DamageParams& p);
double damage_Dprime(double alpha, const DamageParams& p);
double damage_Dbar(double alpha, const DamageParams& p);

struct CondensedUpdate {
    double alpha = 0.0;
    double W = 0.0;
};

/// Closed-form condensation of the internal variable for a fixed increment.
/// Throws DomainError if F is inadmissible for psi0.
CondensedUpdate condensed_update(const Matrix& F, const DamageState& state, const EnergyDensity& psi0,
                                 const DamageParams& params);

/// The incremental stress potential W(F) of one load increment, handed to
/// the relaxation engine as an ordinary (nonconvex) energy density.
class IncrementalDamageEnergy final : public EnergyDensity {
public:
    IncrementalDamageEnergy(EnergyPtr psi0, DamageParams params, DamageState state);

    std::string name() const override { return "damage-" + psi0_->name(); }
    int dim() const override { return psi0_->dim(); }
    double value(const Matrix& F) const override;
    Matrix gradient(const Matrix& F) const override;
    Tensor4 hessian(const Matrix& F) const override;
    bool admissible(const Matrix& F) const override { return psi0_->admissible(F); }

    const EnergyDensity& effective() const { return *psi0_; }
    const DamageParams& params() const { return params_; }
    const DamageState& state() const { return state_; }

    /// Internal-variable update at F, alpha = max(alpha_k, psi0(F)).
    double updated_alpha(const Matrix& F) const;

private:
    EnergyPtr psi0_;
    DamageParams params_;
    DamageState state_;
    double constant_ = 0.0;  // terms depending only on the previous increment
};

}  // namespace hroc
