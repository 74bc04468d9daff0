#include "hroc/damage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hroc {

void DamageParams::validate() const {
    if (!(D_inf > 0.0 && D_inf < 1.0)) throw std::invalid_argument("damage: D_inf must lie in (0, 1)");
    if (!(D_0 > 0.0)) throw std::invalid_argument("damage: D_0 must be positive");
}

double damage_D(double alpha, const DamageParams& p) { return p.D_inf * (1.0 - std::exp(-alpha / p.D_0)); }

double damage_Dprime(double alpha, const DamageParams& p) {
    return p.D_inf / p.D_0 * std::exp(-alpha / p.D_0);
}

double damage_Dbar(double alpha, const DamageParams& p) {
    // expm1 keeps the small-alpha regime accurate: D_inf (alpha - D_0 (1 - e^{-alpha/D_0}))
    return p.D_inf * (alpha + p.D_0 * std::expm1(-alpha / p.D_0));
}

CondensedUpdate condensed_update(const Matrix& F, const DamageState& state, const EnergyDensity& psi0,
                                 const DamageParams& params) {
    IncrementalDamageEnergy W(std::shared_ptr<const EnergyDensity>(&psi0, [](const EnergyDensity*) {}), params,
                              state);
    if (!psi0.admissible(F)) throw DomainError("condensed_update: inadmissible deformation gradient");
    return {W.updated_alpha(F), W.value(F)};
}

IncrementalDamageEnergy::IncrementalDamageEnergy(EnergyPtr psi0, DamageParams params, DamageState state)
    : psi0_(std::move(psi0)), params_(params), state_(state) {
    params_.validate();
    if (state_.alpha < 0.0) throw std::invalid_argument("damage: alpha_k must be >= 0");
    if (state_.F.dim() == 0) state_.F = Matrix::identity(psi0_->dim() == 0 ? 3 : psi0_->dim());
    const double ak = state_.alpha;
    const double Dk = damage_D(ak, params_);
    const double psi_k = psi0_->value(state_.F);
    if (!std::isfinite(psi_k)) throw DomainError("damage: previous deformation gradient inadmissible");
    constant_ = -(1.0 - Dk) * psi_k - ak * Dk + damage_Dbar(ak, params_);
}

double IncrementalDamageEnergy::updated_alpha(const Matrix& F) const {
    return std::max(state_.alpha, psi0_->value(F));
}

double IncrementalDamageEnergy::value(const Matrix& F) const {
    const double p0 = psi0_->value(F);
    if (!std::isfinite(p0)) return std::numeric_limits<double>::infinity();
    const double alpha = std::max(state_.alpha, p0);
    const double D = damage_D(alpha, params_);
    return (1.0 - D) * p0 + alpha * D - damage_Dbar(alpha, params_) + constant_;
}

Matrix IncrementalDamageEnergy::gradient(const Matrix& F) const {
    const double alpha = updated_alpha(F);
    // dW/dalpha vanishes on the evolution branch, so only the explicit F
    // dependence survives.
    return (1.0 - damage_D(alpha, params_)) * psi0_->gradient(F);
}

Tensor4 IncrementalDamageEnergy::hessian(const Matrix& F) const {
    const double p0 = psi0_->value(F);
    const double alpha = std::max(state_.alpha, p0);
    Tensor4 A = (1.0 - damage_D(alpha, params_)) * psi0_->hessian(F);
    if (p0 > state_.alpha) {
        const Matrix g = psi0_->gradient(F);
        A.axpy(-damage_Dprime(alpha, params_), Tensor4::outer(g, g));
    }
    return A;
}

}  // namespace hroc
