#include "hroc/registry.hpp"

#include "hroc/damage.hpp"

#include <algorithm>

namespace hroc {

namespace {

ModelParams damage_defaults() {
    // Material-point values of the biaxial damage study.
    return {{"mu", 1.0}, {"lambda", 0.5}, {"D_inf", 0.9}, {"D_0", 0.3}, {"alpha_k", 0.0625}};
}

}  // namespace

const std::vector<ModelInfo>& model_catalog() {
    static const std::vector<ModelInfo> catalog = {
        {"ksd", 2, true, {}},
        {"multiwell", 3, false, {}},
        {"fail", 2, true, {}},
        {"quadratic", 2, false, {}},
        {"damage-nh1", 2, false, damage_defaults()},
        {"damage-nh2", 3, false, damage_defaults()},
    };
    return catalog;
}

const ModelInfo& model_info(std::string_view name) {
    const auto& cat = model_catalog();
    const auto it = std::find_if(cat.begin(), cat.end(), [&](const ModelInfo& m) { return m.name == name; });
    if (it == cat.end()) throw std::invalid_argument("unknown model '" + std::string(name) + "'");
    return *it;
}

EnergyPtr make_energy(std::string_view name, const ModelParams& params, int dim) {
    const ModelInfo& info = model_info(name);
    ModelParams p = info.defaults;
    for (const auto& [key, value] : params) {
        const auto it = p.find(key);
        if (it == p.end())
            throw std::invalid_argument("model '" + info.name + "' has no parameter '" + key + "'");
        it->second = value;
    }
    if (dim == 0) dim = info.default_dim;
    if (dim != 2 && dim != 3) throw std::invalid_argument("model dimension must be 2 or 3");
    if (info.dim_fixed && dim != info.default_dim)
        throw std::invalid_argument("model '" + info.name + "' is defined for d = " +
                                    std::to_string(info.default_dim) + " only");

    if (info.name == "ksd") return std::make_shared<KohnStrangEnergy>();
    if (info.name == "multiwell") return std::make_shared<MultiwellEnergy>();
    if (info.name == "fail") return std::make_shared<FailureEnergy>();
    if (info.name == "quadratic") return std::make_shared<QuadraticEnergy>();

    const LameParams lame{p.at("mu"), p.at("lambda")};
    if (!(lame.mu > 0.0) || !(lame.lambda > 0.0)) throw std::invalid_argument("mu and lambda must be positive");
    EnergyPtr psi0;
    if (info.name == "damage-nh1")
        psi0 = std::make_shared<NeoHookeanNH1>(lame, dim);
    else
        psi0 = std::make_shared<NeoHookeanNH2>(lame, dim);
    DamageParams dp{p.at("D_inf"), p.at("D_0")};
    DamageState state{p.at("alpha_k"), Matrix::identity(dim)};
    return std::make_shared<IncrementalDamageEnergy>(psi0, dp, state);
}

}  // namespace hroc
