#pragma once

#include "hroc/energy.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace hroc {

using ModelParams = std::map<std::string, double, std::less<>>;

struct ModelInfo {
    std::string name;
    int default_dim;                     ///< dimension used when none is given
    bool dim_fixed;                      ///< true if only default_dim is valid
    ModelParams defaults;                ///< every accepted key with its default
};

/// Known models: ksd, multiwell, fail, quadratic, damage-nh1, damage-nh2.
const std::vector<ModelInfo>& model_catalog();
const ModelInfo& model_info(std::string_view name);

/// Builds a model from its name and a flat parameter block. Unknown names or
/// parameter keys, and unsupported dimensions, throw std::invalid_argument.
/// dim = 0 selects the model's default dimension.
EnergyPtr make_energy(std::string_view name, const ModelParams& params = {}, int dim = 0);

}  // namespace hroc
