// registry.hpp — builtin example models for the command-line front end
#pragma once

#include <string>
#include <vector>

#include "nmqj/model.hpp"

namespace nmqj {

struct BuiltinInfo {
    std::string name;
    std::string summary;
};

const std::vector<BuiltinInfo>& builtin_models();

// Throws ConfigError for unknown names, and when lamb_shift_enabled is
// requested on a model without a Lamb-shift term.
MasterEquationModel builtin_model(const std::string& name, bool lamb_shift_enabled = false);

}  // namespace nmqj
