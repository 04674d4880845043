#pragma once

#include <string>
#include <vector>

#include "cellforge/model/types.hpp"

namespace cellforge::model {

// Module library file: a JSON list of module specs. Compositions are
// referenced as ordered lists of module ids.
std::vector<ModuleSpec> load_module_library(const std::string& path);
void save_module_library(const std::vector<ModuleSpec>& specs,
                         const std::string& path);

// Builds a composition from module ids resolved against a library.
Composition composition_from_ids(const std::vector<ModuleSpec>& library,
                                 const std::vector<std::string>& ids);

// Composition file: {"schema": "cellforge-composition/1", "modules": [ids...]}.
std::vector<std::string> load_composition_ids(const std::string& path);
void save_composition_ids(const std::vector<std::string>& ids,
                          const std::string& path);

}  // namespace cellforge::model
