#pragma once

#include <string>
#include <vector>

#include "tabtree/registry.hpp"
#include "tabtree/store.hpp"

namespace tabtree {

// A parsed configuration file: pipeline settings plus custom categories
// (transformdict/processdict sections). Unknown pipeline keys are accepted
// with a warning; a processdict functionpointer clones the referenced
// category's process entry before applying overrides.
struct ConfigFile {
    PipelineConfig pipeline;
    std::vector<TransformCategory> extensions;
    std::vector<std::string> warnings;
};

ConfigFile parse_config_text(const std::string& json_text, const Registry& base);
ConfigFile load_config(const std::string& path, const Registry& base);

// Emits the fully resolved form; parse(emit(parse(x))) is a fixed point.
std::string emit_config_text(const ConfigFile& config);

Registry registry_with_extensions(const Registry& base,
                                  const std::vector<TransformCategory>& extensions);

}  // namespace tabtree
