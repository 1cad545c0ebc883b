#pragma once

#include <string>
#include <vector>

namespace zpgd {

struct GalleryEntry {
    std::string name;
    std::string description;
    std::string yaml;
};

/// Bundled scenario files, one or more per acceptance property.
const std::vector<GalleryEntry>& scenario_gallery();

/// nullptr when the name is unknown.
const GalleryEntry* find_scenario(const std::string& name);

}  // namespace zpgd
