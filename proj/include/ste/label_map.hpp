#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace ste {

/// Per-frame instance id map. 0 is background, positive values are instance
/// ids that stay stable across the frames of a sequence.
struct InstanceLabelMap {
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<int> ids; // row-major, height*width

    InstanceLabelMap() = default;
    InstanceLabelMap(std::size_t h, std::size_t w, int fill = 0)
        : height(h), width(w), ids(h * w, fill) {}

    int& at(std::size_t y, std::size_t x) { return ids[y * width + x]; }
    int at(std::size_t y, std::size_t x) const { return ids[y * width + x]; }
};

} // namespace ste
