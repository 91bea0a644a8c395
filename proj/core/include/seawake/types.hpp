#pragma once

#include <cmath>

namespace seawake {

// Image-space point, pixels. x grows right, y grows down.
struct PixelPoint {
    double x = 0.0;
    double y = 0.0;
};

inline double pixel_distance(const PixelPoint& a, const PixelPoint& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

}  // namespace seawake
