#pragma once

#include <cstdint>
#include <vector>

namespace grasp {

// Interleaved row-major 8-bit raster, 1 or 3 channels.
struct ImageU8 {
    int height = 0;
    int width = 0;
    int channels = 0;
    std::vector<std::uint8_t> data;

    ImageU8() = default;
    ImageU8(int h, int w, int c)
        : height(h), width(w), channels(c),
          data(static_cast<size_t>(h) * w * c, 0) {}

    std::uint8_t& at(int r, int c, int ch) {
        return data[(static_cast<size_t>(r) * width + c) * channels + ch];
    }
    std::uint8_t at(int r, int c, int ch) const {
        return data[(static_cast<size_t>(r) * width + c) * channels + ch];
    }
    size_t pixel_count() const { return static_cast<size_t>(height) * width; }
};

// Raw depth raster with an explicit missing-value mask. `missing[i] != 0`
// marks cells that had no reading; their `values[i]` content is meaningless.
struct DepthRaster {
    int height = 0;
    int width = 0;
    std::vector<double> values;
    std::vector<std::uint8_t> missing;

    DepthRaster() = default;
    DepthRaster(int h, int w)
        : height(h), width(w),
          values(static_cast<size_t>(h) * w, 0.0),
          missing(static_cast<size_t>(h) * w, 1) {}

    double& value(int r, int c) { return values[static_cast<size_t>(r) * width + c]; }
    double value(int r, int c) const { return values[static_cast<size_t>(r) * width + c]; }
    bool is_missing(int r, int c) const {
        return missing[static_cast<size_t>(r) * width + c] != 0;
    }
    void set(int r, int c, double v) {
        const size_t i = static_cast<size_t>(r) * width + c;
        values[i] = v;
        missing[i] = 0;
    }
};

} // namespace grasp
