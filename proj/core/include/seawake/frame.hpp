#pragma once

#include <cstddef>
#include <vector>

namespace seawake::flow {

// Row-major raster with 1 (luma) or 3 (RGB) channels, samples in [0, 1].
struct Frame {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<double> samples;

    static Frame make(int width, int height, int channels = 1, double fill = 0.0);

    double at(int x, int y, int c = 0) const {
        return samples[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    double& at(int x, int y, int c = 0) {
        return samples[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    std::size_t sample_count() const { return samples.size(); }

    // Throws Error(validation) when dimensions/sample count/range disagree.
    void validate() const;
};

// Rec.601 luma: 0.299 R + 0.587 G + 0.114 B. Identity on 1-channel input.
Frame to_luma(const Frame& frame);

// Bilinear sample with edge replication outside the raster.
double sample_bilinear(const Frame& frame, double x, double y, int c = 0);

// Axis-aligned subregion copy; the region must lie inside the frame.
Frame crop(const Frame& frame, int x, int y, int w, int h);

// Separable Gaussian smoothing with edge replication; sigma <= 0 is identity.
Frame gaussian_smooth(const Frame& frame, double sigma);

// Bilinear resampling to (new_width, new_height) with centre-aligned mapping.
Frame resize_bilinear(const Frame& frame, int new_width, int new_height);

// 5-tap binomial smooth + 2x decimation; output is ((w+1)/2, (h+1)/2).
Frame pyr_down(const Frame& frame);

}  // namespace seawake::flow
