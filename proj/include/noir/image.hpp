#pragma once

#include <cstdint>
#include <vector>

#include "noir/errors.hpp"

namespace noir {

// Grayscale image, values in [0,1], row-major.
struct GrayImage {
    int64_t rows = 0;
    int64_t cols = 0;
    std::vector<float> v;

    GrayImage() = default;
    GrayImage(int64_t rows_, int64_t cols_, float fill = 0.0f)
        : rows(rows_), cols(cols_), v(static_cast<size_t>(rows_ * cols_), fill) {}

    float& at(int64_t r, int64_t c) { return v[static_cast<size_t>(r * cols + c)]; }
    float at(int64_t r, int64_t c) const { return v[static_cast<size_t>(r * cols + c)]; }
};

// Label image, entries in {0, ..., n_classes-1}, row-major.
struct MaskImage {
    int64_t rows = 0;
    int64_t cols = 0;
    int n_classes = 2;
    std::vector<uint8_t> v;

    MaskImage() = default;
    MaskImage(int64_t rows_, int64_t cols_, int n_classes_)
        : rows(rows_), cols(cols_), n_classes(n_classes_), v(static_cast<size_t>(rows_ * cols_), 0) {}

    uint8_t& at(int64_t r, int64_t c) { return v[static_cast<size_t>(r * cols + c)]; }
    uint8_t at(int64_t r, int64_t c) const { return v[static_cast<size_t>(r * cols + c)]; }
};

// Area-weighted (box filter) resize for intensities; exact block mean when
// sizes divide evenly.
GrayImage downsample_area(const GrayImage& src, int64_t rows, int64_t cols);

// Nearest-neighbor resampling at the destination cell centers, for masks.
MaskImage downsample_nearest(const MaskImage& src, int64_t rows, int64_t cols);

// 3x3 box blur with clamp-to-edge borders.
GrayImage box_blur3(const GrayImage& src);

}  // namespace noir
