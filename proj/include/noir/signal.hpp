#pragma once

#include <vector>

#include "noir/image.hpp"
#include "noir/tensor.hpp"

namespace noir {

// A discrete signal: N coordinates in [-1,1]^d with per-point channel values.
// Grid-sampled signals keep their per-axis sizes; categorical values are
// one-hot rows.
struct SignalSample {
    Tensor coords;  // N x d
    Tensor values;  // N x c
    std::vector<int64_t> native_resolution;
    bool categorical = false;

    int64_t n_points() const { return coords.ndim() == 2 ? coords.shape[0] : 0; }
    int64_t channels() const { return values.ndim() == 2 ? values.shape[1] : 0; }
};

// Cell-centered regular grid of [-1,1]^d, row-major with axis 0 slowest.
// Axis i at size n has centers -1 + (2k+1)/n.
Tensor grid_coords(const std::vector<int64_t>& resolution);

SignalSample signal_from_gray(const GrayImage& img);
SignalSample signal_from_mask(const MaskImage& mask);

// Inverse conversions for rendered value tensors of shape (rows*cols, c).
GrayImage gray_from_values(const Tensor& values, int64_t rows, int64_t cols);
MaskImage mask_from_values(const Tensor& values, int64_t rows, int64_t cols);  // argmax over channels

}  // namespace noir
