#include "noir/signal.hpp"

namespace noir {

Tensor grid_coords(const std::vector<int64_t>& resolution) {
    const int d = static_cast<int>(resolution.size());
    if (d < 1) throw ContractError("grid_coords: empty resolution");
    int64_t n = 1;
    for (int64_t s : resolution) {
        if (s < 1) throw ContractError("grid_coords: axis size must be >= 1");
        n *= s;
    }
    Tensor coords = Tensor::zeros({n, d});
    std::vector<int64_t> idx(static_cast<size_t>(d), 0);
    for (int64_t p = 0; p < n; ++p) {
        for (int a = 0; a < d; ++a) {
            float na = static_cast<float>(resolution[static_cast<size_t>(a)]);
            coords.data[static_cast<size_t>(p * d + a)] =
                -1.0f + static_cast<float>(2 * idx[static_cast<size_t>(a)] + 1) / na;
        }
        for (int a = d - 1; a >= 0; --a) {
            if (++idx[static_cast<size_t>(a)] < resolution[static_cast<size_t>(a)]) break;
            idx[static_cast<size_t>(a)] = 0;
        }
    }
    return coords;
}

SignalSample signal_from_gray(const GrayImage& img) {
    SignalSample s;
    s.native_resolution = {img.rows, img.cols};
    s.coords = grid_coords(s.native_resolution);
    s.values = Tensor::zeros({img.rows * img.cols, 1});
    for (size_t i = 0; i < img.v.size(); ++i) s.values.data[i] = img.v[i];
    s.categorical = false;
    return s;
}

SignalSample signal_from_mask(const MaskImage& mask) {
    SignalSample s;
    s.native_resolution = {mask.rows, mask.cols};
    s.coords = grid_coords(s.native_resolution);
    s.values = Tensor::zeros({mask.rows * mask.cols, mask.n_classes});
    for (size_t i = 0; i < mask.v.size(); ++i) {
        s.values.data[i * static_cast<size_t>(mask.n_classes) + mask.v[i]] = 1.0f;
    }
    s.categorical = true;
    return s;
}

GrayImage gray_from_values(const Tensor& values, int64_t rows, int64_t cols) {
    if (values.ndim() != 2 || values.shape[0] != rows * cols || values.shape[1] != 1) {
        throw ShapeError("gray_from_values: want (" + std::to_string(rows * cols) + ",1), got " +
                         values.shape_str());
    }
    GrayImage img(rows, cols);
    for (size_t i = 0; i < img.v.size(); ++i) img.v[i] = values.data[i];
    return img;
}

MaskImage mask_from_values(const Tensor& values, int64_t rows, int64_t cols) {
    if (values.ndim() != 2 || values.shape[0] != rows * cols || values.shape[1] < 2) {
        throw ShapeError("mask_from_values: want (" + std::to_string(rows * cols) + ",c>=2), got " +
                         values.shape_str());
    }
    const int64_t c = values.shape[1];
    MaskImage mask(rows, cols, static_cast<int>(c));
    for (int64_t p = 0; p < rows * cols; ++p) {
        int best = 0;
        float best_v = values.data[static_cast<size_t>(p * c)];
        for (int k = 1; k < c; ++k) {
            float v = values.data[static_cast<size_t>(p * c + k)];
            if (v > best_v) {
                best_v = v;
                best = k;
            }
        }
        mask.v[static_cast<size_t>(p)] = static_cast<uint8_t>(best);
    }
    return mask;
}

}  // namespace noir
