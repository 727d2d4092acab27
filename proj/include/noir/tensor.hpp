#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "noir/errors.hpp"

namespace noir {

// Dense row-major float32 array. The only numeric container in the project;
// everything (coordinates, latents, weights, images) lives in one of these.
// NaN/Inf anywhere is an error state, checked at module boundaries.
struct Tensor {
    std::vector<int64_t> shape;
    std::vector<float> data;

    Tensor() = default;
    Tensor(std::vector<int64_t> shape_, std::vector<float> data_);

    static Tensor zeros(std::vector<int64_t> shape);
    static Tensor full(std::vector<int64_t> shape, float value);
    static Tensor scalar(float value);
    static Tensor from(std::vector<int64_t> shape, std::initializer_list<float> values);

    int64_t numel() const;
    int ndim() const { return static_cast<int>(shape.size()); }
    bool same_shape(const Tensor& other) const { return shape == other.shape; }
    bool is_scalar() const { return numel() == 1; }

    // 2-D accessors; row-major layout.
    int64_t rows() const;
    int64_t cols() const;
    float& at(int64_t r, int64_t c);
    float at(int64_t r, int64_t c) const;

    bool all_finite() const;
    std::string shape_str() const;
};

int64_t shape_numel(const std::vector<int64_t>& shape);
std::string shape_to_string(const std::vector<int64_t>& shape);

// Throws ShapeError with a message naming `what` when shapes differ.
void require_same_shape(const Tensor& a, const Tensor& b, const char* what);

// Throws Error when any value is NaN/Inf; `what` names the offending tensor.
void require_finite(const Tensor& t, const char* what);

}  // namespace noir
