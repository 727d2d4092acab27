#include "noir/tensor.hpp"

#include <cmath>
#include <sstream>

namespace noir {

int64_t shape_numel(const std::vector<int64_t>& shape) {
    int64_t n = 1;
    for (int64_t d : shape) n *= d;
    return n;
}

std::string shape_to_string(const std::vector<int64_t>& shape) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < shape.size(); ++i) {
        if (i) os << ",";
        os << shape[i];
    }
    os << ")";
    return os.str();
}

Tensor::Tensor(std::vector<int64_t> shape_, std::vector<float> data_)
    : shape(std::move(shape_)), data(std::move(data_)) {
    if (shape_numel(shape) != static_cast<int64_t>(data.size())) {
        throw ShapeError("tensor: shape " + shape_to_string(shape) + " does not match data length " +
                         std::to_string(data.size()));
    }
}

Tensor Tensor::zeros(std::vector<int64_t> shape) {
    Tensor t;
    t.shape = std::move(shape);
    t.data.assign(static_cast<size_t>(shape_numel(t.shape)), 0.0f);
    return t;
}

Tensor Tensor::full(std::vector<int64_t> shape, float value) {
    Tensor t = zeros(std::move(shape));
    for (float& v : t.data) v = value;
    return t;
}

Tensor Tensor::scalar(float value) {
    Tensor t;
    t.shape = {1};
    t.data = {value};
    return t;
}

Tensor Tensor::from(std::vector<int64_t> shape, std::initializer_list<float> values) {
    return Tensor(std::move(shape), std::vector<float>(values));
}

int64_t Tensor::numel() const { return static_cast<int64_t>(data.size()); }

int64_t Tensor::rows() const {
    if (ndim() != 2) throw ShapeError("tensor: rows() on non-2D tensor " + shape_str());
    return shape[0];
}

int64_t Tensor::cols() const {
    if (ndim() != 2) throw ShapeError("tensor: cols() on non-2D tensor " + shape_str());
    return shape[1];
}

float& Tensor::at(int64_t r, int64_t c) { return data[static_cast<size_t>(r * cols() + c)]; }

float Tensor::at(int64_t r, int64_t c) const { return data[static_cast<size_t>(r * cols() + c)]; }

bool Tensor::all_finite() const {
    for (float v : data) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

std::string Tensor::shape_str() const { return shape_to_string(shape); }

void require_same_shape(const Tensor& a, const Tensor& b, const char* what) {
    if (!a.same_shape(b)) {
        throw ShapeError(std::string(what) + ": shape mismatch " + a.shape_str() + " vs " + b.shape_str());
    }
}

void require_finite(const Tensor& t, const char* what) {
    if (!t.all_finite()) {
        throw Error(std::string(what) + ": non-finite values");
    }
}

}  // namespace noir
