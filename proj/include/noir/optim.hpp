#pragma once

#include <vector>

#include "noir/tensor.hpp"

namespace noir {

enum class OptKind { Sgd, AdamW };

// Optimizer state over a flat list of parameter tensors. Updates are a
// deterministic function of (state, params, grads): same inputs, bit-identical
// outputs. AdamW moment buffers are allocated on the first step and shape-
// checked afterwards.
struct OptimizerState {
    OptKind kind = OptKind::Sgd;
    float lr = 1e-2f;
    float weight_decay = 0.0f;
    float beta1 = 0.9f;
    float beta2 = 0.999f;
    float eps_adam = 1e-8f;
    int64_t step_count = 0;

    std::vector<Tensor> m;  // first moments (AdamW)
    std::vector<Tensor> v;  // second moments (AdamW)

    static OptimizerState sgd(float lr);
    static OptimizerState adamw(float lr, float weight_decay = 0.0f, float beta1 = 0.9f,
                                float beta2 = 0.999f, float eps = 1e-8f);

    // SGD: p -= lr*g. AdamW: decoupled decay p *= (1 - lr*wd), then
    // bias-corrected moment update. Throws ShapeError on mismatched shapes.
    void step(std::vector<Tensor>& params, const std::vector<Tensor>& grads);
};

}  // namespace noir
