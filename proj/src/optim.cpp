#include "noir/optim.hpp"

#include <cmath>

namespace noir {

OptimizerState OptimizerState::sgd(float lr) {
    OptimizerState s;
    s.kind = OptKind::Sgd;
    s.lr = lr;
    return s;
}

OptimizerState OptimizerState::adamw(float lr, float weight_decay, float beta1, float beta2, float eps) {
    OptimizerState s;
    s.kind = OptKind::AdamW;
    s.lr = lr;
    s.weight_decay = weight_decay;
    s.beta1 = beta1;
    s.beta2 = beta2;
    s.eps_adam = eps;
    return s;
}

void OptimizerState::step(std::vector<Tensor>& params, const std::vector<Tensor>& grads) {
    if (params.size() != grads.size()) {
        throw ShapeError("optimizer step: " + std::to_string(params.size()) + " params vs " +
                         std::to_string(grads.size()) + " grads");
    }
    for (size_t i = 0; i < params.size(); ++i) {
        require_same_shape(params[i], grads[i], "optimizer step");
    }

    step_count += 1;

    if (kind == OptKind::Sgd) {
        for (size_t i = 0; i < params.size(); ++i) {
            float* p = params[i].data.data();
            const float* g = grads[i].data.data();
            for (size_t j = 0; j < params[i].data.size(); ++j) p[j] -= lr * g[j];
        }
        return;
    }

    if (m.empty()) {
        for (const Tensor& p : params) {
            m.push_back(Tensor::zeros(p.shape));
            v.push_back(Tensor::zeros(p.shape));
        }
    }
    if (m.size() != params.size()) {
        throw ShapeError("optimizer step: accumulator count does not match parameter count");
    }

    const float bc1 = 1.0f - std::pow(beta1, static_cast<float>(step_count));
    const float bc2 = 1.0f - std::pow(beta2, static_cast<float>(step_count));
    const float decay = 1.0f - lr * weight_decay;

    for (size_t i = 0; i < params.size(); ++i) {
        require_same_shape(params[i], m[i], "optimizer step (moment)");
        float* p = params[i].data.data();
        const float* g = grads[i].data.data();
        float* mi = m[i].data.data();
        float* vi = v[i].data.data();
        for (size_t j = 0; j < params[i].data.size(); ++j) {
            p[j] *= decay;
            mi[j] = beta1 * mi[j] + (1.0f - beta1) * g[j];
            vi[j] = beta2 * vi[j] + (1.0f - beta2) * g[j] * g[j];
            float mhat = mi[j] / bc1;
            float vhat = vi[j] / bc2;
            p[j] -= lr * mhat / (std::sqrt(vhat) + eps_adam);
        }
        require_finite(params[i], "optimizer step (params)");
    }
}

}  // namespace noir
