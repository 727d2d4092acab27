#include "noir/inr.hpp"

#include <cmath>

#include "noir/optim.hpp"

namespace noir {

FinalAct final_act_from_string(const std::string& name) {
    if (name == "Sigmoid" || name == "sigmoid") return FinalAct::Sigmoid;
    if (name == "Softmax" || name == "softmax") return FinalAct::Softmax;
    if (name == "None" || name == "none") return FinalAct::None;
    throw ConfigError("final activation: unknown '" + name + "' (want Sigmoid, Softmax or None)");
}

std::string to_string(FinalAct act) {
    switch (act) {
        case FinalAct::Sigmoid: return "Sigmoid";
        case FinalAct::Softmax: return "Softmax";
        case FinalAct::None: return "None";
    }
    return "?";
}

void SirenConfig::validate() const {
    if (in_dim < 1 || out_dim < 1 || n_hidden_layers < 1 || hidden_size < 1 || latent_dim < 1 ||
        hyper_hidden_size < 1) {
        throw ConfigError("siren config: all dimensions must be >= 1");
    }
    if (final_activation == FinalAct::Softmax && out_dim < 2) {
        throw ConfigError("siren config: softmax final activation requires out_dim >= 2");
    }
    if (omega0 <= 0.0f) throw ConfigError("siren config: omega0 must be > 0");
}

namespace {

Tensor uniform_init(std::vector<int64_t> shape, float bound, Rng& rng) {
    Tensor t = Tensor::zeros(std::move(shape));
    for (float& v : t.data) v = rng.uniform(-bound, bound);
    return t;
}

}  // namespace

SharedParams init_shared_params(const SirenConfig& cfg, Rng& rng) {
    cfg.validate();
    SharedParams p;
    const int64_t h = cfg.hidden_size;
    // SIREN scheme: first layer U(-1/d, 1/d), deeper layers U(-sqrt(6/fan_in)/omega0, +)
    p.trunk.push_back({uniform_init({h, cfg.in_dim}, 1.0f / static_cast<float>(cfg.in_dim), rng),
                       Tensor::zeros({h})});
    const float hidden_bound = std::sqrt(6.0f / static_cast<float>(h)) / cfg.omega0;
    for (int l = 1; l < cfg.n_hidden_layers; ++l) {
        p.trunk.push_back({uniform_init({h, h}, hidden_bound, rng), Tensor::zeros({h})});
    }
    p.final_layer = {uniform_init({cfg.out_dim, h}, hidden_bound, rng), Tensor::zeros({cfg.out_dim})};
    return p;
}

Hypernet init_hypernet(const SirenConfig& cfg, Rng& rng) {
    cfg.validate();
    Hypernet hn;
    const float bound = std::sqrt(6.0f / static_cast<float>(cfg.latent_dim)) / cfg.omega0;
    hn.hidden = {uniform_init({cfg.hyper_hidden_size, cfg.latent_dim}, bound, rng),
                 Tensor::zeros({cfg.hyper_hidden_size})};
    // zero-initialized output layer: gamma = 0 for any z at initialization
    hn.out = {Tensor::zeros({cfg.modulation_count(), cfg.hyper_hidden_size}),
              Tensor::zeros({cfg.modulation_count()})};
    return hn;
}

std::vector<Tensor*> param_ptrs(SharedParams& p) {
    std::vector<Tensor*> out;
    for (DenseLayer& l : p.trunk) {
        out.push_back(&l.W);
        out.push_back(&l.b);
    }
    out.push_back(&p.final_layer.W);
    out.push_back(&p.final_layer.b);
    return out;
}

std::vector<Tensor*> param_ptrs(Hypernet& h) {
    return {&h.hidden.W, &h.hidden.b, &h.out.W, &h.out.b};
}

InrVals stage_inr(Tape& t, const SharedParams& p, bool trainable) {
    InrVals v;
    for (const DenseLayer& l : p.trunk) {
        Val w = trainable ? t.leaf(l.W) : t.constant(l.W);
        Val b = trainable ? t.leaf(l.b) : t.constant(l.b);
        v.trunk.emplace_back(w, b);
    }
    v.final_w = trainable ? t.leaf(p.final_layer.W) : t.constant(p.final_layer.W);
    v.final_b = trainable ? t.leaf(p.final_layer.b) : t.constant(p.final_layer.b);
    return v;
}

HyperVals stage_hypernet(Tape& t, const Hypernet& h, bool trainable) {
    HyperVals v;
    v.hidden_w = trainable ? t.leaf(h.hidden.W) : t.constant(h.hidden.W);
    v.hidden_b = trainable ? t.leaf(h.hidden.b) : t.constant(h.hidden.b);
    v.out_w = trainable ? t.leaf(h.out.W) : t.constant(h.out.W);
    v.out_b = trainable ? t.leaf(h.out.b) : t.constant(h.out.b);
    return v;
}

Val hypernet_forward(Tape& t, const HyperVals& h, Val z, const SirenConfig& cfg) {
    const Tensor& Z = t.value(z);
    if (Z.ndim() != 1 || Z.shape[0] != cfg.latent_dim) {
        throw ShapeError("hypernet: latent must be (" + std::to_string(cfg.latent_dim) + "), got " +
                         Z.shape_str());
    }
    Val hidden = sine(t, linear(t, h.hidden_w, h.hidden_b, z), cfg.omega0);
    return linear(t, h.out_w, h.out_b, hidden);
}

Val inr_forward(Tape& t, const InrVals& p, Val coords, Val gamma, const SirenConfig& cfg) {
    const Tensor& X = t.value(coords);
    if (X.ndim() != 2 || X.shape[1] != cfg.in_dim) {
        throw ShapeError("inr_forward: coords must be (N," + std::to_string(cfg.in_dim) + "), got " +
                         X.shape_str());
    }
    if (static_cast<int>(p.trunk.size()) != cfg.n_hidden_layers) {
        throw ShapeError("inr_forward: config declares " + std::to_string(cfg.n_hidden_layers) +
                         " hidden layers, params have " + std::to_string(p.trunk.size()));
    }
    if (gamma.valid()) {
        const Tensor& G = t.value(gamma);
        if (G.ndim() != 1 || G.shape[0] != cfg.modulation_count()) {
            throw ShapeError("inr_forward: gamma must be (" + std::to_string(cfg.modulation_count()) +
                             "), got " + G.shape_str());
        }
    }

    Val h = coords;
    for (int l = 0; l < cfg.n_hidden_layers; ++l) {
        Val pre = linear(t, p.trunk[static_cast<size_t>(l)].first, p.trunk[static_cast<size_t>(l)].second, h);
        if (gamma.valid()) {
            Val shift = slice1d(t, gamma, static_cast<int64_t>(l) * cfg.hidden_size, cfg.hidden_size);
            pre = add_rowvec(t, pre, shift);
        }
        h = sine(t, pre, cfg.omega0);
    }
    Val out = linear(t, p.final_w, p.final_b, h);
    switch (cfg.final_activation) {
        case FinalAct::Sigmoid: return sigmoid(t, out);
        case FinalAct::Softmax: return softmax(t, out);
        case FinalAct::None: return out;
    }
    throw ContractError("inr_forward: unknown final activation");
}

Val task_loss(Tape& t, Val pred, Val target, FinalAct act) {
    if (act == FinalAct::Softmax) return cross_entropy_loss(t, pred, target);
    return mse_loss(t, pred, target);
}

Tensor hypernet_values(const Tensor& z, const Hypernet& psi, const SirenConfig& cfg) {
    Tape t;
    HyperVals h = stage_hypernet(t, psi, false);
    return t.value(hypernet_forward(t, h, t.constant(z), cfg));
}

Tensor inr_values(const Tensor& coords, const SharedParams& theta, const Tensor& gamma,
                  const SirenConfig& cfg) {
    Tape t;
    InrVals p = stage_inr(t, theta, false);
    Val g = gamma.numel() > 0 ? t.constant(gamma) : Val{};
    return t.value(inr_forward(t, p, t.constant(coords), g, cfg));
}

Tensor render_grid(const SharedParams& theta, const Tensor& gamma, const SirenConfig& cfg,
                   const std::vector<int64_t>& resolution) {
    if (static_cast<int>(resolution.size()) != cfg.in_dim) {
        throw ShapeError("render_grid: resolution rank " + std::to_string(resolution.size()) +
                         " does not match in_dim " + std::to_string(cfg.in_dim));
    }
    for (int64_t s : resolution) {
        if (s < 1) throw ContractError("render_grid: resolution must be >= 1 per axis");
    }
    Tensor values = inr_values(grid_coords(resolution), theta, gamma, cfg);
    std::vector<int64_t> img_shape = resolution;
    img_shape.push_back(cfg.out_dim);
    return Tensor(std::move(img_shape), std::move(values.data));
}

GrayImage gray_from_render(const Tensor& img) {
    if (img.ndim() != 3 || img.shape[2] != 1) {
        throw ShapeError("gray_from_render: want (rows,cols,1), got " + img.shape_str());
    }
    GrayImage g(img.shape[0], img.shape[1]);
    g.v = img.data;
    return g;
}

MaskImage mask_from_render(const Tensor& img) {
    if (img.ndim() != 3 || img.shape[2] < 2) {
        throw ShapeError("mask_from_render: want (rows,cols,c>=2), got " + img.shape_str());
    }
    Tensor values({img.shape[0] * img.shape[1], img.shape[2]}, img.data);
    return mask_from_values(values, img.shape[0], img.shape[1]);
}

namespace {

// gather rows of a (N,c) tensor
Tensor gather_rows(const Tensor& src, const std::vector<int>& idx) {
    const int64_t c = src.shape[1];
    Tensor out = Tensor::zeros({static_cast<int64_t>(idx.size()), c});
    for (size_t i = 0; i < idx.size(); ++i) {
        const float* s = src.data.data() + static_cast<int64_t>(idx[i]) * c;
        std::copy(s, s + c, out.data.begin() + static_cast<int64_t>(i) * c);
    }
    return out;
}

}  // namespace

Tensor fit_latent(const SignalSample& signal, const SharedParams& theta, const Hypernet& psi,
                  const SirenConfig& cfg, const FitOptions& opt) {
    const int64_t n = signal.n_points();
    if (n == 0) throw ContractError("fit_latent: empty signal");
    if (opt.steps < 0) throw ContractError("fit_latent: K must be >= 0");
    if (opt.n_points < 1) throw ContractError("fit_latent: n_points must be >= 1");

    Tensor z = Tensor::zeros({cfg.latent_dim});
    Rng rng(opt.seed);
    OptimizerState sgd = OptimizerState::sgd(opt.lr);

    for (int step = 0; step < opt.steps; ++step) {
        Tensor coords, targets;
        if (static_cast<int64_t>(opt.n_points) < n) {
            std::vector<int> idx = rng.sample_without_replacement(static_cast<int>(n), opt.n_points);
            coords = gather_rows(signal.coords, idx);
            targets = gather_rows(signal.values, idx);
        } else {
            coords = signal.coords;
            targets = signal.values;
        }

        Tape t;
        Val zv = t.leaf(z);
        InrVals p = stage_inr(t, theta, false);
        HyperVals h = stage_hypernet(t, psi, false);
        Val gamma = hypernet_forward(t, h, zv, cfg);
        Val pred = inr_forward(t, p, t.constant(std::move(coords)), gamma, cfg);
        Val loss = task_loss(t, pred, t.constant(std::move(targets)), cfg.final_activation);
        t.backward(loss);

        std::vector<Tensor> params{std::move(z)};
        std::vector<Tensor> grads{t.grad(zv)};
        sgd.step(params, grads);
        z = std::move(params[0]);
        require_finite(z, "fit_latent: latent");
    }
    return z;
}

}  // namespace noir
