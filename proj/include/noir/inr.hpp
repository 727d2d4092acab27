#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "noir/graph.hpp"
#include "noir/rng.hpp"
#include "noir/signal.hpp"

namespace noir {

enum class FinalAct { Sigmoid, Softmax, None };

FinalAct final_act_from_string(const std::string& name);
std::string to_string(FinalAct act);

// Architecture of one modulated sine network plus its hypernetwork.
struct SirenConfig {
    int in_dim = 2;
    int out_dim = 1;
    int n_hidden_layers = 6;
    int hidden_size = 256;
    float omega0 = 30.0f;
    FinalAct final_activation = FinalAct::Sigmoid;
    int latent_dim = 64;
    int hyper_hidden_size = 64;

    // one additive shift per hidden unit per trunk hidden layer
    int64_t modulation_count() const {
        return static_cast<int64_t>(n_hidden_layers) * hidden_size;
    }
    void validate() const;
};

struct DenseLayer {
    Tensor W, b;
};

// Dataset-level shared trunk weights (theta).
struct SharedParams {
    std::vector<DenseLayer> trunk;
    DenseLayer final_layer;
};

// Latent-to-modulation network (psi): one sine hidden layer, zero-initialized
// output layer so gamma = 0 at initialization.
struct Hypernet {
    DenseLayer hidden;
    DenseLayer out;
};

SharedParams init_shared_params(const SirenConfig& cfg, Rng& rng);
Hypernet init_hypernet(const SirenConfig& cfg, Rng& rng);

// Flat parameter views, ordered trunk (W,b)..., final (W,b) | hidden, out.
std::vector<Tensor*> param_ptrs(SharedParams& p);
std::vector<Tensor*> param_ptrs(Hypernet& h);

// ---- graph-building forward passes -------------------------------------

struct InrVals {
    std::vector<std::pair<Val, Val>> trunk;  // (W, b) per hidden layer
    Val final_w, final_b;
};

struct HyperVals {
    Val hidden_w, hidden_b, out_w, out_b;
};

// Put parameters on a tape, as leaves (trainable) or constants (frozen).
InrVals stage_inr(Tape& t, const SharedParams& p, bool trainable);
HyperVals stage_hypernet(Tape& t, const Hypernet& h, bool trainable);

// gamma = M_psi(z), a flat vector of per-layer shifts.
Val hypernet_forward(Tape& t, const HyperVals& h, Val z, const SirenConfig& cfg);

// Modulated forward: h <- sin(omega0 * (W h + b + s_l)) per hidden layer,
// then linear + final activation. Pass an invalid gamma for the unmodulated
// network.
Val inr_forward(Tape& t, const InrVals& p, Val coords, Val gamma, const SirenConfig& cfg);

// MSE for continuous outputs, cross-entropy against one-hot rows for softmax.
Val task_loss(Tape& t, Val pred, Val target, FinalAct act);

// ---- plain evaluation entry points --------------------------------------

Tensor hypernet_values(const Tensor& z, const Hypernet& psi, const SirenConfig& cfg);
Tensor inr_values(const Tensor& coords, const SharedParams& theta, const Tensor& gamma,
                  const SirenConfig& cfg);

// Evaluate on the cell-centered grid of [-1,1]^d; returns an image tensor of
// shape (resolution..., out_dim).
Tensor render_grid(const SharedParams& theta, const Tensor& gamma, const SirenConfig& cfg,
                   const std::vector<int64_t>& resolution);

GrayImage gray_from_render(const Tensor& img);
MaskImage mask_from_render(const Tensor& img);

// ---- test-time latent fitting (auto-decoding) ----------------------------

struct FitOptions {
    int steps = 10;       // K
    float lr = 1e-2f;     // inner-loop alpha
    int n_points = 2048;  // coordinates sampled per step
    uint64_t seed = 0;
};

// Algorithm: z starts at zero; each step samples n_points coordinates
// (without replacement when n_points <= N, otherwise all N), evaluates the
// task loss of the modulated INR against the signal there, and applies one
// SGD step on z only. theta/psi are never modified.
Tensor fit_latent(const SignalSample& signal, const SharedParams& theta, const Hypernet& psi,
                  const SirenConfig& cfg, const FitOptions& opt);

}  // namespace noir
