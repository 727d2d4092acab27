#pragma once

#include <functional>
#include <vector>

#include "noir/tensor.hpp"

namespace noir {

// Handle to a node on a Tape. Only meaningful together with the tape that
// produced it.
struct Val {
    int id = -1;
    bool valid() const { return id >= 0; }
};

enum class Act { Sine, Sigmoid, Softmax, Silu, Relu };

// Define-by-run reverse-mode tape. A fresh tape is built per forward pass;
// nodes are recorded in evaluation order, so reverse iteration is a valid
// topological order for backpropagation. Single-threaded during record and
// backward; distinct tapes may live on distinct threads.
class Tape {
public:
    // Trainable parameter; receives a gradient from backward().
    Val leaf(Tensor value);
    // Input data; gradients are not propagated into constants.
    Val constant(Tensor value);

    const Tensor& value(Val v) const;
    bool is_leaf(Val v) const;
    bool requires_grad(Val v) const;
    int size() const { return static_cast<int>(nodes_.size()); }

    // Reverse-mode pass from a scalar loss. Gradients for all leaves are
    // available via grad() afterwards; leaves the loss never touched get
    // zeros. Throws ContractError on a non-scalar loss.
    void backward(Val scalar_loss);

    const Tensor& grad(Val v);

    // --- recording interface used by the ops ---
    // `self` is the recorded node, so closures can reuse forward outputs.
    using BackwardFn = std::function<void(Tape&, Val self, const Tensor& grad_out)>;
    Val record(Tensor value, bool requires_grad, BackwardFn backward);
    // Accumulation target for node `id`; allocated as zeros on first touch.
    Tensor& grad_buf(int id);
    bool grad_touched(int id) const;

private:
    struct Node {
        Tensor value;
        bool requires_grad = false;
        bool is_leaf = false;
        BackwardFn backward;
    };
    std::vector<Node> nodes_;
    std::vector<Tensor> grads_;
    std::vector<char> touched_;
    bool ran_backward_ = false;

    const Node& node(Val v) const;
};

// ---- primitive operations -------------------------------------------------
// All ops validate shapes and record the backward closure on the tape.

// W (m,n), b (m), x (n) or batch (N,n) -> (m) / (N,m); y = Wx + b per row.
Val linear(Tape& t, Val w, Val b, Val x);

// Elementwise; operands must have identical shapes.
Val add(Tape& t, Val a, Val b);
Val sub(Tape& t, Val a, Val b);
Val mul(Tape& t, Val a, Val b);

// m (N,k) + row vector v (k) broadcast over rows.
Val add_rowvec(Tape& t, Val m, Val v);

Val scale(Tape& t, Val x, float c);
Val add_const(Tape& t, Val x, float c);
Val square(Tape& t, Val x);
Val log_op(Tape& t, Val x);

// activation(u): sine uses sin(omega0*u); softmax is per-row over the last
// axis (1-D tensors are a single row).
Val activation(Tape& t, Val x, Act kind, float omega0 = 30.0f);
Val sine(Tape& t, Val x, float omega0);
Val sigmoid(Tape& t, Val x);
Val softmax(Tape& t, Val x);
Val silu(Tape& t, Val x);
Val relu(Tape& t, Val x);

// Full reductions to a scalar (shape {1}); accumulate in double.
Val sum(Tape& t, Val x);
Val mean(Tape& t, Val x);

// View of a contiguous range of a 1-D tensor.
Val slice1d(Tape& t, Val x, int64_t offset, int64_t len);

// Same data, new shape (numel must match).
Val reshape(Tape& t, Val x, std::vector<int64_t> shape);

// Elementwise dropout with inverted scaling 1/(1-rate); mask drawn from the
// given seed. rate = 0 is the identity.
Val dropout(Tape& t, Val x, float rate, uint64_t seed);

// mean((pred - target)^2) over all elements.
Val mse_loss(Tape& t, Val pred, Val target);

// -mean over rows of sum_c target*log(prob + eps); targets are one-hot rows.
Val cross_entropy_loss(Tape& t, Val probs, Val onehot_target);

}  // namespace noir
