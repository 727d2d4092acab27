#include "noir/graph.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <utility>

#include "noir/rng.hpp"

namespace noir {

namespace {

using EMat = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapMat = Eigen::Map<EMat>;
using CMapMat = Eigen::Map<const EMat>;
using MapVec = Eigen::Map<Eigen::VectorXf>;
using CMapVec = Eigen::Map<const Eigen::VectorXf>;

CMapMat as_mat(const Tensor& t, int64_t r, int64_t c) { return CMapMat(t.data.data(), r, c); }
MapMat as_mat(Tensor& t, int64_t r, int64_t c) { return MapMat(t.data.data(), r, c); }

}  // namespace

// ---- Tape -------------------------------------------------------------

Val Tape::record(Tensor value, bool requires_grad, BackwardFn backward) {
    Node n;
    n.value = std::move(value);
    n.requires_grad = requires_grad;
    n.backward = std::move(backward);
    nodes_.push_back(std::move(n));
    return Val{static_cast<int>(nodes_.size()) - 1};
}

Val Tape::leaf(Tensor value) {
    Val v = record(std::move(value), true, nullptr);
    nodes_[static_cast<size_t>(v.id)].is_leaf = true;
    return v;
}

Val Tape::constant(Tensor value) { return record(std::move(value), false, nullptr); }

const Tape::Node& Tape::node(Val v) const {
    if (!v.valid() || v.id >= size()) throw ContractError("tape: invalid node handle");
    return nodes_[static_cast<size_t>(v.id)];
}

const Tensor& Tape::value(Val v) const { return node(v).value; }

bool Tape::is_leaf(Val v) const { return node(v).is_leaf; }

bool Tape::requires_grad(Val v) const { return node(v).requires_grad; }

Tensor& Tape::grad_buf(int id) {
    if (!touched_[static_cast<size_t>(id)]) {
        grads_[static_cast<size_t>(id)] = Tensor::zeros(nodes_[static_cast<size_t>(id)].value.shape);
        touched_[static_cast<size_t>(id)] = 1;
    }
    return grads_[static_cast<size_t>(id)];
}

bool Tape::grad_touched(int id) const { return touched_[static_cast<size_t>(id)] != 0; }

void Tape::backward(Val scalar_loss) {
    const Node& loss = node(scalar_loss);
    if (loss.value.numel() != 1) {
        throw ContractError("backward: loss must be scalar, got shape " + loss.value.shape_str());
    }
    grads_.assign(nodes_.size(), Tensor{});
    touched_.assign(nodes_.size(), 0);
    ran_backward_ = true;
    grad_buf(scalar_loss.id).data[0] = 1.0f;
    for (int id = scalar_loss.id; id >= 0; --id) {
        Node& n = nodes_[static_cast<size_t>(id)];
        if (!touched_[static_cast<size_t>(id)] || !n.backward || !n.requires_grad) continue;
        n.backward(*this, Val{id}, grads_[static_cast<size_t>(id)]);
    }
}

const Tensor& Tape::grad(Val v) {
    const Node& n = node(v);
    if (!ran_backward_) throw ContractError("grad: backward() has not run");
    if (!touched_[static_cast<size_t>(v.id)]) {
        // leaf the loss never touched: zero gradient
        grads_[static_cast<size_t>(v.id)] = Tensor::zeros(n.value.shape);
        touched_[static_cast<size_t>(v.id)] = 1;
    }
    return grads_[static_cast<size_t>(v.id)];
}

// ---- ops --------------------------------------------------------------

Val linear(Tape& t, Val w, Val b, Val x) {
    const Tensor& W = t.value(w);
    const Tensor& B = t.value(b);
    const Tensor& X = t.value(x);
    if (W.ndim() != 2) throw ShapeError("linear: W must be 2-D, got " + W.shape_str());
    const int64_t m = W.shape[0], n = W.shape[1];
    if (B.ndim() != 1 || B.shape[0] != m) {
        throw ShapeError("linear: b must be (" + std::to_string(m) + "), got " + B.shape_str());
    }
    bool batched = X.ndim() == 2;
    if (!batched && X.ndim() != 1) throw ShapeError("linear: x must be 1-D or 2-D, got " + X.shape_str());
    const int64_t N = batched ? X.shape[0] : 1;
    const int64_t xn = batched ? X.shape[1] : X.shape[0];
    if (xn != n) {
        throw ShapeError("linear: x has " + std::to_string(xn) + " features, W expects " + std::to_string(n));
    }

    Tensor out = Tensor::zeros(batched ? std::vector<int64_t>{N, m} : std::vector<int64_t>{m});
    {
        auto Ym = as_mat(out, N, m);
        Ym.noalias() = as_mat(X, N, n) * as_mat(W, m, n).transpose();
        Ym.rowwise() += CMapVec(B.data.data(), m).transpose();
    }

    bool rg = t.requires_grad(w) || t.requires_grad(b) || t.requires_grad(x);
    return t.record(std::move(out), rg, [w, b, x, m, n, N](Tape& tp, Val, const Tensor& g) {
        auto Gm = as_mat(g, N, m);
        if (tp.requires_grad(x)) {
            as_mat(tp.grad_buf(x.id), N, n).noalias() += Gm * as_mat(tp.value(w), m, n);
        }
        if (tp.requires_grad(w)) {
            as_mat(tp.grad_buf(w.id), m, n).noalias() += Gm.transpose() * as_mat(tp.value(x), N, n);
        }
        if (tp.requires_grad(b)) {
            MapVec(tp.grad_buf(b.id).data.data(), m) += Gm.colwise().sum().transpose();
        }
    });
}

namespace {

enum class BinKind { Add, Sub, Mul };

Val binary_elementwise(Tape& t, Val a, Val b, const char* name, BinKind kind) {
    const Tensor& A = t.value(a);
    const Tensor& B = t.value(b);
    require_same_shape(A, B, name);
    Tensor out = Tensor::zeros(A.shape);
    switch (kind) {
        case BinKind::Add:
            for (size_t i = 0; i < out.data.size(); ++i) out.data[i] = A.data[i] + B.data[i];
            break;
        case BinKind::Sub:
            for (size_t i = 0; i < out.data.size(); ++i) out.data[i] = A.data[i] - B.data[i];
            break;
        case BinKind::Mul:
            for (size_t i = 0; i < out.data.size(); ++i) out.data[i] = A.data[i] * B.data[i];
            break;
    }
    bool rg = t.requires_grad(a) || t.requires_grad(b);
    return t.record(std::move(out), rg, [a, b, kind](Tape& tp, Val, const Tensor& g) {
        if (tp.requires_grad(a)) {
            Tensor& ga = tp.grad_buf(a.id);
            if (kind == BinKind::Mul) {
                const Tensor& B = tp.value(b);
                for (size_t i = 0; i < g.data.size(); ++i) ga.data[i] += g.data[i] * B.data[i];
            } else {
                for (size_t i = 0; i < g.data.size(); ++i) ga.data[i] += g.data[i];
            }
        }
        if (tp.requires_grad(b)) {
            Tensor& gb = tp.grad_buf(b.id);
            switch (kind) {
                case BinKind::Add:
                    for (size_t i = 0; i < g.data.size(); ++i) gb.data[i] += g.data[i];
                    break;
                case BinKind::Sub:
                    for (size_t i = 0; i < g.data.size(); ++i) gb.data[i] -= g.data[i];
                    break;
                case BinKind::Mul: {
                    const Tensor& A = tp.value(a);
                    for (size_t i = 0; i < g.data.size(); ++i) gb.data[i] += g.data[i] * A.data[i];
                    break;
                }
            }
        }
    });
}

}  // namespace

Val add(Tape& t, Val a, Val b) { return binary_elementwise(t, a, b, "add", BinKind::Add); }

Val sub(Tape& t, Val a, Val b) { return binary_elementwise(t, a, b, "sub", BinKind::Sub); }

Val mul(Tape& t, Val a, Val b) { return binary_elementwise(t, a, b, "mul", BinKind::Mul); }

Val add_rowvec(Tape& t, Val m, Val v) {
    const Tensor& M = t.value(m);
    const Tensor& V = t.value(v);
    if (M.ndim() != 2 || V.ndim() != 1 || M.shape[1] != V.shape[0]) {
        throw ShapeError("add_rowvec: need (N,k) + (k), got " + M.shape_str() + " + " + V.shape_str());
    }
    const int64_t N = M.shape[0], k = M.shape[1];
    Tensor out = M;
    as_mat(out, N, k).rowwise() += CMapVec(V.data.data(), k).transpose();
    bool rg = t.requires_grad(m) || t.requires_grad(v);
    return t.record(std::move(out), rg, [m, v, N, k](Tape& tp, Val, const Tensor& g) {
        if (tp.requires_grad(m)) {
            as_mat(tp.grad_buf(m.id), N, k) += as_mat(g, N, k);
        }
        if (tp.requires_grad(v)) {
            MapVec(tp.grad_buf(v.id).data.data(), k) += as_mat(g, N, k).colwise().sum().transpose();
        }
    });
}

Val scale(Tape& t, Val x, float c) {
    const Tensor& X = t.value(x);
    Tensor out = Tensor::zeros(X.shape);
    for (size_t i = 0; i < out.data.size(); ++i) out.data[i] = c * X.data[i];
    return t.record(std::move(out), t.requires_grad(x), [x, c](Tape& tp, Val, const Tensor& g) {
        if (!tp.requires_grad(x)) return;
        Tensor& gx = tp.grad_buf(x.id);
        for (size_t i = 0; i < g.data.size(); ++i) gx.data[i] += c * g.data[i];
    });
}

Val add_const(Tape& t, Val x, float c) {
    const Tensor& X = t.value(x);
    Tensor out = Tensor::zeros(X.shape);
    for (size_t i = 0; i < out.data.size(); ++i) out.data[i] = X.data[i] + c;
    return t.record(std::move(out), t.requires_grad(x), [x](Tape& tp, Val, const Tensor& g) {
        if (!tp.requires_grad(x)) return;
        Tensor& gx = tp.grad_buf(x.id);
        for (size_t i = 0; i < g.data.size(); ++i) gx.data[i] += g.data[i];
    });
}

Val square(Tape& t, Val x) {
    const Tensor& X = t.value(x);
    Tensor out = Tensor::zeros(X.shape);
    for (size_t i = 0; i < out.data.size(); ++i) out.data[i] = X.data[i] * X.data[i];
    return t.record(std::move(out), t.requires_grad(x), [x](Tape& tp, Val, const Tensor& g) {
        if (!tp.requires_grad(x)) return;
        const Tensor& X = tp.value(x);
        Tensor& gx = tp.grad_buf(x.id);
        for (size_t i = 0; i < g.data.size(); ++i) gx.data[i] += 2.0f * X.data[i] * g.data[i];
    });
}

Val log_op(Tape& t, Val x) {
    const Tensor& X = t.value(x);
    Tensor out = Tensor::zeros(X.shape);
    for (size_t i = 0; i < out.data.size(); ++i) out.data[i] = std::log(X.data[i]);
    return t.record(std::move(out), t.requires_grad(x), [x](Tape& tp, Val, const Tensor& g) {
        if (!tp.requires_grad(x)) return;
        const Tensor& X = tp.value(x);
        Tensor& gx = tp.grad_buf(x.id);
        for (size_t i = 0; i < g.data.size(); ++i) gx.data[i] += g.data[i] / X.data[i];
    });
}

Val sine(Tape& t, Val x, float omega0) {
    const Tensor& X = t.value(x);
    Tensor out = Tensor::zeros(X.shape);
    for (size_t i = 0; i < out.data.size(); ++i) out.data[i] = std::sin(omega0 * X.data[i]);
    return t.record(std::move(out), t.requires_grad(x), [x, omega0](Tape& tp, Val, const Tensor& g) {
        if (!tp.requires_grad(x)) return;
        const Tensor& X = tp.value(x);
        Tensor& gx = tp.grad_buf(x.id);
        for (size_t i = 0; i < g.data.size(); ++i) {
            gx.data[i] += omega0 * std::cos(omega0 * X.data[i]) * g.data[i];
        }
    });
}

Val sigmoid(Tape& t, Val x) {
    const Tensor& X = t.value(x);
    Tensor out = Tensor::zeros(X.shape);
    for (size_t i = 0; i < out.data.size(); ++i) out.data[i] = 1.0f / (1.0f + std::exp(-X.data[i]));
    return t.record(std::move(out), t.requires_grad(x), [x](Tape& tp, Val self, const Tensor& g) {
        if (!tp.requires_grad(x)) return;
        const Tensor& S = tp.value(self);
        Tensor& gx = tp.grad_buf(x.id);
        for (size_t i = 0; i < g.data.size(); ++i) {
            gx.data[i] += S.data[i] * (1.0f - S.data[i]) * g.data[i];
        }
    });
}

Val silu(Tape& t, Val x) {
    const Tensor& X = t.value(x);
    Tensor out = Tensor::zeros(X.shape);
    for (size_t i = 0; i < out.data.size(); ++i) {
        float s = 1.0f / (1.0f + std::exp(-X.data[i]));
        out.data[i] = X.data[i] * s;
    }
    return t.record(std::move(out), t.requires_grad(x), [x](Tape& tp, Val, const Tensor& g) {
        if (!tp.requires_grad(x)) return;
        const Tensor& X = tp.value(x);
        Tensor& gx = tp.grad_buf(x.id);
        for (size_t i = 0; i < g.data.size(); ++i) {
            float s = 1.0f / (1.0f + std::exp(-X.data[i]));
            gx.data[i] += (s + X.data[i] * s * (1.0f - s)) * g.data[i];
        }
    });
}

Val relu(Tape& t, Val x) {
    const Tensor& X = t.value(x);
    Tensor out = Tensor::zeros(X.shape);
    for (size_t i = 0; i < out.data.size(); ++i) out.data[i] = X.data[i] > 0.0f ? X.data[i] : 0.0f;
    return t.record(std::move(out), t.requires_grad(x), [x](Tape& tp, Val, const Tensor& g) {
        if (!tp.requires_grad(x)) return;
        const Tensor& X = tp.value(x);
        Tensor& gx = tp.grad_buf(x.id);
        for (size_t i = 0; i < g.data.size(); ++i) {
            if (X.data[i] > 0.0f) gx.data[i] += g.data[i];
        }
    });
}

Val softmax(Tape& t, Val x) {
    const Tensor& X = t.value(x);
    if (X.ndim() != 1 && X.ndim() != 2) {
        throw ShapeError("softmax: need 1-D or 2-D input, got " + X.shape_str());
    }
    const int64_t C = X.shape.back();
    const int64_t N = X.numel() / C;
    Tensor out = Tensor::zeros(X.shape);
    for (int64_t r = 0; r < N; ++r) {
        const float* in = X.data.data() + r * C;
        float* o = out.data.data() + r * C;
        float mx = in[0];
        for (int64_t c = 1; c < C; ++c) mx = std::max(mx, in[c]);
        float total = 0.0f;
        for (int64_t c = 0; c < C; ++c) {
            o[c] = std::exp(in[c] - mx);
            total += o[c];
        }
        for (int64_t c = 0; c < C; ++c) o[c] /= total;
    }
    // dx_c = p_c * (g_c - sum_j g_j p_j), per row
    return t.record(std::move(out), t.requires_grad(x), [x, N, C](Tape& tp, Val self, const Tensor& g) {
        if (!tp.requires_grad(x)) return;
        const Tensor& P = tp.value(self);
        Tensor& gx = tp.grad_buf(x.id);
        for (int64_t r = 0; r < N; ++r) {
            const float* p = P.data.data() + r * C;
            const float* gr = g.data.data() + r * C;
            float dot = 0.0f;
            for (int64_t c = 0; c < C; ++c) dot += gr[c] * p[c];
            float* o = gx.data.data() + r * C;
            for (int64_t c = 0; c < C; ++c) o[c] += p[c] * (gr[c] - dot);
        }
    });
}

Val activation(Tape& t, Val x, Act kind, float omega0) {
    switch (kind) {
        case Act::Sine: return sine(t, x, omega0);
        case Act::Sigmoid: return sigmoid(t, x);
        case Act::Softmax: return softmax(t, x);
        case Act::Silu: return silu(t, x);
        case Act::Relu: return relu(t, x);
    }
    throw ContractError("activation: unknown kind");
}

Val sum(Tape& t, Val x) {
    const Tensor& X = t.value(x);
    double acc = 0.0;
    for (float v : X.data) acc += v;
    Tensor out = Tensor::scalar(static_cast<float>(acc));
    return t.record(std::move(out), t.requires_grad(x), [x](Tape& tp, Val, const Tensor& g) {
        if (!tp.requires_grad(x)) return;
        Tensor& gx = tp.grad_buf(x.id);
        float gs = g.data[0];
        for (float& v : gx.data) v += gs;
    });
}

Val mean(Tape& t, Val x) {
    const Tensor& X = t.value(x);
    const int64_t n = X.numel();
    double acc = 0.0;
    for (float v : X.data) acc += v;
    Tensor out = Tensor::scalar(static_cast<float>(acc / static_cast<double>(n)));
    return t.record(std::move(out), t.requires_grad(x), [x, n](Tape& tp, Val, const Tensor& g) {
        if (!tp.requires_grad(x)) return;
        Tensor& gx = tp.grad_buf(x.id);
        float gs = g.data[0] / static_cast<float>(n);
        for (float& v : gx.data) v += gs;
    });
}

Val slice1d(Tape& t, Val x, int64_t offset, int64_t len) {
    const Tensor& X = t.value(x);
    if (X.ndim() != 1) throw ShapeError("slice1d: need 1-D input, got " + X.shape_str());
    if (offset < 0 || len < 0 || offset + len > X.shape[0]) {
        throw ShapeError("slice1d: range [" + std::to_string(offset) + "," + std::to_string(offset + len) +
                         ") out of bounds for " + X.shape_str());
    }
    Tensor out = Tensor::zeros({len});
    std::copy(X.data.begin() + offset, X.data.begin() + offset + len, out.data.begin());
    return t.record(std::move(out), t.requires_grad(x), [x, offset, len](Tape& tp, Val, const Tensor& g) {
        if (!tp.requires_grad(x)) return;
        Tensor& gx = tp.grad_buf(x.id);
        for (int64_t i = 0; i < len; ++i) {
            gx.data[static_cast<size_t>(offset + i)] += g.data[static_cast<size_t>(i)];
        }
    });
}

Val reshape(Tape& t, Val x, std::vector<int64_t> shape) {
    const Tensor& X = t.value(x);
    if (shape_numel(shape) != X.numel()) {
        throw ShapeError("reshape: cannot view " + X.shape_str() + " as " + shape_to_string(shape));
    }
    Tensor out(std::move(shape), X.data);
    return t.record(std::move(out), t.requires_grad(x), [x](Tape& tp, Val, const Tensor& g) {
        if (!tp.requires_grad(x)) return;
        Tensor& gx = tp.grad_buf(x.id);
        for (size_t i = 0; i < g.data.size(); ++i) gx.data[i] += g.data[i];
    });
}

Val dropout(Tape& t, Val x, float rate, uint64_t seed) {
    if (rate < 0.0f || rate >= 1.0f) throw ContractError("dropout: rate must be in [0,1)");
    if (rate == 0.0f) return x;
    const Tensor& X = t.value(x);
    Rng rng(seed);
    Tensor mask = Tensor::zeros(X.shape);
    float keep_scale = 1.0f / (1.0f - rate);
    for (float& m : mask.data) m = rng.uniform() >= rate ? keep_scale : 0.0f;
    Tensor out = Tensor::zeros(X.shape);
    for (size_t i = 0; i < out.data.size(); ++i) out.data[i] = X.data[i] * mask.data[i];
    return t.record(std::move(out), t.requires_grad(x),
                    [x, mask = std::move(mask)](Tape& tp, Val, const Tensor& g) {
                        if (!tp.requires_grad(x)) return;
                        Tensor& gx = tp.grad_buf(x.id);
                        for (size_t i = 0; i < g.data.size(); ++i) gx.data[i] += g.data[i] * mask.data[i];
                    });
}

Val mse_loss(Tape& t, Val pred, Val target) { return mean(t, square(t, sub(t, pred, target))); }

Val cross_entropy_loss(Tape& t, Val probs, Val onehot_target) {
    const Tensor& P = t.value(probs);
    if (P.ndim() != 2) throw ShapeError("cross_entropy: need (N,C) probabilities, got " + P.shape_str());
    const float inv_rows = -1.0f / static_cast<float>(P.shape[0]);
    Val ll = mul(t, onehot_target, log_op(t, add_const(t, probs, 1e-8f)));
    return scale(t, sum(t, ll), inv_rows);
}

}  // namespace noir
