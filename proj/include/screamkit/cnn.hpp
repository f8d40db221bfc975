#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "screamkit/rng.hpp"
#include "screamkit/util.hpp"

namespace screamkit {

/// Architecture descriptor: conv stages (3x3, stride 1, same padding, ReLU,
/// then 2x2 max pool) followed by ReLU dense layers and a linear output layer.
struct CnnArch {
    std::vector<int> conv_channels{256, 512, 1024};
    std::vector<int> dense_dims{256, 64, 16};
    int n_classes = 3;
    int in_rows = 128; // mel bands
    int in_cols = 87;  // frames
};

namespace detail {

struct StageDims {
    int in_c, in_h, in_w;   // conv input
    int out_c;              // conv output channels (same spatial size)
    int pool_h, pool_w;     // after 2x2 pool
};

inline std::vector<StageDims> stage_dims(const CnnArch& arch)
{
    std::vector<StageDims> dims;
    int c = 1, h = arch.in_rows, w = arch.in_cols;
    for (int out_c : arch.conv_channels) {
        if (h < 2 || w < 2)
            throw std::invalid_argument("cnn: input too small for the pooling stack");
        dims.push_back({c, h, w, out_c, h / 2, w / 2});
        c = out_c;
        h /= 2;
        w /= 2;
    }
    return dims;
}

inline int flat_dim(const CnnArch& arch)
{
    const auto dims = stage_dims(arch);
    const auto& last = dims.back();
    return last.out_c * last.pool_h * last.pool_w;
}

} // namespace detail

template <typename T>
struct CnnModel {
    CnnArch arch;
    std::uint64_t seed = 0;
    // conv layer l: weights [out][in][3][3] flattened, bias [out]
    std::vector<std::vector<T>> conv_w, conv_b;
    // dense layers (hidden dims..., then n_classes): weights [out][in], bias [out]
    std::vector<std::vector<T>> dense_w, dense_b;
};

inline std::size_t cnn_param_count(const CnnArch& arch)
{
    std::size_t count = 0;
    int c = 1;
    for (int out_c : arch.conv_channels) {
        count += static_cast<std::size_t>(out_c) * c * 9 + static_cast<std::size_t>(out_c);
        c = out_c;
    }
    int in_dim = detail::flat_dim(arch);
    for (int out_dim : arch.dense_dims) {
        count += static_cast<std::size_t>(out_dim) * in_dim + static_cast<std::size_t>(out_dim);
        in_dim = out_dim;
    }
    count += static_cast<std::size_t>(arch.n_classes) * in_dim +
             static_cast<std::size_t>(arch.n_classes);
    return count;
}

/// He-uniform weights, zero biases, deterministic per seed.
template <typename T = float>
CnnModel<T> cnn_init(const CnnArch& arch, std::uint64_t seed)
{
    if (arch.n_classes < 2) throw std::invalid_argument("cnn_init: need at least 2 classes");
    if (arch.conv_channels.empty() || arch.dense_dims.empty())
        throw std::invalid_argument("cnn_init: empty architecture");
    detail::stage_dims(arch); // validates spatial dims

    CnnModel<T> model;
    model.arch = arch;
    model.seed = seed;
    Rng rng(seed);
    auto he_uniform = [&](std::size_t count, std::size_t fan_in) {
        const double limit = std::sqrt(6.0 / static_cast<double>(fan_in));
        std::vector<T> w(count);
        for (auto& v : w) v = static_cast<T>((rng.uniform() * 2.0 - 1.0) * limit);
        return w;
    };

    int c = 1;
    for (int out_c : arch.conv_channels) {
        const std::size_t fan_in = static_cast<std::size_t>(c) * 9;
        model.conv_w.push_back(he_uniform(static_cast<std::size_t>(out_c) * c * 9, fan_in));
        model.conv_b.push_back(std::vector<T>(static_cast<std::size_t>(out_c), T(0)));
        c = out_c;
    }
    int in_dim = detail::flat_dim(arch);
    std::vector<int> dense_out = arch.dense_dims;
    dense_out.push_back(arch.n_classes);
    for (int out_dim : dense_out) {
        model.dense_w.push_back(
            he_uniform(static_cast<std::size_t>(out_dim) * in_dim, static_cast<std::size_t>(in_dim)));
        model.dense_b.push_back(std::vector<T>(static_cast<std::size_t>(out_dim), T(0)));
        in_dim = out_dim;
    }
    return model;
}

/// Probabilities are computed and returned in double so the unit-sum
/// contract (1 +- 1e-9) holds regardless of the weight precision.
template <typename T>
std::vector<double> softmax(const std::vector<T>& logits)
{
    double peak = static_cast<double>(logits[0]);
    for (T z : logits) peak = std::max(peak, static_cast<double>(z));
    std::vector<double> p(logits.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        p[i] = std::exp(static_cast<double>(logits[i]) - peak);
        sum += p[i];
    }
    for (auto& v : p) v /= sum;
    return p;
}

namespace detail {

/// Per-sample activations kept for backprop.
template <typename T>
struct CnnTrace {
    std::vector<std::vector<T>> stage_in;  // conv input per stage
    std::vector<std::vector<T>> conv_out;  // post-ReLU conv output per stage
    std::vector<std::vector<T>> pool_out;  // post-pool per stage
    std::vector<std::vector<int>> pool_arg; // flat argmax per pooled cell
    std::vector<std::vector<T>> dense_in;  // input per dense layer
    std::vector<T> logits;
};

template <typename T>
void conv3x3_forward(const std::vector<T>& in, int in_c, int h, int w,
                     const std::vector<T>& weights, const std::vector<T>& bias, int out_c,
                     std::vector<T>& out)
{
    out.assign(static_cast<std::size_t>(out_c) * h * w, T(0));
    for (int o = 0; o < out_c; ++o) {
        T* dst = out.data() + static_cast<std::size_t>(o) * h * w;
        for (int i = 0; i < in_c; ++i) {
            const T* src = in.data() + static_cast<std::size_t>(i) * h * w;
            const T* k = weights.data() + (static_cast<std::size_t>(o) * in_c + i) * 9;
            for (int y = 0; y < h; ++y) {
                for (int x = 0; x < w; ++x) {
                    T acc = 0;
                    for (int ky = 0; ky < 3; ++ky) {
                        const int sy = y + ky - 1;
                        if (sy < 0 || sy >= h) continue;
                        for (int kx = 0; kx < 3; ++kx) {
                            const int sx = x + kx - 1;
                            if (sx < 0 || sx >= w) continue;
                            acc += k[ky * 3 + kx] * src[sy * w + sx];
                        }
                    }
                    dst[y * w + x] += acc;
                }
            }
        }
        const T b = bias[static_cast<std::size_t>(o)];
        for (int p = 0; p < h * w; ++p) dst[p] += b;
    }
}

template <typename T>
void maxpool2x2_forward(const std::vector<T>& in, int c, int h, int w, std::vector<T>& out,
                        std::vector<int>& argmax)
{
    const int ph = h / 2, pw = w / 2;
    out.assign(static_cast<std::size_t>(c) * ph * pw, T(0));
    argmax.assign(out.size(), 0);
    for (int ch = 0; ch < c; ++ch) {
        const T* src = in.data() + static_cast<std::size_t>(ch) * h * w;
        T* dst = out.data() + static_cast<std::size_t>(ch) * ph * pw;
        int* arg = argmax.data() + static_cast<std::size_t>(ch) * ph * pw;
        for (int py = 0; py < ph; ++py) {
            for (int px = 0; px < pw; ++px) {
                int best = (2 * py) * w + 2 * px;
                T best_v = src[best];
                // ties keep the first index in scan order
                for (int dy = 0; dy < 2; ++dy)
                    for (int dx = 0; dx < 2; ++dx) {
                        const int idx = (2 * py + dy) * w + (2 * px + dx);
                        if (src[idx] > best_v) {
                            best_v = src[idx];
                            best = idx;
                        }
                    }
                dst[py * pw + px] = best_v;
                arg[py * pw + px] = best;
            }
        }
    }
}

template <typename T>
std::vector<T>& cnn_forward_trace(const CnnModel<T>& model, const std::vector<T>& input,
                                  CnnTrace<T>& trace)
{
    const auto dims = stage_dims(model.arch);
    const std::size_t n_stages = dims.size();
    trace.stage_in.resize(n_stages);
    trace.conv_out.resize(n_stages);
    trace.pool_out.resize(n_stages);
    trace.pool_arg.resize(n_stages);

    const std::vector<T>* cur = &input;
    for (std::size_t s = 0; s < n_stages; ++s) {
        const auto& d = dims[s];
        trace.stage_in[s] = *cur;
        conv3x3_forward(trace.stage_in[s], d.in_c, d.in_h, d.in_w, model.conv_w[s],
                        model.conv_b[s], d.out_c, trace.conv_out[s]);
        for (auto& v : trace.conv_out[s]) v = std::max(v, T(0));
        maxpool2x2_forward(trace.conv_out[s], d.out_c, d.in_h, d.in_w, trace.pool_out[s],
                           trace.pool_arg[s]);
        cur = &trace.pool_out[s];
    }

    const std::size_t n_dense = model.dense_w.size();
    trace.dense_in.resize(n_dense);
    std::vector<T> act = *cur;
    for (std::size_t l = 0; l < n_dense; ++l) {
        trace.dense_in[l] = act;
        const std::size_t out_dim = model.dense_b[l].size();
        const std::size_t in_dim = act.size();
        std::vector<T> next(out_dim);
        for (std::size_t o = 0; o < out_dim; ++o) {
            const T* wrow = model.dense_w[l].data() + o * in_dim;
            T acc = model.dense_b[l][o];
            for (std::size_t i = 0; i < in_dim; ++i) acc += wrow[i] * act[i];
            next[o] = l + 1 < n_dense ? std::max(acc, T(0)) : acc;
        }
        act = std::move(next);
    }
    trace.logits = std::move(act);
    return trace.logits;
}

} // namespace detail

/// Gradients with the same block layout as the model parameters.
template <typename T>
struct CnnGrads {
    std::vector<std::vector<T>> conv_w, conv_b, dense_w, dense_b;

    static CnnGrads zeros_like(const CnnModel<T>& m)
    {
        CnnGrads g;
        auto zero = [](const std::vector<std::vector<T>>& src) {
            std::vector<std::vector<T>> out;
            out.reserve(src.size());
            for (const auto& blk : src) out.emplace_back(blk.size(), T(0));
            return out;
        };
        g.conv_w = zero(m.conv_w);
        g.conv_b = zero(m.conv_b);
        g.dense_w = zero(m.dense_w);
        g.dense_b = zero(m.dense_b);
        return g;
    }
};

/// Pointers to every parameter block, in a fixed order shared with CnnGrads.
template <typename T>
std::vector<std::vector<T>*> cnn_param_blocks(CnnModel<T>& model)
{
    std::vector<std::vector<T>*> blocks;
    for (auto& b : model.conv_w) blocks.push_back(&b);
    for (auto& b : model.conv_b) blocks.push_back(&b);
    for (auto& b : model.dense_w) blocks.push_back(&b);
    for (auto& b : model.dense_b) blocks.push_back(&b);
    return blocks;
}

template <typename T>
std::vector<std::vector<T>*> cnn_grad_blocks(CnnGrads<T>& grads)
{
    std::vector<std::vector<T>*> blocks;
    for (auto& b : grads.conv_w) blocks.push_back(&b);
    for (auto& b : grads.conv_b) blocks.push_back(&b);
    for (auto& b : grads.dense_w) blocks.push_back(&b);
    for (auto& b : grads.dense_b) blocks.push_back(&b);
    return blocks;
}

template <typename T>
std::vector<T> cnn_input_from_mat(const Mat& m)
{
    std::vector<T> x(m.v.size());
    for (std::size_t i = 0; i < m.v.size(); ++i) x[i] = static_cast<T>(m.v[i]);
    return x;
}

/// Forward pass to class probabilities.
template <typename T>
std::vector<double> cnn_forward(const CnnModel<T>& model, const Mat& input)
{
    if (static_cast<int>(input.rows) != model.arch.in_rows ||
        static_cast<int>(input.cols) != model.arch.in_cols)
        throw std::invalid_argument("cnn_forward: input shape mismatch");
    detail::CnnTrace<T> trace;
    const auto x = cnn_input_from_mat<T>(input);
    return softmax(detail::cnn_forward_trace(model, x, trace));
}

namespace detail {

/// Backprop one sample given dL/dlogits; accumulates into grads (scaled by `scale`).
template <typename T>
void cnn_backward(const CnnModel<T>& model, const CnnTrace<T>& trace,
                  std::vector<T> grad_logits, T scale, CnnGrads<T>& grads)
{
    const auto dims = stage_dims(model.arch);
    const std::size_t n_dense = model.dense_w.size();

    std::vector<T> g = std::move(grad_logits);
    for (std::size_t l = n_dense; l-- > 0;) {
        const auto& in = trace.dense_in[l];
        const std::size_t out_dim = model.dense_b[l].size();
        const std::size_t in_dim = in.size();
        std::vector<T> gin(in_dim, T(0));
        for (std::size_t o = 0; o < out_dim; ++o) {
            const T go = g[o] * scale;
            grads.dense_b[l][o] += go;
            T* gw = grads.dense_w[l].data() + o * in_dim;
            const T* wrow = model.dense_w[l].data() + o * in_dim;
            for (std::size_t i = 0; i < in_dim; ++i) {
                gw[i] += go * in[i];
                gin[i] += wrow[i] * g[o];
            }
        }
        if (l > 0) {
            // through the ReLU that produced this layer's input
            const auto& produced = trace.dense_in[l];
            for (std::size_t i = 0; i < in_dim; ++i)
                if (produced[i] <= T(0)) gin[i] = T(0);
        }
        g = std::move(gin);
    }

    // g is now the gradient w.r.t. the last pool output
    for (std::size_t s = dims.size(); s-- > 0;) {
        const auto& d = dims[s];
        const int h = d.in_h, w = d.in_w, ph = d.pool_h, pw = d.pool_w;

        // pool backward: route into conv_out positions
        std::vector<T> g_conv(static_cast<std::size_t>(d.out_c) * h * w, T(0));
        for (int c = 0; c < d.out_c; ++c) {
            const int* arg = trace.pool_arg[s].data() + static_cast<std::size_t>(c) * ph * pw;
            const T* gp = g.data() + static_cast<std::size_t>(c) * ph * pw;
            T* gc = g_conv.data() + static_cast<std::size_t>(c) * h * w;
            for (int p = 0; p < ph * pw; ++p) gc[arg[p]] += gp[p];
        }
        // ReLU backward
        for (std::size_t i = 0; i < g_conv.size(); ++i)
            if (trace.conv_out[s][i] <= T(0)) g_conv[i] = T(0);

        // conv backward
        const auto& in = trace.stage_in[s];
        std::vector<T> gin(static_cast<std::size_t>(d.in_c) * h * w, T(0));
        for (int o = 0; o < d.out_c; ++o) {
            const T* go = g_conv.data() + static_cast<std::size_t>(o) * h * w;
            T gb = 0;
            for (int p = 0; p < h * w; ++p) gb += go[p];
            grads.conv_b[s][static_cast<std::size_t>(o)] += gb * scale;
            for (int i = 0; i < d.in_c; ++i) {
                const T* src = in.data() + static_cast<std::size_t>(i) * h * w;
                T* gsrc = gin.data() + static_cast<std::size_t>(i) * h * w;
                T* gk = grads.conv_w[s].data() + (static_cast<std::size_t>(o) * d.in_c + i) * 9;
                const T* k = model.conv_w[s].data() + (static_cast<std::size_t>(o) * d.in_c + i) * 9;
                for (int y = 0; y < h; ++y) {
                    for (int x = 0; x < w; ++x) {
                        const T gv = go[y * w + x];
                        if (gv == T(0)) continue;
                        for (int ky = 0; ky < 3; ++ky) {
                            const int sy = y + ky - 1;
                            if (sy < 0 || sy >= h) continue;
                            for (int kx = 0; kx < 3; ++kx) {
                                const int sx = x + kx - 1;
                                if (sx < 0 || sx >= w) continue;
                                gk[ky * 3 + kx] += gv * src[sy * w + sx] * scale;
                                gsrc[sy * w + sx] += k[ky * 3 + kx] * gv;
                            }
                        }
                    }
                }
            }
        }
        g = std::move(gin);
    }
}

} // namespace detail

/// Mean softmax cross-entropy and its gradient over a sample set.
template <typename T>
std::pair<double, CnnGrads<T>> cnn_loss_and_grads(const CnnModel<T>& model,
                                                  const std::vector<Mat>& X,
                                                  const std::vector<int>& y)
{
    if (X.empty() || X.size() != y.size())
        throw std::invalid_argument("cnn_loss_and_grads: bad batch");
    CnnGrads<T> grads = CnnGrads<T>::zeros_like(model);
    double loss = 0.0;
    const T scale = static_cast<T>(1.0 / static_cast<double>(X.size()));
    detail::CnnTrace<T> trace;
    for (std::size_t s = 0; s < X.size(); ++s) {
        const auto x = cnn_input_from_mat<T>(X[s]);
        const auto& logits = detail::cnn_forward_trace(model, x, trace);
        // stable log-sum-exp
        double peak = logits[0];
        for (T z : logits) peak = std::max<double>(peak, static_cast<double>(z));
        double sum = 0.0;
        for (T z : logits) sum += std::exp(static_cast<double>(z) - peak);
        loss += (peak + std::log(sum)) - static_cast<double>(logits[static_cast<std::size_t>(y[s])]);

        const auto probs = softmax(logits);
        std::vector<T> g(probs.size());
        for (std::size_t c = 0; c < probs.size(); ++c) g[c] = static_cast<T>(probs[c]);
        g[static_cast<std::size_t>(y[s])] -= T(1);
        detail::cnn_backward(model, trace, std::move(g), scale, grads);
    }
    loss /= static_cast<double>(X.size());
    return {loss, std::move(grads)};
}

struct CnnTrainConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    int batch_size = 32;
    int max_epochs = 100;
    int patience = 10;
    std::uint64_t seed = 0;
};

struct EpochStats {
    int epoch = 0;
    double train_loss = 0.0;
    double train_acc = 0.0;
    double val_loss = 0.0;
    double val_acc = 0.0;
};

struct CnnTrainHistory {
    std::vector<EpochStats> epochs;
    int best_epoch = -1;
};

template <typename T>
std::pair<double, double> cnn_evaluate(const CnnModel<T>& model, const std::vector<Mat>& X,
                                       const std::vector<int>& y)
{
    double loss = 0.0;
    std::size_t correct = 0;
    detail::CnnTrace<T> trace;
    for (std::size_t s = 0; s < X.size(); ++s) {
        const auto x = cnn_input_from_mat<T>(X[s]);
        const auto& logits = detail::cnn_forward_trace(model, x, trace);
        double peak = logits[0];
        for (T z : logits) peak = std::max<double>(peak, static_cast<double>(z));
        double sum = 0.0;
        for (T z : logits) sum += std::exp(static_cast<double>(z) - peak);
        loss += (peak + std::log(sum)) - static_cast<double>(logits[static_cast<std::size_t>(y[s])]);
        const auto best = std::max_element(logits.begin(), logits.end());
        if (static_cast<int>(best - logits.begin()) == y[s]) ++correct;
    }
    const double n = static_cast<double>(X.size());
    return {loss / n, static_cast<double>(correct) / n};
}

/// Mini-batch Adam on softmax cross-entropy. Validation loss drives early
/// stopping; the best-validation weights are restored before returning.
/// Deterministic for a fixed seed and input order.
template <typename T>
CnnTrainHistory cnn_train(CnnModel<T>& model, const std::vector<Mat>& X, const std::vector<int>& y,
                          const std::vector<Mat>& Xval, const std::vector<int>& yval,
                          const CnnTrainConfig& cfg)
{
    if (X.empty() || X.size() != y.size()) throw std::invalid_argument("cnn_train: bad training set");
    for (int label : y)
        if (label < 0 || label >= model.arch.n_classes)
            throw std::invalid_argument("cnn_train: label out of range");

    CnnGrads<T> m_state = CnnGrads<T>::zeros_like(model);
    CnnGrads<T> v_state = CnnGrads<T>::zeros_like(model);
    long long step = 0;

    Rng rng(cfg.seed);
    std::vector<std::size_t> order(X.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    CnnTrainHistory history;
    double best_val = std::numeric_limits<double>::infinity();
    CnnModel<T> best_model = model;
    int since_best = 0;

    const bool has_val = !Xval.empty();
    detail::CnnTrace<T> trace;

    for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        rng.shuffle(order);
        double epoch_loss = 0.0;
        std::size_t correct = 0;

        for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
            const std::size_t bs = end - start;
            CnnGrads<T> grads = CnnGrads<T>::zeros_like(model);
            const T scale = static_cast<T>(1.0 / static_cast<double>(bs));
            double batch_loss = 0.0;
            for (std::size_t s = start; s < end; ++s) {
                const std::size_t idx = order[s];
                const auto xin = cnn_input_from_mat<T>(X[idx]);
                const auto& logits = detail::cnn_forward_trace(model, xin, trace);
                double peak = logits[0];
                for (T z : logits) peak = std::max<double>(peak, static_cast<double>(z));
                double sum = 0.0;
                for (T z : logits) sum += std::exp(static_cast<double>(z) - peak);
                batch_loss += (peak + std::log(sum)) -
                              static_cast<double>(logits[static_cast<std::size_t>(y[idx])]);
                const auto best = std::max_element(logits.begin(), logits.end());
                if (static_cast<int>(best - logits.begin()) == y[idx]) ++correct;

                const auto probs = softmax(logits);
                std::vector<T> g(probs.size());
                for (std::size_t c = 0; c < probs.size(); ++c) g[c] = static_cast<T>(probs[c]);
                g[static_cast<std::size_t>(y[idx])] -= T(1);
                detail::cnn_backward(model, trace, std::move(g), scale, grads);
            }
            batch_loss /= static_cast<double>(bs);
            if (!std::isfinite(batch_loss))
                throw std::runtime_error("cnn_train: non-finite loss at epoch " +
                                         std::to_string(epoch) + ", batch starting " +
                                         std::to_string(start));
            epoch_loss += batch_loss * static_cast<double>(bs);

            // Adam step
            ++step;
            const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
            const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
            auto params = cnn_param_blocks(model);
            auto gblocks = cnn_grad_blocks(grads);
            auto mblocks = cnn_grad_blocks(m_state);
            auto vblocks = cnn_grad_blocks(v_state);
            for (std::size_t b = 0; b < params.size(); ++b) {
                auto& w = *params[b];
                auto& gb = *gblocks[b];
                auto& mb = *mblocks[b];
                auto& vb = *vblocks[b];
                for (std::size_t p = 0; p < w.size(); ++p) {
                    const double g = static_cast<double>(gb[p]);
                    const double m_new = cfg.beta1 * static_cast<double>(mb[p]) + (1.0 - cfg.beta1) * g;
                    const double v_new = cfg.beta2 * static_cast<double>(vb[p]) + (1.0 - cfg.beta2) * g * g;
                    mb[p] = static_cast<T>(m_new);
                    vb[p] = static_cast<T>(v_new);
                    const double update =
                        cfg.lr * (m_new / bc1) / (std::sqrt(v_new / bc2) + cfg.eps);
                    w[p] = static_cast<T>(static_cast<double>(w[p]) - update);
                }
            }
        }

        EpochStats stats;
        stats.epoch = epoch;
        stats.train_loss = epoch_loss / static_cast<double>(X.size());
        stats.train_acc = static_cast<double>(correct) / static_cast<double>(X.size());
        if (has_val) {
            const auto [vl, va] = cnn_evaluate(model, Xval, yval);
            stats.val_loss = vl;
            stats.val_acc = va;
        } else {
            stats.val_loss = stats.train_loss;
            stats.val_acc = stats.train_acc;
        }
        history.epochs.push_back(stats);

        if (stats.val_loss < best_val) {
            best_val = stats.val_loss;
            best_model = model;
            history.best_epoch = epoch;
            since_best = 0;
        } else if (++since_best >= cfg.patience) {
            break;
        }
    }

    model = best_model;
    return history;
}

} // namespace screamkit
