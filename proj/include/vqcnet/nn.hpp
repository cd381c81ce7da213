#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vqcnet/errors.hpp"
#include "vqcnet/rng.hpp"

namespace vqcnet {

enum class Activation { identity, tanh, softmax };

inline std::string activation_name(Activation a) {
    switch (a) {
        case Activation::identity: return "identity";
        case Activation::tanh: return "tanh";
        case Activation::softmax: return "softmax";
    }
    return "?";
}

inline Activation parse_activation(const std::string& name) {
    if (name == "identity") return Activation::identity;
    if (name == "tanh") return Activation::tanh;
    if (name == "softmax") return Activation::softmax;
    throw std::invalid_argument("unknown activation '" + name + "'");
}

// Fully connected layer, weights row-major [out_dim x in_dim].
struct DenseLayer {
    int in_dim = 0;
    int out_dim = 0;
    std::vector<double> weights;
    std::vector<double> bias;
    Activation activation = Activation::identity;

    double& w(int row, int col) { return weights[static_cast<std::size_t>(row) * in_dim + col]; }
    double w(int row, int col) const {
        return weights[static_cast<std::size_t>(row) * in_dim + col];
    }

    void validate() const {
        if (in_dim < 1 || out_dim < 1)
            throw std::invalid_argument("dense layer: dimensions must be positive");
        if (weights.size() != static_cast<std::size_t>(in_dim) * out_dim ||
            bias.size() != static_cast<std::size_t>(out_dim))
            throw std::invalid_argument("dense layer: weight/bias shape mismatch");
        for (double v : weights)
            if (!std::isfinite(v)) throw std::invalid_argument("dense layer: non-finite weight");
    }
};

// Uniform init in [-1/sqrt(in_dim), +1/sqrt(in_dim)].
inline DenseLayer make_dense(int in_dim, int out_dim, Activation activation, Rng& rng) {
    DenseLayer layer;
    layer.in_dim = in_dim;
    layer.out_dim = out_dim;
    layer.activation = activation;
    const double bound = 1.0 / std::sqrt(static_cast<double>(in_dim));
    layer.weights.resize(static_cast<std::size_t>(in_dim) * out_dim);
    layer.bias.resize(static_cast<std::size_t>(out_dim));
    for (auto& v : layer.weights) v = rng.uniform(-bound, bound);
    for (auto& v : layer.bias) v = rng.uniform(-bound, bound);
    layer.validate();
    return layer;
}

// Max-shifted softmax; output sums to 1 within 1e-12.
inline std::vector<double> softmax(std::span<const double> logits) {
    std::vector<double> out(logits.size());
    const double m = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        out[i] = std::exp(logits[i] - m);
        sum += out[i];
    }
    for (auto& v : out) v /= sum;
    return out;
}

inline std::vector<double> dense_forward(const DenseLayer& layer,
                                         std::span<const double> input) {
    if (input.size() != static_cast<std::size_t>(layer.in_dim))
        throw std::invalid_argument("dense_forward: input length " +
                                    std::to_string(input.size()) + " != in_dim " +
                                    std::to_string(layer.in_dim));
    std::vector<double> z(static_cast<std::size_t>(layer.out_dim));
    for (int r = 0; r < layer.out_dim; ++r) {
        double acc = layer.bias[static_cast<std::size_t>(r)];
        for (int c = 0; c < layer.in_dim; ++c) acc += layer.w(r, c) * input[static_cast<std::size_t>(c)];
        z[static_cast<std::size_t>(r)] = acc;
    }
    switch (layer.activation) {
        case Activation::identity: return z;
        case Activation::tanh:
            for (auto& v : z) v = std::tanh(v);
            return z;
        case Activation::softmax: return softmax(z);
    }
    return z;
}

struct DenseGrads {
    std::vector<double> weights; // same layout as layer.weights
    std::vector<double> bias;
    std::vector<double> input; // dL/dx
};

// Chain rule through the layer. `upstream` is dL/d(output) for identity and
// tanh; for softmax the layer is assumed fused with cross-entropy, so
// upstream is already dL/d(logits) and passes through unchanged.
inline DenseGrads dense_backward(const DenseLayer& layer, std::span<const double> input,
                                 std::span<const double> upstream) {
    if (input.size() != static_cast<std::size_t>(layer.in_dim) ||
        upstream.size() != static_cast<std::size_t>(layer.out_dim))
        throw std::invalid_argument("dense_backward: shape mismatch");

    std::vector<double> dz(upstream.begin(), upstream.end());
    if (layer.activation == Activation::tanh) {
        std::vector<double> a = dense_forward(layer, input);
        for (int r = 0; r < layer.out_dim; ++r) {
            const double t = a[static_cast<std::size_t>(r)];
            dz[static_cast<std::size_t>(r)] *= 1.0 - t * t;
        }
    }

    DenseGrads g;
    g.weights.resize(layer.weights.size());
    g.bias = dz;
    g.input.assign(static_cast<std::size_t>(layer.in_dim), 0.0);
    for (int r = 0; r < layer.out_dim; ++r) {
        for (int c = 0; c < layer.in_dim; ++c) {
            g.weights[static_cast<std::size_t>(r) * layer.in_dim + c] =
                dz[static_cast<std::size_t>(r)] * input[static_cast<std::size_t>(c)];
            g.input[static_cast<std::size_t>(c)] += layer.w(r, c) * dz[static_cast<std::size_t>(r)];
        }
    }
    return g;
}

inline constexpr double kCrossEntropyEps = 1e-12;

// -ln(p[label] + eps). The matching logit gradient is p - one_hot(label).
inline double cross_entropy_loss(std::span<const double> probabilities, int label) {
    if (label < 0 || label >= static_cast<int>(probabilities.size()))
        throw std::invalid_argument("cross_entropy_loss: label " + std::to_string(label) +
                                    " out of range");
    double sum = 0.0;
    for (double p : probabilities) sum += p;
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("cross_entropy_loss: probabilities sum to " +
                                    std::to_string(sum));
    return -std::log(probabilities[static_cast<std::size_t>(label)] + kCrossEntropyEps);
}

inline std::vector<double> cross_entropy_logit_grad(std::span<const double> probabilities,
                                                    int label) {
    std::vector<double> g(probabilities.begin(), probabilities.end());
    g[static_cast<std::size_t>(label)] -= 1.0;
    return g;
}

enum class OptimizerKind { sgd, adam };

inline std::string optimizer_name(OptimizerKind k) {
    return k == OptimizerKind::sgd ? "sgd" : "adam";
}

inline OptimizerKind parse_optimizer(const std::string& name) {
    if (name == "sgd") return OptimizerKind::sgd;
    if (name == "adam") return OptimizerKind::adam;
    throw std::invalid_argument("unknown optimizer '" + name + "' (valid: sgd, adam)");
}

// SGD with optional momentum, or Adam with the canonical constants
// beta1 = 0.9, beta2 = 0.999, eps = 1e-8.
class Optimizer {
  public:
    static Optimizer sgd(double learning_rate, double momentum = 0.0) {
        Optimizer o;
        o.kind_ = OptimizerKind::sgd;
        o.learning_rate_ = check_lr(learning_rate);
        o.momentum_ = momentum;
        return o;
    }

    static Optimizer adam(double learning_rate) {
        Optimizer o;
        o.kind_ = OptimizerKind::adam;
        o.learning_rate_ = check_lr(learning_rate);
        return o;
    }

    OptimizerKind kind() const { return kind_; }
    double learning_rate() const { return learning_rate_; }
    void set_learning_rate(double lr) { learning_rate_ = check_lr(lr); }
    long step_count() const { return step_count_; }

    void step(std::vector<double>& params, std::span<const double> grads) {
        if (grads.size() != params.size())
            throw std::invalid_argument("optimizer_step: gradient length mismatch");
        for (std::size_t i = 0; i < grads.size(); ++i)
            if (!std::isfinite(grads[i]))
                throw NumericError("optimizer_step: non-finite gradient at index " +
                                   std::to_string(i));

        if (kind_ == OptimizerKind::sgd) {
            if (momentum_ != 0.0) {
                velocity_.resize(params.size(), 0.0);
                for (std::size_t i = 0; i < params.size(); ++i) {
                    velocity_[i] = momentum_ * velocity_[i] + grads[i];
                    params[i] -= learning_rate_ * velocity_[i];
                }
            } else {
                for (std::size_t i = 0; i < params.size(); ++i)
                    params[i] -= learning_rate_ * grads[i];
            }
            ++step_count_;
            return;
        }

        constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
        m_.resize(params.size(), 0.0);
        v_.resize(params.size(), 0.0);
        ++step_count_;
        const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(step_count_));
        const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(step_count_));
        for (std::size_t i = 0; i < params.size(); ++i) {
            m_[i] = beta1 * m_[i] + (1.0 - beta1) * grads[i];
            v_[i] = beta2 * v_[i] + (1.0 - beta2) * grads[i] * grads[i];
            const double mhat = m_[i] / bc1;
            const double vhat = v_[i] / bc2;
            params[i] -= learning_rate_ * mhat / (std::sqrt(vhat) + eps);
        }
    }

  private:
    static double check_lr(double lr) {
        if (!(lr >= 0.0) || !std::isfinite(lr))
            throw std::invalid_argument("learning rate must be finite and >= 0");
        return lr;
    }

    OptimizerKind kind_ = OptimizerKind::sgd;
    double learning_rate_ = 0.0;
    double momentum_ = 0.0;
    long step_count_ = 0;
    std::vector<double> velocity_;
    std::vector<double> m_, v_;
};

} // namespace vqcnet
