#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vqcnet/circuit.hpp"
#include "vqcnet/dataset.hpp"
#include "vqcnet/errors.hpp"
#include "vqcnet/gradients.hpp"
#include "vqcnet/metrics.hpp"
#include "vqcnet/nn.hpp"
#include "vqcnet/parallel.hpp"
#include "vqcnet/rng.hpp"

namespace vqcnet {

// Dressed variational classifier: dense pre-net with tanh squashing, angle
// embedding into the circuit, Z measurements, dense softmax head.
struct HybridModel {
    DenseLayer pre_net;  // feature_dim -> num_qubits, tanh
    CircuitTemplate circuit;
    std::vector<double> circuit_params;
    DenseLayer post_net; // num_qubits -> 2, softmax
    std::uint64_t seed = 0;
    std::string config_snapshot; // opaque JSON text of the producing run, may be empty

    int feature_dim() const { return pre_net.in_dim; }
    int num_qubits() const { return circuit.num_qubits; }

    void validate() const {
        pre_net.validate();
        post_net.validate();
        circuit.validate();
        if (pre_net.out_dim != circuit.num_qubits || post_net.in_dim != circuit.num_qubits)
            throw std::invalid_argument(
                "hybrid model: pre_net/post_net width must equal num_qubits (" +
                std::to_string(pre_net.out_dim) + ", " + std::to_string(post_net.in_dim) +
                " vs " + std::to_string(circuit.num_qubits) + ")");
        if (circuit.num_inputs != circuit.num_qubits)
            throw std::invalid_argument("hybrid model: circuit needs one input slot per qubit");
        if (static_cast<int>(circuit_params.size()) != circuit.num_params)
            throw std::invalid_argument("hybrid model: circuit params length " +
                                        std::to_string(circuit_params.size()) +
                                        " != num_params " +
                                        std::to_string(circuit.num_params));
        if (post_net.out_dim != 2)
            throw std::invalid_argument("hybrid model: post_net must have 2 outputs");
    }
};

struct TrainConfig {
    int epochs = 100;
    int batch_size = 16;
    double learning_rate = 0.01;
    OptimizerKind optimizer = OptimizerKind::adam;
    double momentum = 0.0;
    int step_size = 1;   // epochs between learning-rate decays
    double gamma = 1.0;  // multiplicative decay, 1 = constant rate
    int num_qubits = 2;
    std::string template_name = "vqc1";
    int layers = 1;
    std::uint64_t seed = 42;
    bool freeze_pre_net = false;
    int threads = 1;

    void validate() const {
        std::vector<std::string> bad;
        if (epochs < 0) bad.push_back("epochs");
        if (batch_size < 1) bad.push_back("batch_size");
        if (!(learning_rate >= 0.0)) bad.push_back("learning_rate");
        if (momentum < 0.0 || momentum >= 1.0) bad.push_back("momentum");
        if (step_size < 1) bad.push_back("step_size");
        if (!(gamma > 0.0)) bad.push_back("gamma");
        if (num_qubits < 1) bad.push_back("num_qubits");
        if (layers < 1) bad.push_back("layers");
        if (threads < 1) bad.push_back("threads");
        if (!bad.empty()) {
            std::string msg = "invalid train config values:";
            for (const auto& k : bad) msg += " " + k;
            throw ConfigError(msg);
        }
        parse_template_name(template_name);
    }
};

// Circuit angles start near zero (0.01 * normal) so the initial quantum
// block is close to the bare embedding; dense layers use the standard
// uniform fan-in rule.
inline HybridModel make_hybrid_model(int feature_dim, const TrainConfig& cfg) {
    cfg.validate();
    if (feature_dim < 1) throw std::invalid_argument("feature_dim must be >= 1");
    Rng init = Rng(cfg.seed).stream("init");
    HybridModel model;
    model.seed = cfg.seed;
    model.circuit = builtin_template(cfg.template_name, cfg.num_qubits, cfg.layers);
    model.pre_net = make_dense(feature_dim, cfg.num_qubits, Activation::tanh, init);
    model.post_net = make_dense(cfg.num_qubits, 2, Activation::softmax, init);
    model.circuit_params.resize(static_cast<std::size_t>(model.circuit.num_params));
    for (auto& p : model.circuit_params) p = 0.01 * init.normal();
    model.validate();
    return model;
}

namespace detail {

struct ForwardTrace {
    std::vector<double> squashed;     // pre-net tanh output, in [-1, 1]
    std::vector<double> angles;       // embedding angles
    std::vector<double> measurements; // <Z_i>
    std::vector<double> probs;        // softmax output, length 2
};

inline ForwardTrace forward_trace(const HybridModel& model, std::span<const double> features) {
    if (features.size() != static_cast<std::size_t>(model.pre_net.in_dim))
        throw std::invalid_argument("hybrid forward: feature length " +
                                    std::to_string(features.size()) + " != feature_dim " +
                                    std::to_string(model.pre_net.in_dim));
    ForwardTrace t;
    t.squashed = dense_forward(model.pre_net, features);
    t.angles.resize(t.squashed.size());
    // Same scaling as embed_inputs; tanh output is in range by construction.
    for (std::size_t i = 0; i < t.squashed.size(); ++i)
        t.angles[i] = t.squashed[i] * kInputAngleScale;
    t.measurements = measure_outputs(model.circuit, model.circuit_params, t.angles);
    t.probs = dense_forward(model.post_net, t.measurements);
    return t;
}

} // namespace detail

// Class probabilities [p0, p1]; sums to 1 within 1e-12.
inline std::vector<double> forward(const HybridModel& model, std::span<const double> features) {
    return detail::forward_trace(model, features).probs;
}

struct HybridGrads {
    std::vector<double> pre_weights;
    std::vector<double> pre_bias;
    std::vector<double> circuit_params;
    std::vector<double> post_weights;
    std::vector<double> post_bias;
    double loss = 0.0;
    std::vector<double> probs;

    void add(const HybridGrads& other) {
        auto acc = [](std::vector<double>& a, const std::vector<double>& b) {
            for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
        };
        acc(pre_weights, other.pre_weights);
        acc(pre_bias, other.pre_bias);
        acc(circuit_params, other.circuit_params);
        acc(post_weights, other.post_weights);
        acc(post_bias, other.post_bias);
        loss += other.loss;
    }

    void scale(double s) {
        for (auto* v : {&pre_weights, &pre_bias, &circuit_params, &post_weights, &post_bias})
            for (auto& x : *v) x *= s;
        loss *= s;
    }
};

// Cross-entropy gradient of one sample with respect to every trainable
// parameter. The classical/quantum boundary is crossed with the
// parameter-shift Jacobian: circuit grads via by_param, pre-net grads via
// by_input chained through the embedding scale and the tanh derivative.
inline HybridGrads backward(const HybridModel& model, std::span<const double> features,
                            int label) {
    const auto trace = detail::forward_trace(model, features);
    const double loss = cross_entropy_loss(trace.probs, label);
    const std::vector<double> dlogits = cross_entropy_logit_grad(trace.probs, label);

    const DenseGrads post = dense_backward(model.post_net, trace.measurements, dlogits);

    const QuantumJacobian jac =
        parameter_shift_jacobian(model.circuit, model.circuit_params, trace.angles);

    HybridGrads g;
    g.loss = loss;
    g.probs = trace.probs;
    g.post_weights = post.weights;
    g.post_bias = post.bias;

    g.circuit_params.assign(model.circuit_params.size(), 0.0);
    for (int j = 0; j < jac.num_params; ++j) {
        double acc = 0.0;
        for (int q = 0; q < jac.num_qubits; ++q) acc += post.input[static_cast<std::size_t>(q)] * jac.param(q, j);
        g.circuit_params[static_cast<std::size_t>(j)] = acc;
    }

    std::vector<double> dsquashed(trace.squashed.size(), 0.0);
    for (int k = 0; k < jac.num_inputs; ++k) {
        double acc = 0.0;
        for (int q = 0; q < jac.num_qubits; ++q) acc += post.input[static_cast<std::size_t>(q)] * jac.input(q, k);
        dsquashed[static_cast<std::size_t>(k)] = acc * kInputAngleScale;
    }
    const DenseGrads pre = dense_backward(model.pre_net, features, dsquashed);
    g.pre_weights = pre.weights;
    g.pre_bias = pre.bias;
    return g;
}

// Positive-class probability for each row.
inline std::vector<double> predict_scores(const HybridModel& model, const Dataset& data,
                                          int threads = 1) {
    std::vector<double> scores(data.size());
    parallel_for(data.size(), threads, [&](std::size_t i) {
        scores[i] = forward(model, data.row(i))[1];
    });
    return scores;
}

inline std::vector<double> predict_scores(const HybridModel& model,
                                          const std::vector<std::size_t>& rows,
                                          const Dataset& data, int threads = 1) {
    std::vector<double> scores(rows.size());
    parallel_for(rows.size(), threads, [&](std::size_t i) {
        scores[i] = forward(model, data.row(rows[i]))[1];
    });
    return scores;
}

struct EpochStats {
    int epoch = 0;
    double loss = 0.0;
    double train_acc = 0.0;
    double val_acc = 0.0;
};

namespace detail {

inline double subset_accuracy(const HybridModel& model, const Dataset& data,
                              const std::vector<std::size_t>& rows, int threads) {
    const auto scores = predict_scores(model, rows, data, threads);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < rows.size(); ++i)
        if ((scores[i] >= 0.5 ? 1 : 0) == data.labels[rows[i]]) ++correct;
    return static_cast<double>(correct) / static_cast<double>(rows.size());
}

struct FlatParams {
    std::vector<double> values;

    static FlatParams gather(const HybridModel& m) {
        FlatParams f;
        auto app = [&](const std::vector<double>& v) {
            f.values.insert(f.values.end(), v.begin(), v.end());
        };
        app(m.pre_net.weights);
        app(m.pre_net.bias);
        app(m.circuit_params);
        app(m.post_net.weights);
        app(m.post_net.bias);
        return f;
    }

    void scatter(HybridModel& m) const {
        std::size_t off = 0;
        auto take = [&](std::vector<double>& v) {
            std::copy(values.begin() + static_cast<std::ptrdiff_t>(off),
                      values.begin() + static_cast<std::ptrdiff_t>(off + v.size()), v.begin());
            off += v.size();
        };
        take(m.pre_net.weights);
        take(m.pre_net.bias);
        take(m.circuit_params);
        take(m.post_net.weights);
        take(m.post_net.bias);
    }
};

inline std::vector<double> flatten_grads(const HybridGrads& g, bool freeze_pre_net) {
    std::vector<double> flat;
    auto app = [&](const std::vector<double>& v, bool zero) {
        if (zero)
            flat.insert(flat.end(), v.size(), 0.0);
        else
            flat.insert(flat.end(), v.begin(), v.end());
    };
    app(g.pre_weights, freeze_pre_net);
    app(g.pre_bias, freeze_pre_net);
    app(g.circuit_params, false);
    app(g.post_weights, false);
    app(g.post_bias, false);
    return flat;
}

} // namespace detail

// Minibatch gradient descent over the train split; returns per-epoch
// history and leaves the model at the checkpoint with the best validation
// accuracy (ties resolved toward the earlier epoch). Per-sample gradients
// within a batch may be computed in parallel; they are reduced in sample
// order so results do not depend on the thread count.
inline std::vector<EpochStats> train(HybridModel& model, const Dataset& data,
                                     const TrainConfig& cfg) {
    cfg.validate();
    model.validate();
    const auto train_rows = data.indices_of(Split::train);
    const auto val_rows = data.indices_of(Split::val);
    if (train_rows.empty()) throw DataError("train: empty train split");
    if (val_rows.empty()) throw DataError("train: empty validation split");
    for (std::size_t i : train_rows)
        if (data.labels[i] != 0 && data.labels[i] != 1)
            throw DataError("train: labels must be in {0, 1}");
    if (static_cast<std::size_t>(cfg.batch_size) > train_rows.size())
        throw ConfigError("batch_size " + std::to_string(cfg.batch_size) +
                          " exceeds train split size " + std::to_string(train_rows.size()));

    Optimizer opt = cfg.optimizer == OptimizerKind::adam
                        ? Optimizer::adam(cfg.learning_rate)
                        : Optimizer::sgd(cfg.learning_rate, cfg.momentum);
    const Rng shuffle_base = Rng(cfg.seed).stream("training");

    std::vector<EpochStats> history;
    history.reserve(static_cast<std::size_t>(cfg.epochs));
    double best_val = -1.0;
    detail::FlatParams best = detail::FlatParams::gather(model);
    bool have_checkpoint = false;

    std::vector<std::size_t> order = train_rows;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        opt.set_learning_rate(cfg.learning_rate *
                              std::pow(cfg.gamma, static_cast<double>(epoch / cfg.step_size)));
        Rng shuffle_rng = shuffle_base.at(static_cast<std::uint64_t>(epoch));
        order = train_rows;
        shuffle_rng.shuffle(order);

        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size();
             start += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t end =
                std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
            const std::size_t count = end - start;
            std::vector<HybridGrads> per_sample(count);
            parallel_for(count, cfg.threads, [&](std::size_t k) {
                const std::size_t row = order[start + k];
                per_sample[k] = backward(model, data.row(row), data.labels[row]);
            });
            HybridGrads total = per_sample[0];
            for (std::size_t k = 1; k < count; ++k) total.add(per_sample[k]);
            epoch_loss += total.loss;
            total.scale(1.0 / static_cast<double>(count));
            if (!std::isfinite(total.loss))
                throw NumericError("train: non-finite loss at epoch " + std::to_string(epoch) +
                                   " batch " + std::to_string(start / cfg.batch_size));
            detail::FlatParams params = detail::FlatParams::gather(model);
            opt.step(params.values, detail::flatten_grads(total, cfg.freeze_pre_net));
            params.scatter(model);
        }

        EpochStats stats;
        stats.epoch = epoch;
        stats.loss = epoch_loss / static_cast<double>(order.size());
        stats.train_acc = detail::subset_accuracy(model, data, train_rows, cfg.threads);
        stats.val_acc = detail::subset_accuracy(model, data, val_rows, cfg.threads);
        history.push_back(stats);

        if (stats.val_acc > best_val) {
            best_val = stats.val_acc;
            best = detail::FlatParams::gather(model);
            have_checkpoint = true;
        }
    }

    if (have_checkpoint) best.scatter(model);
    return history;
}

} // namespace vqcnet
