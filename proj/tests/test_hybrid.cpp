#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "vqcnet/hybrid.hpp"
#include "vqcnet/rng.hpp"

using namespace vqcnet;

namespace {

TrainConfig small_config() {
    TrainConfig cfg;
    cfg.num_qubits = 2;
    cfg.template_name = "vqc1";
    cfg.layers = 1;
    cfg.epochs = 5;
    cfg.batch_size = 8;
    cfg.learning_rate = 0.05;
    cfg.seed = 7;
    return cfg;
}

HybridModel random_model(const TrainConfig& cfg, int feature_dim) {
    return make_hybrid_model(feature_dim, cfg);
}

// Loss as a pure function of a flat parameter vector, for finite
// differences over every trainable parameter.
struct FlatLossProbe {
    HybridModel model;
    std::vector<double> features;
    int label;

    std::vector<double*> slots() {
        std::vector<double*> out;
        for (auto& v : model.pre_net.weights) out.push_back(&v);
        for (auto& v : model.pre_net.bias) out.push_back(&v);
        for (auto& v : model.circuit_params) out.push_back(&v);
        for (auto& v : model.post_net.weights) out.push_back(&v);
        for (auto& v : model.post_net.bias) out.push_back(&v);
        return out;
    }

    double loss() { return cross_entropy_loss(forward(model, features), label); }

    std::vector<double> analytic() {
        const HybridGrads g = backward(model, features, label);
        std::vector<double> flat;
        for (const auto* v :
             {&g.pre_weights, &g.pre_bias, &g.circuit_params, &g.post_weights, &g.post_bias})
            flat.insert(flat.end(), v->begin(), v->end());
        return flat;
    }
};

Dataset blob_data(int n, std::uint64_t seed) {
    Dataset data = gen_blobs(n, seed);
    assign_splits(data, 0.7, 0.15, seed);
    return data;
}

double mean_train_loss(const HybridModel& model, const Dataset& data) {
    const auto rows = data.indices_of(Split::train);
    double total = 0.0;
    for (std::size_t i : rows)
        total += cross_entropy_loss(forward(model, data.row(i)), data.labels[i]);
    return total / static_cast<double>(rows.size());
}

} // namespace

TEST_CASE("zero weights give the symmetric prediction") {
    HybridModel model = random_model(small_config(), 3);
    std::fill(model.pre_net.weights.begin(), model.pre_net.weights.end(), 0.0);
    std::fill(model.pre_net.bias.begin(), model.pre_net.bias.end(), 0.0);
    std::fill(model.circuit_params.begin(), model.circuit_params.end(), 0.0);
    std::fill(model.post_net.weights.begin(), model.post_net.weights.end(), 0.0);
    std::fill(model.post_net.bias.begin(), model.post_net.bias.end(), 0.0);
    const auto p = forward(model, std::vector<double>{0.4, -1.0, 2.2});
    CHECK(p[0] == Catch::Approx(0.5).margin(1e-15));
    CHECK(p[1] == Catch::Approx(0.5).margin(1e-15));
}

TEST_CASE("forward output is a probability pair") {
    Rng rng(50);
    TrainConfig cfg = small_config();
    cfg.template_name = "vqc3";
    HybridModel model = random_model(cfg, 4);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> x(4);
        for (auto& v : x) v = rng.uniform(-3.0, 3.0);
        const auto p = forward(model, x);
        CHECK(p[0] > 0.0);
        CHECK(p[0] < 1.0);
        CHECK(p[1] > 0.0);
        CHECK(p[1] < 1.0);
        CHECK(p[0] + p[1] == Catch::Approx(1.0).margin(1e-12));
    }
    CHECK_THROWS_AS(forward(model, std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("vqc6 model with pass-through nets matches the cosine closed form") {
    TrainConfig cfg = small_config();
    cfg.template_name = "vqc6";
    HybridModel model = random_model(cfg, 2);
    // pre_net: identity weights (tanh activation still applies).
    model.pre_net.weights = {1, 0, 0, 1};
    model.pre_net.bias = {0, 0};
    std::fill(model.circuit_params.begin(), model.circuit_params.end(), 0.0);
    // post_net logits: (z0 - z1, z1 - z0).
    model.post_net.weights = {1, -1, -1, 1};
    model.post_net.bias = {0, 0};

    const std::vector<double> x = {0.8, -0.3};
    const auto p = forward(model, x);

    const double z0 = std::cos(std::numbers::pi / 2 * std::tanh(x[0]));
    const double z1 = std::cos(std::numbers::pi / 2 * std::tanh(x[1]));
    const double l0 = z0 - z1;
    const double expected_p1 = std::exp(l0 - l0) /  // softmax of (l0, -l0)
                               (std::exp(0.0) + std::exp(-2.0 * l0));
    CHECK(p[1] == Catch::Approx(1.0 - expected_p1).margin(1e-12));
    CHECK(p[0] == Catch::Approx(expected_p1).margin(1e-12));
}

TEST_CASE("end-to-end gradients match finite differences on 2-qubit models") {
    Rng rng(31337);
    for (int trial = 0; trial < 10; ++trial) {
        TrainConfig cfg = small_config();
        cfg.template_name = trial % 2 == 0 ? "vqc1" : "vqc3";
        cfg.seed = 1000 + static_cast<std::uint64_t>(trial);
        FlatLossProbe probe{random_model(cfg, 3), {}, static_cast<int>(rng.below(2))};
        probe.features = {rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
        // Move weights off the tiny init so gradients are non-trivial.
        for (double* p : probe.slots()) *p += 0.3 * rng.normal();

        const auto analytic = probe.analytic();
        const auto slots = probe.slots();
        REQUIRE(analytic.size() == slots.size());
        const double h = 1e-5;
        for (std::size_t i = 0; i < slots.size(); ++i) {
            const double saved = *slots[i];
            *slots[i] = saved + h;
            const double up = probe.loss();
            *slots[i] = saved - h;
            const double down = probe.loss();
            *slots[i] = saved;
            const double fd = (up - down) / (2 * h);
            REQUIRE(analytic[i] == Catch::Approx(fd).margin(1e-5));
        }
    }
}

TEST_CASE("exact one-hot prediction yields zero gradients") {
    TrainConfig cfg = small_config();
    HybridModel model = random_model(cfg, 2);
    // Drive the logit gap far past the exp underflow point so softmax is
    // exactly (1, 0).
    model.post_net.bias = {800.0, 0.0};
    const auto p = forward(model, std::vector<double>{0.2, -0.4});
    REQUIRE(p[0] == 1.0);
    REQUIRE(p[1] == 0.0);
    const HybridGrads g = backward(model, std::vector<double>{0.2, -0.4}, 0);
    for (const auto* v :
         {&g.pre_weights, &g.pre_bias, &g.circuit_params, &g.post_weights, &g.post_bias})
        for (double x : *v) CHECK(std::abs(x) <= 1e-9);
}

TEST_CASE("vqc6 pre-net gradient rows follow the per-qubit path") {
    TrainConfig cfg = small_config();
    cfg.template_name = "vqc6";
    cfg.num_qubits = 3;
    HybridModel model = random_model(cfg, 3);
    Rng rng(8);
    for (auto& w : model.post_net.weights) w = rng.uniform(-1, 1);
    for (auto& w : model.circuit_params) w = rng.uniform(-1, 1);

    const std::vector<double> x = {0.5, -1.1, 0.9};
    const HybridGrads g = backward(model, x, 1);

    // Recompute the per-qubit chain by hand.
    const auto a = dense_forward(model.pre_net, x);
    std::vector<double> angles(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) angles[i] = a[i] * kInputAngleScale;
    const auto z = measure_outputs(model.circuit, model.circuit_params, angles);
    const auto probs = dense_forward(model.post_net, z);
    const auto dlogits = cross_entropy_logit_grad(probs, 1);
    const auto post = dense_backward(model.post_net, z, dlogits);
    const QuantumJacobian jac =
        parameter_shift_jacobian(model.circuit, model.circuit_params, angles);

    for (int k = 0; k < 3; ++k) {
        // Off-diagonal input sensitivities vanish without entanglers.
        for (int q = 0; q < 3; ++q)
            if (q != k) CHECK(std::abs(jac.input(q, k)) < 1e-14);
        const double da =
            post.input[static_cast<std::size_t>(k)] * jac.input(k, k) * kInputAngleScale;
        const double dz_tanh = 1.0 - a[static_cast<std::size_t>(k)] * a[static_cast<std::size_t>(k)];
        for (int c = 0; c < 3; ++c) {
            const double expected = da * dz_tanh * x[static_cast<std::size_t>(c)];
            CHECK(g.pre_weights[static_cast<std::size_t>(k) * 3 + c] ==
                  Catch::Approx(expected).margin(1e-12));
        }
    }
}

TEST_CASE("zero epochs leave the model untouched") {
    TrainConfig cfg = small_config();
    cfg.epochs = 0;
    Dataset data = blob_data(40, 3);
    HybridModel model = random_model(cfg, 2);
    const auto params_before = model.circuit_params;
    const auto pre_before = model.pre_net.weights;
    const auto history = train(model, data, cfg);
    CHECK(history.empty());
    CHECK(model.circuit_params == params_before);
    CHECK(model.pre_net.weights == pre_before);
}

TEST_CASE("zero learning rate is a null update") {
    TrainConfig cfg = small_config();
    cfg.epochs = 2;
    cfg.learning_rate = 0.0;
    Dataset data = blob_data(40, 3);
    HybridModel model = random_model(cfg, 2);
    const auto before = detail::FlatParams::gather(model);
    train(model, data, cfg);
    const auto after = detail::FlatParams::gather(model);
    REQUIRE(before.values.size() == after.values.size());
    for (std::size_t i = 0; i < before.values.size(); ++i)
        CHECK(std::abs(before.values[i] - after.values[i]) <= 1e-12);
}

TEST_CASE("training is deterministic given seed and config") {
    TrainConfig cfg = small_config();
    cfg.epochs = 3;
    Dataset data = blob_data(50, 11);

    HybridModel a = random_model(cfg, 2);
    HybridModel b = random_model(cfg, 2);
    const auto ha = train(a, data, cfg);
    const auto hb = train(b, data, cfg);
    REQUIRE(ha.size() == hb.size());
    for (std::size_t e = 0; e < ha.size(); ++e) {
        CHECK(ha[e].loss == hb[e].loss);
        CHECK(ha[e].train_acc == hb[e].train_acc);
        CHECK(ha[e].val_acc == hb[e].val_acc);
    }
    CHECK(detail::FlatParams::gather(a).values == detail::FlatParams::gather(b).values);
}

TEST_CASE("training results are identical across thread counts") {
    TrainConfig cfg = small_config();
    cfg.epochs = 2;
    Dataset data = blob_data(50, 11);

    HybridModel one = random_model(cfg, 2);
    cfg.threads = 1;
    const auto h1 = train(one, data, cfg);

    HybridModel four = random_model(cfg, 2);
    cfg.threads = 4;
    const auto h4 = train(four, data, cfg);

    CHECK(detail::FlatParams::gather(one).values == detail::FlatParams::gather(four).values);
    REQUIRE(h1.size() == h4.size());
    for (std::size_t e = 0; e < h1.size(); ++e) CHECK(h1[e].loss == h4[e].loss);
}

TEST_CASE("one epoch of tiny steps does not increase the training loss (median)") {
    int improved = 0;
    std::vector<double> deltas;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        TrainConfig cfg = small_config();
        cfg.epochs = 1;
        cfg.learning_rate = 1e-4;
        cfg.seed = seed;
        Dataset data = blob_data(60, seed);
        HybridModel model = random_model(cfg, 2);
        const double before = mean_train_loss(model, data);
        train(model, data, cfg);
        const double after = mean_train_loss(model, data);
        deltas.push_back(after - before);
        if (after <= before) ++improved;
    }
    std::sort(deltas.begin(), deltas.end());
    CHECK(deltas[2] <= 0.0); // median
}

TEST_CASE("predict_scores equals the positive-class forward output") {
    TrainConfig cfg = small_config();
    Dataset data = blob_data(30, 4);
    HybridModel model = random_model(cfg, 2);
    const auto scores = predict_scores(model, data);
    REQUIRE(scores.size() == data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        CHECK(scores[i] == forward(model, data.row(i))[1]);
        CHECK(scores[i] > 0.0);
        CHECK(scores[i] < 1.0);
    }
    // Scores only depend on the row, not the batch composition.
    const auto subset = predict_scores(model, {2, 0, 1}, data);
    CHECK(subset[0] == scores[2]);
    CHECK(subset[1] == scores[0]);
    CHECK(subset[2] == scores[1]);
}

TEST_CASE("training on separable blobs reaches high accuracy") {
    TrainConfig cfg = small_config();
    cfg.epochs = 30;
    cfg.learning_rate = 0.05;
    cfg.batch_size = 10;
    Dataset data = blob_data(80, 5);
    HybridModel model = random_model(cfg, 2);
    const auto history = train(model, data, cfg);
    REQUIRE(history.size() == 30);
    CHECK(history.back().train_acc >= 0.9);
}

TEST_CASE("train validates batch size against the split") {
    TrainConfig cfg = small_config();
    cfg.batch_size = 1000;
    Dataset data = blob_data(40, 3);
    HybridModel model = random_model(cfg, 2);
    CHECK_THROWS_AS(train(model, data, cfg), ConfigError);
}
