#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "vqcnet/gradients.hpp"
#include "vqcnet/rng.hpp"

using namespace vqcnet;

namespace {

CircuitTemplate one_qubit_ry() {
    CircuitTemplate t;
    t.id = "ry1";
    t.num_qubits = 1;
    t.num_params = 1;
    t.num_inputs = 1;
    t.gates.push_back({GateKind::RY, 0, std::nullopt, 0, SlotKind::input});
    t.gates.push_back({GateKind::RY, 0, std::nullopt, 0, SlotKind::trainable});
    return t;
}

void fill_random(std::vector<double>& v, Rng& rng, double lo, double hi) {
    for (auto& x : v) x = rng.uniform(lo, hi);
}

} // namespace

TEST_CASE("single RY gradient matches -sin(theta)") {
    const CircuitTemplate t = one_qubit_ry();
    {
        const QuantumJacobian jac = parameter_shift_jacobian(t, std::vector<double>{0.0},
                                                             std::vector<double>{0.0});
        CHECK(std::abs(jac.param(0, 0)) < 1e-15); // -sin 0
    }
    {
        const QuantumJacobian jac = parameter_shift_jacobian(
            t, std::vector<double>{std::numbers::pi / 2}, std::vector<double>{0.0});
        CHECK(jac.param(0, 0) == Catch::Approx(-1.0).margin(1e-12));
    }
}

TEST_CASE("parameter-shift matches finite differences on random bound circuits") {
    Rng rng(4242);
    int checked_entries = 0;
    for (int trial = 0; trial < 24; ++trial) {
        const auto fam = static_cast<TemplateFamily>(trial % 6);
        const int qubits = 2 + static_cast<int>(rng.below(3)); // 2..4
        const int layers = 1 + static_cast<int>(rng.below(3)); // 1..3
        const CircuitTemplate t = builtin_template(fam, qubits, layers);
        std::vector<double> params(static_cast<std::size_t>(t.num_params));
        std::vector<double> inputs(static_cast<std::size_t>(t.num_inputs));
        fill_random(params, rng, 0.0, 2 * std::numbers::pi);
        fill_random(inputs, rng, -1.5, 1.5);

        const QuantumJacobian jac = parameter_shift_jacobian(t, params, inputs);
        for (int slot = 0; slot < t.num_params; ++slot) {
            const auto fd = oracle::fd_measure_gradient(t, params, inputs, true, slot);
            for (int q = 0; q < t.num_qubits; ++q) {
                REQUIRE(jac.param(q, slot) == Catch::Approx(fd[static_cast<std::size_t>(q)])
                                                  .margin(1e-6));
                ++checked_entries;
            }
        }
        for (int slot = 0; slot < t.num_inputs; ++slot) {
            const auto fd = oracle::fd_measure_gradient(t, params, inputs, false, slot);
            for (int q = 0; q < t.num_qubits; ++q)
                REQUIRE(jac.input(q, slot) == Catch::Approx(fd[static_cast<std::size_t>(q)])
                                                  .margin(1e-6));
        }
    }
    CHECK(checked_entries > 500);
}

TEST_CASE("controlled-rotation slots follow the four-term rule exactly") {
    // A CRY whose control is rotated off-axis, so both branches matter.
    CircuitTemplate t;
    t.id = "cry-probe";
    t.num_qubits = 2;
    t.num_params = 2;
    t.num_inputs = 0;
    t.gates.push_back({GateKind::RY, 0, std::nullopt, 0, SlotKind::trainable});
    t.gates.push_back({GateKind::CRY, 1, 0, 1, SlotKind::trainable});
    t.gates.push_back({GateKind::H, 0, std::nullopt, std::nullopt, SlotKind::trainable});

    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> params = {rng.uniform(0.0, 2 * std::numbers::pi),
                                      rng.uniform(0.0, 2 * std::numbers::pi)};
        const QuantumJacobian jac = parameter_shift_jacobian(t, params, {});
        for (int slot = 0; slot < 2; ++slot) {
            const auto fd = oracle::fd_measure_gradient(t, params, {}, true, slot);
            for (int q = 0; q < 2; ++q)
                REQUIRE(jac.param(q, slot) ==
                        Catch::Approx(fd[static_cast<std::size_t>(q)]).margin(1e-7));
        }
    }
}

TEST_CASE("a slot shared by several gates sums per-occurrence gradients") {
    // Same angle driving RY on both qubits of a vqc-style block.
    CircuitTemplate tied;
    tied.id = "tied";
    tied.num_qubits = 2;
    tied.num_params = 1;
    tied.num_inputs = 0;
    tied.gates.push_back({GateKind::RY, 0, std::nullopt, 0, SlotKind::trainable});
    tied.gates.push_back({GateKind::CNOT, 1, 0, std::nullopt, SlotKind::trainable});
    tied.gates.push_back({GateKind::RY, 1, std::nullopt, 0, SlotKind::trainable});

    // The same circuit with the slot split in two.
    CircuitTemplate split = tied;
    split.id = "split";
    split.num_params = 2;
    split.gates[2].angle_slot = 1;

    Rng rng(5150);
    for (int trial = 0; trial < 10; ++trial) {
        const double theta = rng.uniform(0.0, 2 * std::numbers::pi);
        const QuantumJacobian tied_jac =
            parameter_shift_jacobian(tied, std::vector<double>{theta}, {});
        const QuantumJacobian split_jac =
            parameter_shift_jacobian(split, std::vector<double>{theta, theta}, {});
        for (int q = 0; q < 2; ++q) {
            const double sum = split_jac.param(q, 0) + split_jac.param(q, 1);
            REQUIRE(tied_jac.param(q, 0) == Catch::Approx(sum).margin(1e-12));
        }
        // And against finite differences of the tied circuit itself.
        const auto fd =
            oracle::fd_measure_gradient(tied, std::vector<double>{theta}, {}, true, 0);
        for (int q = 0; q < 2; ++q)
            REQUIRE(tied_jac.param(q, 0) ==
                    Catch::Approx(fd[static_cast<std::size_t>(q)]).margin(1e-6));
    }
}

TEST_CASE("vqc6 Jacobian is block-diagonal across qubits") {
    const CircuitTemplate t = builtin_template("vqc6", 4, 3);
    Rng rng(33);
    std::vector<double> params(static_cast<std::size_t>(t.num_params));
    std::vector<double> inputs(static_cast<std::size_t>(t.num_inputs));
    for (auto& p : params) p = rng.uniform(0.0, 2 * std::numbers::pi);
    for (auto& x : inputs) x = rng.uniform(-1.0, 1.0);

    const QuantumJacobian jac = parameter_shift_jacobian(t, params, inputs);
    // Slot j acts on qubit j % 4 by construction; cross entries are zero up
    // to amplitude-product rounding.
    for (int q = 0; q < 4; ++q) {
        for (int slot = 0; slot < t.num_params; ++slot) {
            if (slot % 4 != q) CHECK(std::abs(jac.param(q, slot)) < 1e-14);
        }
        for (int slot = 0; slot < t.num_inputs; ++slot) {
            if (slot != q) CHECK(std::abs(jac.input(q, slot)) < 1e-14);
        }
    }
}

TEST_CASE("jacobian dimensions and finiteness") {
    const CircuitTemplate t = builtin_template("vqc3", 3, 2);
    std::vector<double> params(static_cast<std::size_t>(t.num_params), 0.4);
    std::vector<double> inputs(static_cast<std::size_t>(t.num_inputs), 0.2);
    const QuantumJacobian jac = parameter_shift_jacobian(t, params, inputs);
    REQUIRE(jac.by_param.size() ==
            static_cast<std::size_t>(t.num_qubits) * static_cast<std::size_t>(t.num_params));
    REQUIRE(jac.by_input.size() ==
            static_cast<std::size_t>(t.num_qubits) * static_cast<std::size_t>(t.num_inputs));
    for (double v : jac.by_param) CHECK(std::isfinite(v));
    for (double v : jac.by_input) CHECK(std::isfinite(v));
}
