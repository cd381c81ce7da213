#pragma once

#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "vqcnet/circuit.hpp"
#include "vqcnet/statevector.hpp"

namespace vqcnet {

// d<Z_i>/d(angle) for every measured qubit i and every angle slot, split by
// slot space. Row-major [num_qubits x num_slots].
struct QuantumJacobian {
    int num_qubits = 0;
    int num_params = 0;
    int num_inputs = 0;
    std::vector<double> by_param;
    std::vector<double> by_input;

    double param(int qubit, int slot) const {
        return by_param[static_cast<std::size_t>(qubit) * num_params + slot];
    }
    double input(int qubit, int slot) const {
        return by_input[static_cast<std::size_t>(qubit) * num_inputs + slot];
    }
};

namespace detail {

enum class ShiftMode {
    angle,       // replace the occurrence angle by angle + delta
    target_rot,  // apply the occurrence, then R(delta) on its target
    branch_rot,  // apply the occurrence, then R(+delta)/R(-delta) on the
                 // target for control bit 0/1 (exp(-i delta Z(x)P/2))
};

inline std::vector<double> measure_shifted(const CircuitTemplate& circuit,
                                           std::span<const double> params,
                                           std::span<const double> inputs,
                                           std::size_t occurrence, double delta,
                                           ShiftMode mode) {
    Statevector state(circuit.num_qubits);
    for (std::size_t k = 0; k < circuit.gates.size(); ++k) {
        const GateOp& g = circuit.gates[k];
        std::optional<double> angle;
        if (g.angle_slot) angle = slot_angle(g, params, inputs);
        if (k != occurrence) {
            state.apply(g, angle);
            continue;
        }
        switch (mode) {
            case ShiftMode::angle:
                state.apply(g, *angle + delta);
                break;
            case ShiftMode::target_rot: {
                state.apply(g, angle);
                state.apply_1q(g.target, g.kind == GateKind::CRY ? ry_matrix(delta)
                                                                 : rz_matrix(delta));
                break;
            }
            case ShiftMode::branch_rot: {
                state.apply(g, angle);
                const Mat2 plus = g.kind == GateKind::CRY ? ry_matrix(delta) : rz_matrix(delta);
                const Mat2 minus = g.kind == GateKind::CRY ? ry_matrix(-delta) : rz_matrix(-delta);
                state.apply_branched(*g.control, g.target, plus, minus);
                break;
            }
        }
    }
    std::vector<double> out(static_cast<std::size_t>(circuit.num_qubits));
    for (int q = 0; q < circuit.num_qubits; ++q)
        out[static_cast<std::size_t>(q)] = state.expectation_z(q);
    return out;
}

} // namespace detail

// Exact analytic Jacobian via the parameter-shift rule.
//
// Plain rotations (generator P/2, eigenvalues +-1/2):
//   dE/dt = [E(t + pi/2) - E(t - pi/2)] / 2.
// Controlled rotations CRY/CRZ (generator |1><1| (x) P/2 = G1/2 - G2/2 with
// G1 = I (x) P/2, G2 = Z (x) P/2, both with eigenvalues +-1/2): the gate
// factors as exp(-i(t/2)G1) exp(+i(t/2)G2), so the +-1/2 outer coefficients
// combine with each factor's own +-pi/2 two-term rule into four terms:
//   dE/dt = [E|R(+pi/2) - E|R(-pi/2) - E|ZP(+pi/2) + E|ZP(-pi/2)] / 4,
// where R(s) is an extra target rotation inserted after the occurrence and
// ZP(s) the branched rotation exp(-is Z(x)P/2).
// Slots shared by several gates are differentiated per occurrence and
// summed. One full-circuit evaluation yields a whole Jacobian column, and
// accumulation follows gate order, so entries are bitwise reproducible.
inline QuantumJacobian parameter_shift_jacobian(const CircuitTemplate& circuit,
                                                std::span<const double> params,
                                                std::span<const double> inputs) {
    constexpr double half_pi = std::numbers::pi / 2.0;
    QuantumJacobian jac;
    jac.num_qubits = circuit.num_qubits;
    jac.num_params = circuit.num_params;
    jac.num_inputs = circuit.num_inputs;
    jac.by_param.assign(static_cast<std::size_t>(circuit.num_qubits) * circuit.num_params, 0.0);
    jac.by_input.assign(static_cast<std::size_t>(circuit.num_qubits) * circuit.num_inputs, 0.0);

    auto accumulate = [&](std::vector<double>& dest, int num_slots, int slot,
                          const std::vector<double>& column, double weight) {
        for (int q = 0; q < circuit.num_qubits; ++q)
            dest[static_cast<std::size_t>(q) * num_slots + slot] +=
                weight * column[static_cast<std::size_t>(q)];
    };

    for (std::size_t k = 0; k < circuit.gates.size(); ++k) {
        const GateOp& g = circuit.gates[k];
        if (!g.angle_slot) continue;
        std::vector<double>& dest =
            g.slot_kind == SlotKind::trainable ? jac.by_param : jac.by_input;
        const int num_slots =
            g.slot_kind == SlotKind::trainable ? circuit.num_params : circuit.num_inputs;
        const int slot = *g.angle_slot;
        switch (g.kind) {
            case GateKind::RX:
            case GateKind::RY:
            case GateKind::RZ: {
                const auto up =
                    detail::measure_shifted(circuit, params, inputs, k, half_pi,
                                            detail::ShiftMode::angle);
                const auto down =
                    detail::measure_shifted(circuit, params, inputs, k, -half_pi,
                                            detail::ShiftMode::angle);
                accumulate(dest, num_slots, slot, up, 0.5);
                accumulate(dest, num_slots, slot, down, -0.5);
                break;
            }
            case GateKind::CRY:
            case GateKind::CRZ: {
                const auto rot_up =
                    detail::measure_shifted(circuit, params, inputs, k, half_pi,
                                            detail::ShiftMode::target_rot);
                const auto rot_down =
                    detail::measure_shifted(circuit, params, inputs, k, -half_pi,
                                            detail::ShiftMode::target_rot);
                const auto branch_up =
                    detail::measure_shifted(circuit, params, inputs, k, half_pi,
                                            detail::ShiftMode::branch_rot);
                const auto branch_down =
                    detail::measure_shifted(circuit, params, inputs, k, -half_pi,
                                            detail::ShiftMode::branch_rot);
                accumulate(dest, num_slots, slot, rot_up, 0.25);
                accumulate(dest, num_slots, slot, rot_down, -0.25);
                accumulate(dest, num_slots, slot, branch_up, -0.25);
                accumulate(dest, num_slots, slot, branch_down, 0.25);
                break;
            }
            default:
                throw std::invalid_argument("no shift rule for gate kind " +
                                            gate_name(g.kind));
        }
    }
    return jac;
}

inline QuantumJacobian parameter_shift_jacobian(const BoundCircuit& bound) {
    bound.validate();
    return parameter_shift_jacobian(bound.circuit, bound.params, bound.inputs);
}

} // namespace vqcnet
