#pragma once

#include <cmath>
#include <numbers>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vqcnet/statevector.hpp"

namespace vqcnet {

// Scale applied to tanh-bounded features to obtain embedding angles.
inline constexpr double kInputAngleScale = std::numbers::pi / 2.0;

// Parameterized circuit: an ordered gate list whose rotational gates
// reference either trainable slots [0, num_params) or input slots
// [0, num_inputs). Immutable after construction; validate() enforces the
// structural invariants.
struct CircuitTemplate {
    std::string id;
    int num_qubits = 0;
    std::vector<GateOp> gates;
    int num_params = 0;
    int num_inputs = 0;

    void validate() const {
        if (num_qubits < 1 || num_qubits > Statevector::max_qubits)
            throw std::invalid_argument("template '" + id + "': bad num_qubits " +
                                        std::to_string(num_qubits));
        if (num_params < 0 || num_inputs < 0)
            throw std::invalid_argument("template '" + id + "': negative slot count");
        std::set<int> seen_params, seen_inputs;
        for (const auto& g : gates) {
            if (g.target < 0 || g.target >= num_qubits)
                throw std::invalid_argument("template '" + id + "': target out of range");
            if (g.control.has_value() != is_two_qubit(g.kind))
                throw std::invalid_argument("template '" + id +
                                            "': control presence mismatch for " +
                                            gate_name(g.kind));
            if (g.control) {
                if (*g.control < 0 || *g.control >= num_qubits)
                    throw std::invalid_argument("template '" + id + "': control out of range");
                if (*g.control == g.target)
                    throw std::invalid_argument("template '" + id + "': control == target");
            }
            if (g.angle_slot.has_value() != is_rotation(g.kind))
                throw std::invalid_argument("template '" + id +
                                            "': angle slot presence mismatch for " +
                                            gate_name(g.kind));
            if (g.angle_slot) {
                const int bound = (g.slot_kind == SlotKind::trainable) ? num_params : num_inputs;
                if (*g.angle_slot < 0 || *g.angle_slot >= bound)
                    throw std::invalid_argument("template '" + id + "': slot index " +
                                                std::to_string(*g.angle_slot) +
                                                " outside its space");
                (g.slot_kind == SlotKind::trainable ? seen_params : seen_inputs)
                    .insert(*g.angle_slot);
            }
        }
        if (static_cast<int>(seen_params.size()) != num_params)
            throw std::invalid_argument("template '" + id + "': unreferenced trainable slot");
        if (static_cast<int>(seen_inputs.size()) != num_inputs)
            throw std::invalid_argument("template '" + id + "': unreferenced input slot");
    }
};

// A template together with concrete angles for both slot spaces.
struct BoundCircuit {
    CircuitTemplate circuit;
    std::vector<double> params;
    std::vector<double> inputs;

    void validate() const {
        circuit.validate();
        if (static_cast<int>(params.size()) != circuit.num_params)
            throw std::invalid_argument("bound circuit: params length " +
                                        std::to_string(params.size()) + " != num_params " +
                                        std::to_string(circuit.num_params));
        if (static_cast<int>(inputs.size()) != circuit.num_inputs)
            throw std::invalid_argument("bound circuit: inputs length " +
                                        std::to_string(inputs.size()) + " != num_inputs " +
                                        std::to_string(circuit.num_inputs));
    }
};

enum class TemplateFamily { vqc1, vqc2, vqc3, vqc4, vqc5, vqc6 };

inline const std::vector<std::string>& template_names() {
    static const std::vector<std::string> names = {"vqc1", "vqc2", "vqc3",
                                                   "vqc4", "vqc5", "vqc6"};
    return names;
}

inline TemplateFamily parse_template_name(const std::string& name) {
    const auto& names = template_names();
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return static_cast<TemplateFamily>(i);
    std::string valid;
    for (const auto& n : names) valid += (valid.empty() ? "" : ", ") + n;
    throw std::invalid_argument("unknown template '" + name + "' (valid: " + valid + ")");
}

namespace detail {

inline void add_rot_layer(CircuitTemplate& t, GateKind kind, int& next_param) {
    for (int q = 0; q < t.num_qubits; ++q)
        t.gates.push_back({kind, q, std::nullopt, next_param++, SlotKind::trainable});
}

inline void add_ring(CircuitTemplate& t, GateKind kind, int* next_param = nullptr) {
    const int n = t.num_qubits;
    for (int q = 0; q < n; ++q) {
        GateOp g{kind, (q + 1) % n, q, std::nullopt, SlotKind::trainable};
        if (next_param) g.angle_slot = (*next_param)++;
        t.gates.push_back(g);
    }
}

} // namespace detail

// The six built-in families. Each layer of:
//   vqc1: RY on each qubit, RZ on each qubit, ring of CNOT      (2n params)
//   vqc2: RY on each qubit, linear chain of CNOT                (n params)
//   vqc3: RY on each qubit, ring of CRZ                         (2n params)
//   vqc4: RX on each qubit, RZ on each qubit, ring of CZ        (2n params)
//   vqc5: RY on each qubit, all-to-all CNOT (i -> i+1..n-1)     (n params)
//   vqc6: RY on each qubit, no entanglers                       (n params)
// Every template starts with one RY input-embedding gate per qubit, so
// num_inputs = num_qubits. Family ids follow the configuration names used
// in the reference experiments; the gate layouts are this library's own.
inline CircuitTemplate builtin_template(TemplateFamily family, int num_qubits, int layers) {
    const std::string name = template_names()[static_cast<int>(family)];
    if (layers < 1)
        throw std::invalid_argument("template '" + name + "': layers must be >= 1");
    if (num_qubits < 1 || num_qubits > Statevector::max_qubits)
        throw std::invalid_argument("template '" + name + "': bad num_qubits " +
                                    std::to_string(num_qubits));
    if (num_qubits < 2 && family != TemplateFamily::vqc6)
        throw std::invalid_argument("template '" + name +
                                    "': entangling family needs at least 2 qubits");

    CircuitTemplate t;
    t.id = name;
    t.num_qubits = num_qubits;
    t.num_inputs = num_qubits;
    for (int q = 0; q < num_qubits; ++q)
        t.gates.push_back({GateKind::RY, q, std::nullopt, q, SlotKind::input});

    int p = 0;
    for (int layer = 0; layer < layers; ++layer) {
        switch (family) {
            case TemplateFamily::vqc1:
                detail::add_rot_layer(t, GateKind::RY, p);
                detail::add_rot_layer(t, GateKind::RZ, p);
                detail::add_ring(t, GateKind::CNOT);
                break;
            case TemplateFamily::vqc2:
                detail::add_rot_layer(t, GateKind::RY, p);
                for (int q = 0; q + 1 < num_qubits; ++q)
                    t.gates.push_back({GateKind::CNOT, q + 1, q, std::nullopt,
                                       SlotKind::trainable});
                break;
            case TemplateFamily::vqc3:
                detail::add_rot_layer(t, GateKind::RY, p);
                detail::add_ring(t, GateKind::CRZ, &p);
                break;
            case TemplateFamily::vqc4:
                detail::add_rot_layer(t, GateKind::RX, p);
                detail::add_rot_layer(t, GateKind::RZ, p);
                detail::add_ring(t, GateKind::CZ);
                break;
            case TemplateFamily::vqc5:
                detail::add_rot_layer(t, GateKind::RY, p);
                for (int i = 0; i + 1 < num_qubits; ++i)
                    for (int j = i + 1; j < num_qubits; ++j)
                        t.gates.push_back({GateKind::CNOT, j, i, std::nullopt,
                                           SlotKind::trainable});
                break;
            case TemplateFamily::vqc6:
                detail::add_rot_layer(t, GateKind::RY, p);
                break;
        }
    }
    t.num_params = p;
    t.validate();
    return t;
}

inline CircuitTemplate builtin_template(const std::string& name, int num_qubits, int layers) {
    return builtin_template(parse_template_name(name), num_qubits, layers);
}

// Maps tanh-bounded features (open interval (-1, 1)) to embedding angles in
// (-pi/2, pi/2). A magnitude of 1 or more means the upstream tanh was
// skipped, so it is rejected.
inline std::vector<double> embed_inputs(std::span<const double> features) {
    std::vector<double> angles;
    angles.reserve(features.size());
    for (std::size_t i = 0; i < features.size(); ++i) {
        if (!(std::abs(features[i]) < 1.0))
            throw std::invalid_argument("embed_inputs: feature " + std::to_string(i) +
                                        " has |value| >= 1; expected tanh output");
        angles.push_back(features[i] * kInputAngleScale);
    }
    return angles;
}

inline std::vector<double> embed_inputs(const std::vector<double>& features) {
    return embed_inputs(std::span<const double>(features));
}

inline double slot_angle(const GateOp& g, std::span<const double> params,
                         std::span<const double> inputs) {
    return g.slot_kind == SlotKind::trainable ? params[static_cast<std::size_t>(*g.angle_slot)]
                                              : inputs[static_cast<std::size_t>(*g.angle_slot)];
}

// Deterministic execution: |0...0>, then the gate list in order.
inline Statevector run(const CircuitTemplate& circuit, std::span<const double> params,
                       std::span<const double> inputs) {
    Statevector state(circuit.num_qubits);
    for (const auto& g : circuit.gates) {
        if (g.angle_slot)
            state.apply(g, slot_angle(g, params, inputs));
        else
            state.apply(g);
    }
    return state;
}

inline Statevector run(const BoundCircuit& bound) {
    bound.validate();
    return run(bound.circuit, bound.params, bound.inputs);
}

// [<Z_0>, ..., <Z_{n-1}>] of the final state; each value in [-1, 1].
inline std::vector<double> measure_outputs(const CircuitTemplate& circuit,
                                           std::span<const double> params,
                                           std::span<const double> inputs) {
    const Statevector state = run(circuit, params, inputs);
    std::vector<double> out(static_cast<std::size_t>(circuit.num_qubits));
    for (int q = 0; q < circuit.num_qubits; ++q) out[static_cast<std::size_t>(q)] = state.expectation_z(q);
    return out;
}

inline std::vector<double> measure_outputs(const BoundCircuit& bound) {
    bound.validate();
    return measure_outputs(bound.circuit, bound.params, bound.inputs);
}

} // namespace vqcnet
