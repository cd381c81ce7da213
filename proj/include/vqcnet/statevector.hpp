#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace vqcnet {

using cdouble = std::complex<double>;

// Gate vocabulary: single-qubit rotations and fixed gates plus two-qubit
// controlled gates. Rotations follow the half-angle convention,
// RY(t) = [[cos t/2, -sin t/2], [sin t/2, cos t/2]] and friends.
enum class GateKind { RX, RY, RZ, H, X, Z, CNOT, CZ, CRY, CRZ };

constexpr bool is_rotation(GateKind k) {
    return k == GateKind::RX || k == GateKind::RY || k == GateKind::RZ ||
           k == GateKind::CRY || k == GateKind::CRZ;
}

constexpr bool is_two_qubit(GateKind k) {
    return k == GateKind::CNOT || k == GateKind::CZ || k == GateKind::CRY ||
           k == GateKind::CRZ;
}

inline std::string gate_name(GateKind k) {
    switch (k) {
        case GateKind::RX: return "RX";
        case GateKind::RY: return "RY";
        case GateKind::RZ: return "RZ";
        case GateKind::H: return "H";
        case GateKind::X: return "X";
        case GateKind::Z: return "Z";
        case GateKind::CNOT: return "CNOT";
        case GateKind::CZ: return "CZ";
        case GateKind::CRY: return "CRY";
        case GateKind::CRZ: return "CRZ";
    }
    return "?";
}

// Whether a gate's angle slot indexes the trainable parameters or the
// classical input angles. The two index spaces are disjoint.
enum class SlotKind { trainable, input };

// One gate in a circuit. `control` is set iff the kind is two-qubit;
// `angle_slot` is set iff the kind is rotational.
struct GateOp {
    GateKind kind;
    int target = 0;
    std::optional<int> control;
    std::optional<int> angle_slot;
    SlotKind slot_kind = SlotKind::trainable;
};

using Mat2 = std::array<cdouble, 4>; // row-major 2x2

inline Mat2 rx_matrix(double theta) {
    const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    return {cdouble(c, 0), cdouble(0, -s), cdouble(0, -s), cdouble(c, 0)};
}

inline Mat2 ry_matrix(double theta) {
    const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    return {cdouble(c, 0), cdouble(-s, 0), cdouble(s, 0), cdouble(c, 0)};
}

inline Mat2 rz_matrix(double theta) {
    return {std::polar(1.0, -theta / 2.0), cdouble(0, 0), cdouble(0, 0),
            std::polar(1.0, theta / 2.0)};
}

inline Mat2 h_matrix() {
    const double s = 1.0 / std::sqrt(2.0);
    return {cdouble(s, 0), cdouble(s, 0), cdouble(s, 0), cdouble(-s, 0)};
}

inline Mat2 x_matrix() {
    return {cdouble(0, 0), cdouble(1, 0), cdouble(1, 0), cdouble(0, 0)};
}

inline Mat2 z_matrix() {
    return {cdouble(1, 0), cdouble(0, 0), cdouble(0, 0), cdouble(-1, 0)};
}

inline Mat2 identity_matrix() {
    return {cdouble(1, 0), cdouble(0, 0), cdouble(0, 0), cdouble(1, 0)};
}

// Dense statevector over n qubits. Amplitude index convention: qubit 0 is
// the MOST significant bit of the index, so |q0 q1 ... q_{n-1}> maps to
// index (q0 << (n-1)) | ... | q_{n-1}. Fixed project-wide.
class Statevector {
  public:
    static constexpr int max_qubits = 20;

    explicit Statevector(int num_qubits)
        : num_qubits_(num_qubits), amps_(dim_checked(num_qubits)) {
        amps_[0] = cdouble(1, 0);
    }

    int num_qubits() const { return num_qubits_; }
    std::size_t dim() const { return amps_.size(); }
    const std::vector<cdouble>& amplitudes() const { return amps_; }
    const cdouble& operator[](std::size_t i) const { return amps_[i]; }

    double norm_sq() const {
        double s = 0.0;
        for (const auto& a : amps_) s += std::norm(a);
        return s;
    }

    // In-place single-qubit unitary on `qubit`.
    void apply_1q(int qubit, const Mat2& u) {
        check_qubit(qubit);
        const std::size_t bit = bit_of(qubit);
        const std::size_t low_mask = bit - 1; // bits below the target bit
        const std::size_t half = amps_.size() >> 1;
        for (std::size_t k = 0; k < half; ++k) {
            const std::size_t i0 = ((k & ~low_mask) << 1) | (k & low_mask);
            const std::size_t i1 = i0 | bit;
            const cdouble v0 = amps_[i0];
            const cdouble v1 = amps_[i1];
            amps_[i0] = u[0] * v0 + u[1] * v1;
            amps_[i1] = u[2] * v0 + u[3] * v1;
        }
    }

    // In-place control-branched unitary: applies u0 on the target where the
    // control bit is 0 and u1 where it is 1. Ordinary controlled gates are
    // the u0 = identity case; the gradient engine also uses both branches.
    void apply_branched(int control, int target, const Mat2& u0, const Mat2& u1) {
        check_qubit(control);
        check_qubit(target);
        if (control == target)
            throw std::invalid_argument("control equals target qubit");
        const std::size_t cbit = bit_of(control);
        const std::size_t tbit = bit_of(target);
        const std::size_t half = amps_.size() >> 1;
        const std::size_t low_mask = tbit - 1;
        for (std::size_t k = 0; k < half; ++k) {
            const std::size_t i0 = ((k & ~low_mask) << 1) | (k & low_mask);
            const std::size_t i1 = i0 | tbit;
            const Mat2& u = (i0 & cbit) ? u1 : u0;
            const cdouble v0 = amps_[i0];
            const cdouble v1 = amps_[i1];
            amps_[i0] = u[0] * v0 + u[1] * v1;
            amps_[i1] = u[2] * v0 + u[3] * v1;
        }
    }

    void apply_controlled(int control, int target, const Mat2& u) {
        apply_branched(control, target, identity_matrix(), u);
    }

    // In-place gate dispatch. `angle` must be given iff the gate rotates.
    void apply(const GateOp& gate, std::optional<double> angle = std::nullopt) {
        if (is_rotation(gate.kind) != angle.has_value()) {
            throw std::invalid_argument(
                angle.has_value()
                    ? "angle supplied for non-rotational gate " + gate_name(gate.kind)
                    : "missing angle for rotational gate " + gate_name(gate.kind));
        }
        if (is_two_qubit(gate.kind) != gate.control.has_value()) {
            throw std::invalid_argument("control qubit presence does not match gate kind " +
                                        gate_name(gate.kind));
        }
        switch (gate.kind) {
            case GateKind::RX: apply_1q(gate.target, rx_matrix(*angle)); break;
            case GateKind::RY: apply_1q(gate.target, ry_matrix(*angle)); break;
            case GateKind::RZ: apply_1q(gate.target, rz_matrix(*angle)); break;
            case GateKind::H: apply_1q(gate.target, h_matrix()); break;
            case GateKind::X: apply_1q(gate.target, x_matrix()); break;
            case GateKind::Z: apply_1q(gate.target, z_matrix()); break;
            case GateKind::CNOT:
                apply_controlled(*gate.control, gate.target, x_matrix());
                break;
            case GateKind::CZ:
                apply_controlled(*gate.control, gate.target, z_matrix());
                break;
            case GateKind::CRY:
                apply_controlled(*gate.control, gate.target, ry_matrix(*angle));
                break;
            case GateKind::CRZ:
                apply_controlled(*gate.control, gate.target, rz_matrix(*angle));
                break;
        }
    }

    // Exact <Z_qubit>: +|a|^2 where the qubit's bit is 0, -|a|^2 where 1.
    double expectation_z(int qubit) const {
        check_qubit(qubit);
        const std::size_t bit = bit_of(qubit);
        double ez = 0.0;
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            const double p = std::norm(amps_[i]);
            ez += (i & bit) ? -p : p;
        }
        // The true value lies in [-1, 1]; shave off rounding spill.
        return std::clamp(ez, -1.0, 1.0);
    }

  private:
    static std::size_t dim_checked(int num_qubits) {
        if (num_qubits < 1 || num_qubits > max_qubits) {
            throw std::invalid_argument("num_qubits must be in [1, " +
                                        std::to_string(max_qubits) + "], got " +
                                        std::to_string(num_qubits));
        }
        return std::size_t{1} << num_qubits;
    }

    void check_qubit(int qubit) const {
        if (qubit < 0 || qubit >= num_qubits_) {
            throw std::out_of_range("qubit index " + std::to_string(qubit) +
                                    " out of range for " + std::to_string(num_qubits_) +
                                    " qubits");
        }
    }

    // Qubit 0 is the most significant bit of the amplitude index.
    std::size_t bit_of(int qubit) const {
        return std::size_t{1} << (num_qubits_ - 1 - qubit);
    }

    int num_qubits_;
    std::vector<cdouble> amps_;
};

// |0...0> on num_qubits wires; 1 <= num_qubits <= 20 (resource guard).
inline Statevector init_zero(int num_qubits) { return Statevector(num_qubits); }

// Pure-function variant: returns the transformed copy.
inline Statevector apply_gate(const Statevector& state, const GateOp& gate,
                              std::optional<double> angle = std::nullopt) {
    Statevector out = state;
    out.apply(gate, angle);
    return out;
}

// <a|b>, conjugate-linear in the first argument.
inline cdouble inner_product(const Statevector& a, const Statevector& b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw std::invalid_argument("inner_product dimension mismatch: " +
                                    std::to_string(a.num_qubits()) + " vs " +
                                    std::to_string(b.num_qubits()) + " qubits");
    }
    cdouble acc(0, 0);
    for (std::size_t i = 0; i < a.dim(); ++i) acc += std::conj(a[i]) * b[i];
    return acc;
}

inline double expectation_z(const Statevector& state, int qubit) {
    return state.expectation_z(qubit);
}

} // namespace vqcnet
