#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "vqcnet/circuit.hpp"
#include "vqcnet/parallel.hpp"
#include "vqcnet/rng.hpp"

namespace vqcnet {

// Defaults for the expressibility protocol; overridable via the CLI.
inline constexpr int kDefaultFidelitySamples = 5000;
inline constexpr int kDefaultFidelityBins = 75;
inline constexpr double kHaarFloor = 1e-12; // floor on reference bins inside the KL sum

struct ExpressibilityReport {
    std::string template_id;
    int num_qubits = 0;
    int num_samples = 0;
    int num_bins = 0;
    std::vector<double> histogram;      // empirical fidelity distribution
    std::vector<double> haar_reference; // analytic bin masses
    double kl_score = 0.0;              // KL(histogram || reference), nats
};

// Mass of one uniform bin of [0, 1] under the Haar pairwise-fidelity law
// P(F) = (N-1)(1-F)^(N-2), via its CDF 1-(1-F)^(N-1):
//   mass = (1 - F_lo)^(N-1) - (1 - F_hi)^(N-1).
inline double haar_fidelity_pdf_bin(int bin_index, int num_bins, int dim) {
    if (dim < 2) throw std::invalid_argument("haar_fidelity_pdf_bin: dim must be >= 2");
    if (num_bins < 1 || bin_index < 0 || bin_index >= num_bins)
        throw std::invalid_argument("haar_fidelity_pdf_bin: bad bin index");
    const double lo = static_cast<double>(bin_index) / num_bins;
    const double hi = static_cast<double>(bin_index + 1) / num_bins;
    return std::pow(1.0 - lo, dim - 1) - std::pow(1.0 - hi, dim - 1);
}

// |<psi_a|psi_b>|^2 for pairs of states prepared with i.i.d. uniform
// [0, 2pi) trainable parameters; inputs frozen at 0 so the score
// characterizes the trainable manifold only. Each pair draws from its own
// seed-derived stream, so the result is independent of evaluation order
// and thread count.
inline std::vector<double> sample_fidelities(const CircuitTemplate& circuit,
                                             int num_samples, std::uint64_t seed,
                                             int threads = 1) {
    if (num_samples < 100)
        throw std::invalid_argument("sample_fidelities: num_samples must be >= 100, got " +
                                    std::to_string(num_samples));
    circuit.validate();
    const Rng base = Rng(seed).stream("expressibility");
    const std::vector<double> zero_inputs(static_cast<std::size_t>(circuit.num_inputs), 0.0);
    std::vector<double> fidelities(static_cast<std::size_t>(num_samples));
    parallel_for(static_cast<std::size_t>(num_samples), threads, [&](std::size_t i) {
        Rng rng = base.at(i);
        std::vector<double> pa(static_cast<std::size_t>(circuit.num_params));
        std::vector<double> pb(pa.size());
        for (auto& v : pa) v = rng.uniform(0.0, 2.0 * std::numbers::pi);
        for (auto& v : pb) v = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const Statevector sa = run(circuit, pa, zero_inputs);
        const Statevector sb = run(circuit, pb, zero_inputs);
        fidelities[i] = std::clamp(std::norm(inner_product(sa, sb)), 0.0, 1.0);
    });
    return fidelities;
}

// KL(empirical || Haar) over a uniform fidelity histogram; lower = closer
// to Haar = more expressible. Reference bins are floored at kHaarFloor
// inside the sum; only non-empty histogram bins contribute.
inline ExpressibilityReport expressibility_score(const CircuitTemplate& circuit,
                                                 int num_samples, int num_bins,
                                                 std::uint64_t seed, int threads = 1) {
    if (num_bins < 10)
        throw std::invalid_argument("expressibility_score: num_bins must be >= 10, got " +
                                    std::to_string(num_bins));
    const auto fidelities = sample_fidelities(circuit, num_samples, seed, threads);

    ExpressibilityReport report;
    report.template_id = circuit.id;
    report.num_qubits = circuit.num_qubits;
    report.num_samples = num_samples;
    report.num_bins = num_bins;
    report.histogram.assign(static_cast<std::size_t>(num_bins), 0.0);
    for (double f : fidelities) {
        const int b = std::min(static_cast<int>(f * num_bins), num_bins - 1);
        report.histogram[static_cast<std::size_t>(b)] += 1.0;
    }
    for (auto& h : report.histogram) h /= num_samples;

    report.haar_reference.resize(static_cast<std::size_t>(num_bins));
    const int dim = 1 << circuit.num_qubits;
    for (int b = 0; b < num_bins; ++b)
        report.haar_reference[static_cast<std::size_t>(b)] =
            haar_fidelity_pdf_bin(b, num_bins, dim);

    double kl = 0.0;
    for (int b = 0; b < num_bins; ++b) {
        const double p = report.histogram[static_cast<std::size_t>(b)];
        if (p <= 0.0) continue;
        const double q = std::max(report.haar_reference[static_cast<std::size_t>(b)], kHaarFloor);
        kl += p * std::log(p / q);
    }
    report.kl_score = std::max(kl, 0.0);
    return report;
}

} // namespace vqcnet
