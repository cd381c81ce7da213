#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

namespace vqcnet {

// Counter-style PRNG built on SplitMix64. Unlike std:: distributions, the
// low-level draws here produce the same byte-identical sequences on every
// platform and compiler, which the reproducibility contract requires.
// Named sub-streams are derived from one master seed so each component
// (data, init, training, expressibility) is independently reproducible.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {
        // Decorrelate trivially related seeds (0, 1, 2, ...).
        next_u64();
    }

    // Derive an independent stream keyed by a label, e.g. rng.stream("init").
    [[nodiscard]] Rng stream(std::string_view label) const {
        std::uint64_t h = 0xcbf29ce484222325ULL; // FNV-1a
        for (char c : label) {
            h ^= static_cast<std::uint8_t>(c);
            h *= 0x100000001b3ULL;
        }
        return Rng(state_ ^ mix(h));
    }

    // Derive a stream keyed by an index (one stream per Monte Carlo sample,
    // so results do not depend on evaluation order).
    [[nodiscard]] Rng at(std::uint64_t index) const {
        return Rng(state_ ^ mix(index + 0x9e3779b97f4a7c15ULL));
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller; deterministic given the stream state.
    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    // Index in [0, n).
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

    // Fisher-Yates; stable across platforms, unlike std::shuffle.
    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::swap(items[i - 1], items[below(i)]);
        }
    }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

} // namespace vqcnet
