#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "vqcnet/errors.hpp"
#include "vqcnet/rng.hpp"

namespace vqcnet {

enum class Split { train, val, test };

inline std::string split_name(Split s) {
    switch (s) {
        case Split::train: return "train";
        case Split::val: return "val";
        case Split::test: return "test";
    }
    return "?";
}

// Labeled feature table, row-major, with an optional per-sample split
// assignment (all train until assign_splits is called).
struct Dataset {
    int feature_dim = 0;
    std::vector<double> features; // [n_samples x feature_dim]
    std::vector<int> labels;
    std::vector<Split> split;

    std::size_t size() const { return labels.size(); }

    std::span<const double> row(std::size_t i) const {
        return {features.data() + i * static_cast<std::size_t>(feature_dim),
                static_cast<std::size_t>(feature_dim)};
    }

    std::vector<std::size_t> indices_of(Split s) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < split.size(); ++i)
            if (split[i] == s) out.push_back(i);
        return out;
    }

    void add_row(std::span<const double> x, int label) {
        features.insert(features.end(), x.begin(), x.end());
        labels.push_back(label);
        split.push_back(Split::train);
    }
};

// Shortest text form that parses back to the same double.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    double back = std::strtod(buf, nullptr);
    if (back == v) {
        // Try trimming to the shortest round-tripping precision.
        for (int prec = 1; prec < 17; ++prec) {
            char shorter[40];
            std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
            if (std::strtod(shorter, nullptr) == v) return shorter;
        }
    }
    return buf;
}

// Dataset CSV contract: header "f0,...,f{d-1},label", one numeric row per
// sample, labels in {0, 1}.
inline void write_csv(const Dataset& data, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open '" + path + "' for writing");
    for (int c = 0; c < data.feature_dim; ++c) out << "f" << c << ",";
    out << "label\n";
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto x = data.row(i);
        for (double v : x) out << format_double(v) << ",";
        out << data.labels[i] << "\n";
    }
    if (!out) throw DataError("write failed for '" + path + "'");
}

inline Dataset read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "' for reading");
    std::string line;
    if (!std::getline(in, line)) throw DataError("'" + path + "': empty file");

    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> cols;
    std::stringstream header(line);
    std::string field;
    while (std::getline(header, field, ',')) cols.push_back(field);
    if (cols.size() < 2 || cols.back() != "label")
        throw DataError("'" + path + "': header must be f0,...,f{d-1},label");
    for (std::size_t c = 0; c + 1 < cols.size(); ++c)
        if (cols[c] != "f" + std::to_string(c))
            throw DataError("'" + path + "': unexpected header column '" + cols[c] + "'");

    Dataset data;
    data.feature_dim = static_cast<int>(cols.size()) - 1;
    std::size_t row_num = 1;
    std::vector<double> x(static_cast<std::size_t>(data.feature_dim));
    while (std::getline(in, line)) {
        ++row_num;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream ss(line);
        for (int c = 0; c < data.feature_dim; ++c) {
            if (!std::getline(ss, field, ','))
                throw DataError("'" + path + "': row " + std::to_string(row_num) +
                                " has fewer than " + std::to_string(cols.size()) + " fields");
            char* end = nullptr;
            x[static_cast<std::size_t>(c)] = std::strtod(field.c_str(), &end);
            if (end == field.c_str() || *end != '\0')
                throw DataError("'" + path + "': row " + std::to_string(row_num) +
                                ": bad number '" + field + "'");
        }
        std::string label_field;
        if (!std::getline(ss, label_field, ','))
            throw DataError("'" + path + "': row " + std::to_string(row_num) + " missing label");
        std::string extra;
        if (std::getline(ss, extra, ','))
            throw DataError("'" + path + "': row " + std::to_string(row_num) +
                            " has extra fields");
        if (label_field != "0" && label_field != "1")
            throw DataError("'" + path + "': row " + std::to_string(row_num) +
                            ": label must be 0 or 1, got '" + label_field + "'");
        data.add_row(x, label_field == "1" ? 1 : 0);
    }
    if (data.size() == 0) throw DataError("'" + path + "': no data rows");
    return data;
}

// Seeded shuffle, then contiguous train/val/test blocks by fraction.
inline void assign_splits(Dataset& data, double train_frac, double val_frac,
                          std::uint64_t seed) {
    if (train_frac <= 0.0 || val_frac < 0.0 || train_frac + val_frac > 1.0)
        throw ConfigError("invalid split fractions");
    std::vector<std::size_t> order(data.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng = Rng(seed).stream("data");
    rng.shuffle(order);
    const auto n = data.size();
    const auto n_train = static_cast<std::size_t>(static_cast<double>(n) * train_frac);
    const auto n_val = static_cast<std::size_t>(static_cast<double>(n) * val_frac);
    for (std::size_t k = 0; k < n; ++k) {
        Split s = Split::test;
        if (k < n_train) s = Split::train;
        else if (k < n_train + n_val) s = Split::val;
        data.split[order[k]] = s;
    }
}

namespace detail {
inline void check_gen_size(int n) {
    if (n < 10) throw ConfigError("gen-data: n must be >= 10, got " + std::to_string(n));
}
} // namespace detail

// Two isotropic Gaussian clusters at (-1.25,-1.25) and (+1.25,+1.25),
// sigma 0.7, alternating labels (balanced within one sample).
inline Dataset gen_blobs(int n, std::uint64_t seed) {
    detail::check_gen_size(n);
    Rng rng = Rng(seed).stream("data");
    Dataset data;
    data.feature_dim = 2;
    constexpr double kCenter = 1.25, kSigma = 0.7;
    for (int i = 0; i < n; ++i) {
        const int label = i % 2;
        const double cx = label == 1 ? kCenter : -kCenter;
        const double x0 = cx + kSigma * rng.normal();
        const double x1 = cx + kSigma * rng.normal();
        const double x[2] = {x0, x1};
        data.add_row(std::span<const double>(x, 2), label);
    }
    return data;
}

// Two interleaved half-circles with Gaussian coordinate noise.
inline Dataset gen_moons(int n, std::uint64_t seed) {
    detail::check_gen_size(n);
    Rng rng = Rng(seed).stream("data");
    Dataset data;
    data.feature_dim = 2;
    constexpr double kNoise = 0.15;
    for (int i = 0; i < n; ++i) {
        const int label = i % 2;
        const double t = rng.uniform(0.0, std::numbers::pi);
        double x0, x1;
        if (label == 0) {
            x0 = std::cos(t);
            x1 = std::sin(t);
        } else {
            x0 = 1.0 - std::cos(t);
            x1 = 0.5 - std::sin(t);
        }
        x0 += kNoise * rng.normal();
        x1 += kNoise * rng.normal();
        const double x[2] = {x0, x1};
        data.add_row(std::span<const double>(x, 2), label);
    }
    return data;
}

// One feature per row: a uniform score s in [0, 1), label ~ Bernoulli(s).
// Calibrated by construction; exercises the reliability curve.
inline Dataset gen_bernoulli_scores(int n, std::uint64_t seed) {
    detail::check_gen_size(n);
    Rng rng = Rng(seed).stream("data");
    Dataset data;
    data.feature_dim = 1;
    for (int i = 0; i < n; ++i) {
        const double s = rng.uniform();
        const int label = rng.uniform() < s ? 1 : 0;
        data.add_row(std::span<const double>(&s, 1), label);
    }
    return data;
}

inline Dataset gen_dataset(const std::string& kind, int n, std::uint64_t seed) {
    if (kind == "blobs") return gen_blobs(n, seed);
    if (kind == "moons") return gen_moons(n, seed);
    if (kind == "bernoulli_scores") return gen_bernoulli_scores(n, seed);
    throw ConfigError("unknown dataset kind '" + kind +
                      "' (valid: blobs, moons, bernoulli_scores)");
}

} // namespace vqcnet
