#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vqcnet/errors.hpp"

namespace vqcnet {

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;
};

struct PrPoint {
    double recall = 0.0;
    double precision = 0.0;
};

struct ReliabilityPoint {
    double mean_predicted = 0.0;
    double fraction_positive = 0.0;
    long count = 0;
};

struct RocResult {
    std::vector<RocPoint> points;
    double auc = 0.0;
};

struct EvalReport {
    double accuracy = 0.0;
    double auc = 0.0;
    double threshold = 0.5;
    std::vector<RocPoint> roc_points;
    std::vector<PrPoint> pr_points;
    std::vector<ReliabilityPoint> reliability_points;
};

namespace detail {

inline void check_scores_labels(std::span<const double> scores, std::span<const int> labels) {
    if (scores.empty()) throw DataError("metrics: empty input");
    if (scores.size() != labels.size())
        throw DataError("metrics: scores length " + std::to_string(scores.size()) +
                        " != labels length " + std::to_string(labels.size()));
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] != 0 && labels[i] != 1)
            throw DataError("metrics: non-binary label " + std::to_string(labels[i]) +
                            " at row " + std::to_string(i));
}

// Sample indices ordered by score descending; ties keep input order.
inline std::vector<std::size_t> order_by_score_desc(std::span<const double> scores) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    return order;
}

} // namespace detail

// Fraction of samples where (score >= threshold) equals the label.
inline double accuracy(std::span<const double> scores, std::span<const int> labels,
                       double threshold = 0.5) {
    detail::check_scores_labels(scores, labels);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < scores.size(); ++i)
        if ((scores[i] >= threshold ? 1 : 0) == labels[i]) ++correct;
    return static_cast<double>(correct) / static_cast<double>(scores.size());
}

// Threshold sweep over unique scores descending, preceded by a +inf
// sentinel so the curve starts at (0, 0). Ties form a single diagonal
// segment, so the trapezoidal AUC equals the Mann-Whitney statistic with
// half credit per tied pair.
inline RocResult roc_curve(std::span<const double> scores, std::span<const int> labels) {
    detail::check_scores_labels(scores, labels);
    const long positives = std::count(labels.begin(), labels.end(), 1);
    const long negatives = static_cast<long>(labels.size()) - positives;
    if (positives == 0) throw DataError("roc_curve: no positive labels in input");
    if (negatives == 0) throw DataError("roc_curve: no negative labels in input");

    const auto order = detail::order_by_score_desc(scores);
    RocResult result;
    result.points.push_back({0.0, 0.0});
    long tp = 0, fp = 0;
    double auc = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        const double t = scores[order[i]];
        while (i < order.size() && scores[order[i]] == t) {
            (labels[order[i]] == 1 ? tp : fp) += 1;
            ++i;
        }
        const RocPoint prev = result.points.back();
        const RocPoint cur = {static_cast<double>(fp) / negatives,
                              static_cast<double>(tp) / positives};
        auc += (cur.fpr - prev.fpr) * (cur.tpr + prev.tpr) / 2.0;
        result.points.push_back(cur);
    }
    result.auc = auc;
    return result;
}

// One point per unique score threshold, descending; recall is then
// non-decreasing along the sweep. Precision with zero predicted positives
// is defined as 1.0.
inline std::vector<PrPoint> pr_curve(std::span<const double> scores,
                                     std::span<const int> labels) {
    detail::check_scores_labels(scores, labels);
    const long positives = std::count(labels.begin(), labels.end(), 1);
    if (positives == 0) throw DataError("pr_curve: no positive labels in input");

    const auto order = detail::order_by_score_desc(scores);
    std::vector<PrPoint> points;
    long tp = 0, predicted = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        const double t = scores[order[i]];
        while (i < order.size() && scores[order[i]] == t) {
            tp += labels[order[i]];
            ++predicted;
            ++i;
        }
        const double precision =
            predicted == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(predicted);
        points.push_back({static_cast<double>(tp) / positives, precision});
    }
    return points;
}

// Uniform bins over [0, 1]; per non-empty bin: (mean score, positive
// fraction, count). Empty bins are omitted; a score of exactly 1 lands in
// the last bin.
inline std::vector<ReliabilityPoint> reliability_curve(std::span<const double> scores,
                                                       std::span<const int> labels,
                                                       int num_bins) {
    detail::check_scores_labels(scores, labels);
    if (num_bins < 2) throw std::invalid_argument("reliability_curve: num_bins must be >= 2");
    std::vector<double> score_sum(static_cast<std::size_t>(num_bins), 0.0);
    std::vector<long> pos(static_cast<std::size_t>(num_bins), 0);
    std::vector<long> count(static_cast<std::size_t>(num_bins), 0);
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const int b = std::clamp(static_cast<int>(scores[i] * num_bins), 0, num_bins - 1);
        score_sum[static_cast<std::size_t>(b)] += scores[i];
        pos[static_cast<std::size_t>(b)] += labels[i];
        count[static_cast<std::size_t>(b)] += 1;
    }
    std::vector<ReliabilityPoint> points;
    for (int b = 0; b < num_bins; ++b) {
        const auto bi = static_cast<std::size_t>(b);
        if (count[bi] == 0) continue;
        points.push_back({score_sum[bi] / count[bi],
                          static_cast<double>(pos[bi]) / count[bi], count[bi]});
    }
    return points;
}

inline EvalReport evaluate(std::span<const double> scores, std::span<const int> labels,
                           double threshold = 0.5, int reliability_bins = 10) {
    EvalReport report;
    report.threshold = threshold;
    report.accuracy = accuracy(scores, labels, threshold);
    RocResult roc = roc_curve(scores, labels);
    report.auc = roc.auc;
    report.roc_points = std::move(roc.points);
    report.pr_points = pr_curve(scores, labels);
    report.reliability_points = reliability_curve(scores, labels, reliability_bins);
    return report;
}

} // namespace vqcnet
