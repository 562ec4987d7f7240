#include "grasp/metrics.hpp"

#include "grasp/errors.hpp"

#include <cmath>
#include <limits>

namespace grasp {

MetricConfig::MetricConfig()
    : point_distance_threshold(std::numeric_limits<double>::quiet_NaN()) {}

MetricConfig::MetricConfig(double angle_th, double jaccard_th, double point_th)
    : angle_threshold(angle_th),
      jaccard_threshold(jaccard_th),
      point_distance_threshold(point_th) {}

void MetricConfig::validate_rectangle() const {
    if (!(angle_threshold > 0.0 && angle_threshold <= 90.0))
        throw ConfigError("MetricConfig: angle_threshold must be in (0, 90]");
    if (!(jaccard_threshold > 0.0 && jaccard_threshold <= 1.0))
        throw ConfigError("MetricConfig: jaccard_threshold must be in (0, 1]");
}

void MetricConfig::validate_point() const {
    if (!(point_distance_threshold > 0.0))
        throw ConfigError("MetricConfig: point_distance_threshold must be supplied and > 0");
}

MatchResult rectangle_metric(const GraspRect& pred,
                             const std::vector<GraspRect>& ground_truth,
                             const MetricConfig& cfg) {
    cfg.validate_rectangle();
    if (ground_truth.empty())
        throw DataError("rectangle_metric: empty ground-truth set (unusable annotation)");

    MatchResult best_match;     // best among rectangles passing both thresholds
    MatchResult best_overall;   // best Jaccard regardless, for failure reporting
    best_overall.jaccard = -1.0;

    for (size_t i = 0; i < ground_truth.size(); ++i) {
        const GraspRect& g = ground_truth[i];
        const double j = jaccard(pred, g);
        const double d = angle_delta(pred.theta(), g.theta());
        if (j > best_overall.jaccard) {
            best_overall.jaccard = j;
            best_overall.angle_delta = d;
            best_overall.index = static_cast<int>(i);
        }
        if (d < cfg.angle_threshold && j > cfg.jaccard_threshold) {
            if (!best_match.success || j > best_match.jaccard) {
                best_match.success = true;
                best_match.index = static_cast<int>(i);
                best_match.jaccard = j;
                best_match.angle_delta = d;
            }
        }
    }
    if (best_match.success) return best_match;
    best_overall.success = false;
    best_overall.index = -1;
    if (best_overall.jaccard < 0.0) best_overall.jaccard = 0.0;
    return best_overall;
}

bool point_metric(const GraspRect& pred,
                  const std::vector<GraspRect>& ground_truth,
                  const MetricConfig& cfg) {
    cfg.validate_point();
    if (ground_truth.empty())
        throw DataError("point_metric: empty ground-truth set (unusable annotation)");
    double best = std::numeric_limits<double>::infinity();
    for (const GraspRect& g : ground_truth) {
        const double dx = pred.x() - g.x();
        const double dy = pred.y() - g.y();
        best = std::min(best, std::hypot(dx, dy));
    }
    return best < cfg.point_distance_threshold;
}

std::size_t select_best_index(const std::vector<std::pair<GraspRect, double>>& candidates) {
    if (candidates.empty())
        throw DataError("select_best: empty candidate list");
    size_t best = 0;
    for (size_t i = 1; i < candidates.size(); ++i) {
        if (candidates[i].second > candidates[best].second) best = i;
    }
    return best;
}

const GraspRect& select_best(const std::vector<std::pair<GraspRect, double>>& candidates) {
    return candidates[select_best_index(candidates)].first;
}

} // namespace grasp
