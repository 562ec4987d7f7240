#pragma once

#include "grasp/geometry.hpp"

#include <cstddef>
#include <vector>

namespace grasp {

struct MetricConfig {
    double angle_threshold = 30.0;      // degrees, in (0, 90]
    double jaccard_threshold = 0.25;    // in (0, 1]
    double point_distance_threshold;    // pixels, > 0; no default on purpose

    MetricConfig();  // leaves point_distance_threshold unset (NaN)
    MetricConfig(double angle_th, double jaccard_th, double point_th);

    void validate_rectangle() const;    // angle + jaccard thresholds
    void validate_point() const;        // point threshold supplied and > 0
};

// Outcome of matching one prediction against a ground-truth set.
// On success `index` is the matching rectangle with the highest Jaccard and
// `jaccard`/`angle_delta` describe that match. On failure `index` is -1 and
// the fields describe the highest-Jaccard ground-truth rectangle overall.
struct MatchResult {
    bool success = false;
    int index = -1;
    double jaccard = 0.0;
    double angle_delta = 0.0;
};

// Rectangle metric: success iff some ground-truth rectangle satisfies
// angle_delta < cfg.angle_threshold AND jaccard > cfg.jaccard_threshold
// (both strict). Throws DataError on an empty ground-truth set.
MatchResult rectangle_metric(const GraspRect& pred,
                             const std::vector<GraspRect>& ground_truth,
                             const MetricConfig& cfg);

// Point metric: success iff the minimum center distance is strictly below
// cfg.point_distance_threshold. Throws DataError on an empty set.
bool point_metric(const GraspRect& pred,
                  const std::vector<GraspRect>& ground_truth,
                  const MetricConfig& cfg);

// Highest-scored candidate; ties break toward the lowest index.
// Throws DataError on an empty list.
const GraspRect& select_best(const std::vector<std::pair<GraspRect, double>>& candidates);
std::size_t select_best_index(const std::vector<std::pair<GraspRect, double>>& candidates);

} // namespace grasp
