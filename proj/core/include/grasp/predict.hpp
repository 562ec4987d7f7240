#pragma once

#include "grasp/dataset.hpp"
#include "grasp/model.hpp"

#include <functional>
#include <string>
#include <vector>

namespace grasp {

struct Prediction {
    GraspRect rect{0, 0, 1, 1, 0}; // placeholder until filled in
    bool clamped = false;          // center was pulled back inside the image
    TargetVec raw;                 // network output before decoding
};

// Preprocess -> evaluation-mode forward -> decode. The returned rectangle
// uses the run's fixed gripper extents; out-of-bounds centers are clamped
// into the image and flagged.
Prediction predict_grasp(ModelGraph& model, const RgbdSample& sample,
                         const RunConfig& cfg);

// Probability that the candidate rectangle is a successful grasp, from a
// grasp-centered patch query against the graspability variant.
double predict_graspability(ModelGraph& model, const RgbdSample& sample,
                            const GraspRect& candidate, const RunConfig& cfg);

struct SampleOutcome {
    std::string id;
    bool evaluated = false;
    bool success = false;
    double jaccard = 0;
    double delta_theta = 0;
    int matched_index = -1;
    bool clamped = false;
    double pred_x = 0, pred_y = 0, pred_h = 0, pred_w = 0, pred_theta = 0;
    std::string note; // reason when a sample could not be evaluated
};

struct FoldEval {
    double accuracy = 0;       // successes / evaluated
    std::size_t evaluated = 0;
    std::vector<SampleOutcome> outcomes; // one per sample, input order
};

// Rectangle-metric accuracy of the model over a fold. Samples with no
// positive annotations cannot be scored and are recorded with a note.
FoldEval evaluate_fold(ModelGraph& model, const std::vector<RgbdSample>& samples,
                       const RunConfig& cfg);

// Same scoring loop with an arbitrary predictor (accuracy machinery is
// testable against injected oracles this way).
using PredictorFn = std::function<Prediction(const RgbdSample&)>;
FoldEval evaluate_fold_with(const PredictorFn& predictor,
                            const std::vector<RgbdSample>& samples,
                            const MetricConfig& metrics);

} // namespace grasp
