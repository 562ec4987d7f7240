#pragma once

#include "grasp/dataset.hpp"
#include "grasp/model.hpp"

#include <optional>
#include <vector>

namespace grasp {

// One training example: preprocessed input tensor(s) plus either a
// regression target (uni/multi-modal) or a class label (graspability).
struct TrainExample {
    Tensor input_a;            // [3, S, S]
    std::optional<Tensor> input_b;
    Tensor target;             // [4] regression target (regressors only)
    int label = 0;             // graspability class (0 = fail, 1 = success)
    std::string sample_id;
};

// Expands dataset samples into training examples per the run config:
// full-image policy yields one example per sample targeting its first
// positive grasp; grasp-centered policy yields one per positive grasp;
// graspability yields one query per positive and per negative rectangle.
std::vector<TrainExample> build_examples(const std::vector<RgbdSample>& samples,
                                         const RunConfig& cfg);

Tensor net_input_to_tensor(const NetInput& in);

struct TrainHistory {
    std::vector<double> stage1; // per-epoch mean training loss
    std::vector<double> stage2;
    std::vector<double> stage2_lr; // base lr in effect after each stage-2 epoch
};

struct TrainResult {
    TrainHistory history;
    std::size_t example_count = 0;
};

// Two-stage protocol: stage 1 trains the head against frozen backbone
// features (cached once, since a frozen backbone maps each input to a
// constant feature vector); stage 2 unfreezes everything and fine-tunes at
// the lower stage-2 rate with reduce-on-plateau. Deterministic per seed.
// Throws TrainAbort (with stage/epoch/batch) on a non-finite loss.
TrainResult train(ModelGraph& model, const std::vector<RgbdSample>& samples,
                  const RunConfig& cfg);

TrainResult train_on_examples(ModelGraph& model,
                              const std::vector<TrainExample>& examples,
                              const RunConfig& cfg);

} // namespace grasp
