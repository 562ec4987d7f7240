#pragma once

#include "grasp/config.hpp"
#include "grasp/layers.hpp"

#include <memory>
#include <string>
#include <vector>

namespace grasp {

// Assembled predictor. Uni-modal: one residual backbone feeding a 2-layer
// fully-connected head. Multi-modal (and its graspability variant): two
// backbones whose pooled features are L2-normalized and concatenated before
// a 3-layer head.
class ModelGraph {
public:
    explicit ModelGraph(const RunConfig& cfg);

    Variant variant() const { return cfg_.variant; }
    const RunConfig& config() const { return cfg_; }

    bool is_multi_input() const { return cfg_.variant != Variant::uni_modal; }
    std::size_t feature_width() const { return feature_width_; }
    std::size_t head_input_width() const;
    std::size_t param_count() const;

    // b is required for multi-input variants and ignored otherwise.
    Tensor forward(const Tensor& a, const Tensor* b, Mode mode);
    void backward(const Tensor& grad_out);

    // Pooled (and, for multi-input, normalized + concatenated) features.
    // With a frozen backbone these are constant per input, which lets the
    // trainer cache them through stage 1.
    Tensor features(const Tensor& a, const Tensor* b, Mode mode);
    Tensor head_forward(const Tensor& features, Mode mode);
    void head_backward(const Tensor& grad_out);

    std::vector<Param*> backbone_params();
    std::vector<Param*> head_params();
    std::vector<Param*> all_params();
    void set_backbone_frozen(bool frozen);

private:
    RunConfig cfg_;
    Sequential backbone_a_;
    Sequential backbone_b_; // multi-input only
    L2Normalize norm_a_, norm_b_;
    Sequential head_;
    std::size_t feature_width_ = 0;
};

// Deterministic construction: Xavier initialization for every weight
// (seeded from cfg.seed), zero biases. Validates the config.
std::unique_ptr<ModelGraph> build_model(const RunConfig& cfg);

} // namespace grasp
