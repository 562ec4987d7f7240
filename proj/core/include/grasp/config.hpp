#pragma once

#include "grasp/metrics.hpp"
#include "grasp/preprocess.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace grasp {

enum class Variant { uni_modal, multi_modal, graspability };

std::string to_string(Variant v);
Variant variant_from_string(const std::string& s);

enum class Activation { relu, tanh, linear };

std::string to_string(Activation a);
Activation activation_from_string(const std::string& s);

// Residual backbone sizing: a strided stem convolution followed by stages
// of residual blocks. Every stage after the first downsamples by 2 in its
// first block.
struct BackboneSpec {
    std::size_t stem_channels = 8;
    struct Stage {
        std::size_t blocks = 2;
        std::size_t channels = 8;
    };
    std::vector<Stage> stages = {{2, 8}, {2, 16}, {2, 32}};

    void validate() const;
};

// Fully-connected head. widths includes the output layer; activations run
// parallel to widths (default: relu on hidden layers, linear output).
// Dropout placement is fixed by the variant: after the first layer
// (uni-modal) or after the first and second (multi-modal, graspability).
struct HeadSpec {
    std::vector<std::size_t> widths;
    std::vector<Activation> activations;
    double dropout_p = 0.5;

    void validate() const;
};

struct StagePlan {
    int epochs = 0;
    double lr0 = 0;
    double decay = 1e-6;
    double momentum = 0.9;
    int batch_size = 32;

    void validate(const char* stage) const;
};

struct PlateauPlan {
    int patience = 3;
    double factor = 0.5;
    double min_lr = 1e-6;
};

// Two-stage protocol: stage 1 trains the head with frozen backbones;
// stage 2 fine-tunes everything at a lower, plateau-scheduled rate.
struct TrainPlan {
    StagePlan stage1;
    StagePlan stage2;
    PlateauPlan plateau;
};

struct RunConfig {
    Variant variant = Variant::uni_modal;
    Modality modality = Modality::rgb; // uni-modal input plan
    BackboneSpec backbone;
    HeadSpec head;       // defaulted per variant when empty
    PreprocessConfig preprocess;
    TrainPlan train;     // stage defaults depend on the variant
    MetricConfig metrics;
    std::uint64_t seed = 0;
    double fixed_h = 10; // gripper geometry used when decoding predictions
    double fixed_w = 16;
    int threads = 0;     // 0 = hardware default

    void validate() const;
};

// Fills variant-dependent defaults (head widths, stage-1 hyperparameters)
// for any field the document omitted, then validates.
RunConfig run_config_from_json(const std::string& text);
RunConfig default_run_config(Variant v);

// Fully resolved config echo (embedded in every report).
std::string run_config_to_json(const RunConfig& cfg);

} // namespace grasp
