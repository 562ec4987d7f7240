#pragma once

#include "grasp/report.hpp"

#include <cstdint>

namespace grasp {

struct CrossvalOptions {
    SplitMode mode = SplitMode::image_wise;
    bool parallel_folds = false; // folds already use independent seeds
    int timing_repeats = 100;
    int timing_warmup = 10;
    bool measure_speed = true;
};

struct TimingResult {
    double fps_mean = 0;
    double fps_std = 0; // population std of instantaneous per-pass fps
};

// Full-pipeline single-sample prediction speed (preprocess + forward +
// decode), single-threaded regardless of the training thread count.
TimingResult time_inference(ModelGraph& model, const std::vector<RgbdSample>& samples,
                            const RunConfig& cfg, int repeats, int warmup);

// Five-fold cross-validation: for every fold, train on the other four and
// evaluate on it. Fold f trains with seed mix(cfg.seed, f), so sequential
// and parallel execution produce identical reports.
EvalReport run_crossval(const RunConfig& cfg, const std::vector<RgbdSample>& samples,
                        const CrossvalOptions& options);

} // namespace grasp
