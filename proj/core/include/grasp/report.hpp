#pragma once

#include "grasp/config.hpp"
#include "grasp/predict.hpp"
#include "grasp/splits.hpp"
#include "grasp/trainer.hpp"

#include <string>
#include <vector>

namespace grasp {

struct EnvFingerprint {
    std::string cpu;
    int hardware_threads = 0;
    int train_threads = 0;
    std::string compiler;
    int scalar_bits = 0;
};

EnvFingerprint environment_fingerprint();

struct FoldSummary {
    int index = 0;
    double accuracy = 0;
    std::size_t n = 0; // evaluated samples
};

struct DatasetSummary {
    std::size_t samples = 0;
    std::size_t positives = 0;
    std::size_t negatives = 0;
    std::string object_id_source;
};

struct EvalReport {
    RunConfig config;
    SplitPlan split;
    DatasetSummary dataset;
    std::vector<FoldSummary> folds;
    double mean_accuracy = 0;
    double std_accuracy = 0; // population std over folds
    double fps_mean = 0;
    double fps_std = 0;
    EnvFingerprint env;
    std::vector<TrainHistory> fold_histories;          // one per fold
    std::vector<std::pair<int, SampleOutcome>> outcomes; // (fold, outcome)
    std::string timestamp;
    std::string outcomes_csv_path;
};

// Recomputes mean/std from the fold summaries (kept exactly consistent
// with the stored aggregate fields).
double recompute_mean(const std::vector<FoldSummary>& folds);
double recompute_std(const std::vector<FoldSummary>& folds);

std::string report_to_json(const EvalReport& report);

// Writes report.json, outcomes.csv (one row per sample) and folds.csv
// (accuracy-per-fold, box-plot ready) under out_dir.
void emit_report(const EvalReport& report, const std::string& out_dir);

} // namespace grasp
