#include "grasp/report.hpp"

#include "grasp/errors.hpp"
#include "grasp/parallel.hpp"
#include "grasp/rng.hpp"
#include "grasp/tensor.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <thread>

using nlohmann::json;

namespace fs = std::filesystem;

namespace grasp {

EnvFingerprint environment_fingerprint() {
    EnvFingerprint env;
    env.hardware_threads = static_cast<int>(std::thread::hardware_concurrency());
    env.train_threads = thread_count();
    env.compiler = __VERSION__;
    env.scalar_bits = static_cast<int>(sizeof(Scalar) * 8);
    env.cpu = "unknown";
    std::ifstream cpuinfo("/proc/cpuinfo");
    std::string line;
    while (std::getline(cpuinfo, line)) {
        if (line.rfind("model name", 0) == 0) {
            const auto colon = line.find(':');
            if (colon != std::string::npos)
                env.cpu = line.substr(line.find_first_not_of(" \t", colon + 1));
            break;
        }
    }
    return env;
}

double recompute_mean(const std::vector<FoldSummary>& folds) {
    if (folds.empty()) return 0;
    double acc = 0;
    for (const auto& f : folds) acc += f.accuracy;
    return acc / static_cast<double>(folds.size());
}

double recompute_std(const std::vector<FoldSummary>& folds) {
    if (folds.empty()) return 0;
    const double mean = recompute_mean(folds);
    double acc = 0;
    for (const auto& f : folds) acc += (f.accuracy - mean) * (f.accuracy - mean);
    return std::sqrt(acc / static_cast<double>(folds.size()));
}

namespace {

json env_to_json(const EnvFingerprint& env) {
    return {{"cpu", env.cpu},
            {"hardware_threads", env.hardware_threads},
            {"train_threads", env.train_threads},
            {"compiler", env.compiler},
            {"scalar_bits", env.scalar_bits}};
}

json split_to_json_value(const SplitPlan& plan) {
    json folds = json::array();
    for (const auto& fold : plan.folds) folds.push_back(fold);
    return {{"mode", to_string(plan.mode)},
            {"seed", plan.seed},
            {"rng_algorithm", kRngAlgorithm},
            {"folds", folds}};
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

} // namespace

std::string report_to_json(const EvalReport& report) {
    json j;
    j["timestamp"] = report.timestamp;
    j["config"] = json::parse(run_config_to_json(report.config));
    j["split"] = split_to_json_value(report.split);
    j["dataset"] = {{"samples", report.dataset.samples},
                    {"positives", report.dataset.positives},
                    {"negatives", report.dataset.negatives},
                    {"object_id_source", report.dataset.object_id_source}};
    j["folds"] = json::array();
    for (const auto& f : report.folds)
        j["folds"].push_back({{"index", f.index}, {"accuracy", f.accuracy}, {"n", f.n}});
    j["mean_accuracy"] = report.mean_accuracy;
    j["std_accuracy"] = report.std_accuracy;
    j["fps"] = {{"mean", report.fps_mean},
                {"std", report.fps_std},
                {"env", env_to_json(report.env)}};
    j["loss_histories"] = json::array();
    for (std::size_t i = 0; i < report.fold_histories.size(); ++i) {
        const TrainHistory& h = report.fold_histories[i];
        j["loss_histories"].push_back({{"fold", i},
                                       {"stage1", h.stage1},
                                       {"stage2", h.stage2},
                                       {"stage2_lr", h.stage2_lr}});
    }
    j["outcomes_csv_path"] = report.outcomes_csv_path;
    return j.dump(2);
}

void emit_report(const EvalReport& report, const std::string& out_dir) {
    fs::create_directories(out_dir);
    const fs::path root(out_dir);

    EvalReport finalized = report;
    if (finalized.outcomes_csv_path.empty())
        finalized.outcomes_csv_path = (root / "outcomes.csv").string();
    if (finalized.timestamp.empty()) {
        const auto now = std::chrono::system_clock::now();
        finalized.timestamp =
            std::to_string(std::chrono::duration_cast<std::chrono::seconds>(
                               now.time_since_epoch())
                               .count());
    }

    {
        std::ofstream out(root / "report.json");
        if (!out) throw DataError("cannot write report to " + out_dir);
        out << report_to_json(finalized) << "\n";
    }
    {
        std::ofstream csv(finalized.outcomes_csv_path);
        if (!csv) throw DataError("cannot write " + finalized.outcomes_csv_path);
        csv << "fold,id,evaluated,success,jaccard,delta_theta,matched_index,"
               "clamped,pred_x,pred_y,pred_h,pred_w,pred_theta,note\n";
        char line[256];
        for (const auto& [fold, o] : finalized.outcomes) {
            std::snprintf(line, sizeof line,
                          "%d,%s,%d,%d,%.6f,%.6f,%d,%d,%.3f,%.3f,%.3f,%.3f,%.3f,",
                          fold, o.id.c_str(), o.evaluated ? 1 : 0, o.success ? 1 : 0,
                          o.jaccard, o.delta_theta, o.matched_index, o.clamped ? 1 : 0,
                          o.pred_x, o.pred_y, o.pred_h, o.pred_w, o.pred_theta);
            csv << line << csv_escape(o.note) << "\n";
        }
    }
    {
        std::ofstream csv(root / "folds.csv");
        csv << "fold,accuracy,n\n";
        for (const auto& f : finalized.folds)
            csv << f.index << "," << f.accuracy << "," << f.n << "\n";
    }
}

} // namespace grasp
