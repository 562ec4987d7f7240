#include "grasp/crossval.hpp"

#include "grasp/errors.hpp"
#include "grasp/parallel.hpp"
#include "grasp/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <thread>

namespace grasp {

TimingResult time_inference(ModelGraph& model, const std::vector<RgbdSample>& samples,
                            const RunConfig& cfg, int repeats, int warmup) {
    if (samples.empty()) throw DataError("time_inference: no samples");
    if (repeats < 1) throw ConfigError("time_inference: repeats must be >= 1");

    const int previous_threads = thread_count();
    set_thread_count(1);
    using clock = std::chrono::steady_clock;
    std::vector<double> per_pass;
    per_pass.reserve(static_cast<std::size_t>(repeats));
    double total = 0;
    for (int i = 0; i < warmup + repeats; ++i) {
        const RgbdSample& s = samples[static_cast<std::size_t>(i) % samples.size()];
        const auto t0 = clock::now();
        (void)predict_grasp(model, s, cfg);
        const auto t1 = clock::now();
        if (i < warmup) continue;
        const double dt = std::chrono::duration<double>(t1 - t0).count();
        per_pass.push_back(dt);
        total += dt;
    }
    set_thread_count(previous_threads);

    TimingResult r;
    r.fps_mean = static_cast<double>(repeats) / total;
    double acc = 0;
    for (double dt : per_pass) {
        const double f = 1.0 / dt;
        acc += (f - r.fps_mean) * (f - r.fps_mean);
    }
    r.fps_std = std::sqrt(acc / static_cast<double>(per_pass.size()));
    return r;
}

EvalReport run_crossval(const RunConfig& cfg, const std::vector<RgbdSample>& samples,
                        const CrossvalOptions& options) {
    if (samples.empty()) throw DataError("run_crossval: empty dataset");
    if (cfg.threads > 0) set_thread_count(cfg.threads);

    const SplitPlan plan = make_splits(samples, options.mode, cfg.seed);
    for (std::size_t f = 0; f < plan.folds.size(); ++f)
        if (plan.folds[f].empty())
            throw DataError("run_crossval: fold " + std::to_string(f) + " is empty");

    std::map<std::string, const RgbdSample*> by_id;
    for (const RgbdSample& s : samples) by_id[s.id] = &s;

    EvalReport report;
    report.config = cfg;
    report.split = plan;
    report.dataset.samples = samples.size();
    for (const RgbdSample& s : samples) {
        report.dataset.positives += s.positive_grasps.size();
        report.dataset.negatives += s.negative_grasps.size();
    }
    report.dataset.object_id_source = "dataset";
    report.folds.resize(5);
    report.fold_histories.resize(5);

    std::vector<std::vector<std::pair<int, SampleOutcome>>> fold_outcomes(5);
    std::unique_ptr<ModelGraph> last_model;

    auto run_fold = [&](int f) {
        std::vector<RgbdSample> train_set, eval_set;
        for (std::size_t g = 0; g < 5; ++g) {
            for (const std::string& id : plan.folds[g]) {
                const auto it = by_id.find(id);
                if (it == by_id.end())
                    throw DataError("run_crossval: split references unknown id " + id);
                (static_cast<int>(g) == f ? eval_set : train_set).push_back(*it->second);
            }
        }
        RunConfig fold_cfg = cfg;
        fold_cfg.seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(f));
        auto model = build_model(fold_cfg);
        const TrainResult trained = train(*model, train_set, fold_cfg);
        const FoldEval eval = evaluate_fold(*model, eval_set, fold_cfg);

        report.folds[f] = {f, eval.accuracy, eval.evaluated};
        report.fold_histories[f] = trained.history;
        for (const SampleOutcome& o : eval.outcomes) fold_outcomes[f].push_back({f, o});
        if (f == 4) last_model = std::move(model);
    };

    if (options.parallel_folds) {
        // independent per-fold seeds make this bit-identical to sequential
        set_thread_count(1);
        std::vector<std::thread> workers;
        std::vector<std::exception_ptr> errors(5);
        for (int f = 0; f < 5; ++f)
            workers.emplace_back([&, f] {
                try {
                    run_fold(f);
                } catch (...) {
                    errors[f] = std::current_exception();
                }
            });
        for (auto& w : workers) w.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    } else {
        for (int f = 0; f < 5; ++f) run_fold(f);
    }

    for (int f = 0; f < 5; ++f)
        for (auto& o : fold_outcomes[f]) report.outcomes.push_back(std::move(o));
    report.mean_accuracy = recompute_mean(report.folds);
    report.std_accuracy = recompute_std(report.folds);

    if (options.measure_speed && last_model) {
        const TimingResult timing = time_inference(
            *last_model, samples, cfg, options.timing_repeats, options.timing_warmup);
        report.fps_mean = timing.fps_mean;
        report.fps_std = timing.fps_std;
    }
    report.env = environment_fingerprint();
    return report;
}

} // namespace grasp
