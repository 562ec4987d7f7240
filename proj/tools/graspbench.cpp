// graspbench: synthetic data generation, split planning, training,
// evaluation, cross-validation and speed measurement for the grasp
// prediction library.

#include "grasp/crossval.hpp"
#include "grasp/errors.hpp"
#include "grasp/parallel.hpp"
#include "grasp/splits.hpp"
#include "grasp/synthetic.hpp"
#include "grasp/trainer.hpp"
#include "grasp/weights_io.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitTrainAbort = 4;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw grasp::DataError("cannot read " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw grasp::DataError("cannot write " + path);
    out << content;
}

grasp::RunConfig load_config(const std::string& path) {
    return grasp::run_config_from_json(read_file(path));
}

// --data DIR or --synthetic N (in-memory scenes from the config seed)
struct DataSource {
    std::string data_dir;
    int synthetic_count = 0;
    int synthetic_size = 64;

    void add_options(CLI::App* cmd, bool required) {
        auto* data = cmd->add_option("--data", data_dir, "dataset root directory");
        auto* synth = cmd->add_option("--synthetic", synthetic_count,
                                      "generate N synthetic scenes instead");
        cmd->add_option("--size", synthetic_size, "synthetic scene size (pixels)")
            ->capture_default_str();
        data->excludes(synth);
        if (required) {
            // enforced manually so the error maps to the config exit code
        }
    }

    std::vector<grasp::RgbdSample> load(std::uint64_t seed,
                                        grasp::LoadReport* report = nullptr) const {
        if (!data_dir.empty()) return grasp::load_dataset(data_dir, report);
        if (synthetic_count > 0) {
            grasp::SyntheticConfig cfg;
            cfg.count = synthetic_count;
            cfg.image_size = synthetic_size;
            cfg.seed = seed;
            return grasp::gen_synthetic(cfg);
        }
        throw grasp::ConfigError("either --data or --synthetic is required");
    }
};

void save_model(const grasp::ModelGraph& model_const, grasp::ModelGraph& model,
                const grasp::RunConfig& cfg, const grasp::TrainResult& result,
                const std::string& out_dir) {
    fs::create_directories(out_dir);
    const fs::path root(out_dir);
    std::vector<const grasp::Param*> params;
    for (grasp::Param* p : model.all_params()) params.push_back(p);
    grasp::save_weights(params, (root / "weights.bin").string());
    write_file((root / "config.json").string(), grasp::run_config_to_json(cfg));
    json history;
    history["stage1"] = result.history.stage1;
    history["stage2"] = result.history.stage2;
    history["stage2_lr"] = result.history.stage2_lr;
    history["examples"] = result.example_count;
    history["parameters"] = model_const.param_count();
    write_file((root / "history.json").string(), history.dump(2) + "\n");
}

void load_model_weights(grasp::ModelGraph& model, const std::string& path) {
    grasp::load_weights(model.all_params(), path);
}

// bench can pick the config up from the sidecar written by `train`
std::string sidecar_config(const std::string& weights_path) {
    return (fs::path(weights_path).parent_path() / "config.json").string();
}

int run(int argc, char** argv) {
    CLI::App app{"grasp prediction benchmark harness"};
    app.require_subcommand(1);

    // ---- gen ----------------------------------------------------------------
    auto* gen = app.add_subcommand("gen", "generate a synthetic dataset tree");
    int gen_n = 200, gen_size = 64, gen_ipo = 4;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    gen->add_option("--n", gen_n, "scene count")->capture_default_str();
    gen->add_option("--size", gen_size, "image size")->capture_default_str();
    gen->add_option("--seed", gen_seed, "generator seed")->capture_default_str();
    gen->add_option("--images-per-object", gen_ipo, "scenes per bar archetype")
        ->capture_default_str();
    gen->add_option("--out", gen_out, "output directory")->required();

    // ---- split --------------------------------------------------------------
    auto* split = app.add_subcommand("split", "build a 5-fold split plan");
    std::string split_mode = "image-wise", split_out = "split.json";
    std::uint64_t split_seed = 0;
    DataSource split_data;
    split->add_option("--mode", split_mode, "image-wise | object-wise")
        ->capture_default_str();
    split->add_option("--seed", split_seed, "shuffle seed")->capture_default_str();
    split->add_option("--out", split_out, "plan output path")->capture_default_str();
    split_data.add_options(split, true);

    // ---- train ----------------------------------------------------------------
    auto* train_cmd = app.add_subcommand("train", "train a model on a dataset");
    std::string train_config, train_out = "model";
    DataSource train_data;
    train_cmd->add_option("--config", train_config, "run config JSON")->required();
    train_cmd->add_option("--out", train_out, "output directory")->capture_default_str();
    train_data.add_options(train_cmd, true);

    // ---- eval -----------------------------------------------------------------
    auto* eval_cmd = app.add_subcommand("eval", "evaluate trained weights");
    std::string eval_config, eval_weights, eval_report;
    DataSource eval_data;
    eval_cmd->add_option("--config", eval_config, "run config JSON")->required();
    eval_cmd->add_option("--weights", eval_weights, "weight file")->required();
    eval_cmd->add_option("--report", eval_report, "report output directory");
    eval_data.add_options(eval_cmd, true);

    // ---- crossval ---------------------------------------------------------------
    auto* cv = app.add_subcommand("crossval", "5-fold cross-validation");
    std::string cv_config, cv_report = "report", cv_mode = "image-wise";
    bool cv_parallel = false, cv_no_speed = false;
    DataSource cv_data;
    cv->add_option("--config", cv_config, "run config JSON")->required();
    cv->add_option("--report", cv_report, "report output directory")
        ->capture_default_str();
    cv->add_option("--mode", cv_mode, "image-wise | object-wise")->capture_default_str();
    cv->add_flag("--parallel-folds", cv_parallel, "train folds concurrently");
    cv->add_flag("--no-speed", cv_no_speed, "skip the fps measurement");
    cv_data.add_options(cv, true);

    // ---- bench ---------------------------------------------------------------
    auto* bench = app.add_subcommand("bench", "measure prediction speed");
    std::string bench_weights, bench_config, bench_report;
    int bench_repeats = 200;
    DataSource bench_data;
    bench->add_option("--weights", bench_weights, "weight file")->required();
    bench->add_option("--repeats", bench_repeats, "timed passes (>= 100)")
        ->capture_default_str();
    bench->add_option("--config", bench_config,
                      "run config JSON (default: config.json next to weights)");
    bench->add_option("--report", bench_report, "optional JSON output path");
    bench_data.add_options(bench, false);

    CLI11_PARSE(app, argc, argv);

    if (gen->parsed()) {
        grasp::SyntheticConfig cfg;
        cfg.count = gen_n;
        cfg.image_size = gen_size;
        cfg.seed = gen_seed;
        cfg.images_per_object = gen_ipo;
        const auto samples = grasp::gen_synthetic(cfg);
        grasp::write_cornell_tree(samples, gen_out);
        std::size_t pos = 0, neg = 0;
        for (const auto& s : samples) {
            pos += s.positive_grasps.size();
            neg += s.negative_grasps.size();
        }
        std::cout << "wrote " << samples.size() << " scenes (" << pos << " positive, "
                  << neg << " negative grasps) to " << gen_out << "\n";
        return kExitOk;
    }

    if (split->parsed()) {
        const auto samples = split_data.load(split_seed);
        const auto plan = grasp::make_splits(
            samples, grasp::split_mode_from_string(split_mode), split_seed);
        write_file(split_out, grasp::split_plan_to_json(plan) + "\n");
        std::cout << "wrote " << split_out << " (" << samples.size() << " samples, "
                  << split_mode << ")\n";
        return kExitOk;
    }

    if (train_cmd->parsed()) {
        const grasp::RunConfig cfg = load_config(train_config);
        const auto samples = train_data.load(cfg.seed);
        auto model = grasp::build_model(cfg);
        std::cout << "training " << to_string(cfg.variant) << " model, "
                  << model->param_count() << " parameters, " << samples.size()
                  << " samples\n";
        const grasp::TrainResult result = grasp::train(*model, samples, cfg);
        save_model(*model, *model, cfg, result, train_out);
        const auto& h = result.history;
        std::cout << "stage 1 final loss: "
                  << (h.stage1.empty() ? 0.0 : h.stage1.back())
                  << ", stage 2 final loss: "
                  << (h.stage2.empty() ? 0.0 : h.stage2.back()) << "\n"
                  << "saved model to " << train_out << "\n";
        return kExitOk;
    }

    if (eval_cmd->parsed()) {
        const grasp::RunConfig cfg = load_config(eval_config);
        const auto samples = eval_data.load(cfg.seed);
        auto model = grasp::build_model(cfg);
        load_model_weights(*model, eval_weights);
        const grasp::FoldEval eval = grasp::evaluate_fold(*model, samples, cfg);
        std::cout << "rectangle-metric accuracy: " << eval.accuracy << " ("
                  << eval.evaluated << " samples)\n";
        if (!eval_report.empty()) {
            fs::create_directories(eval_report);
            json j;
            j["config"] = json::parse(grasp::run_config_to_json(cfg));
            j["accuracy"] = eval.accuracy;
            j["n"] = eval.evaluated;
            write_file((fs::path(eval_report) / "eval.json").string(), j.dump(2) + "\n");
            grasp::EvalReport rep;
            rep.config = cfg;
            rep.outcomes.reserve(eval.outcomes.size());
            for (const auto& o : eval.outcomes) rep.outcomes.push_back({0, o});
            rep.folds.push_back({0, eval.accuracy, eval.evaluated});
            rep.mean_accuracy = eval.accuracy;
            rep.env = grasp::environment_fingerprint();
            grasp::emit_report(rep, eval_report);
        }
        return kExitOk;
    }

    if (cv->parsed()) {
        const grasp::RunConfig cfg = load_config(cv_config);
        const auto samples = cv_data.load(cfg.seed);
        grasp::CrossvalOptions options;
        options.mode = grasp::split_mode_from_string(cv_mode);
        options.parallel_folds = cv_parallel;
        options.measure_speed = !cv_no_speed;
        const grasp::EvalReport report = grasp::run_crossval(cfg, samples, options);
        grasp::emit_report(report, cv_report);
        std::cout << "fold accuracies:";
        for (const auto& f : report.folds) std::cout << " " << f.accuracy;
        std::cout << "\nmean " << report.mean_accuracy << " +- " << report.std_accuracy;
        if (options.measure_speed) std::cout << ", " << report.fps_mean << " fps";
        std::cout << "\nreport written to " << cv_report << "\n";
        return kExitOk;
    }

    if (bench->parsed()) {
        const std::string config_path =
            bench_config.empty() ? sidecar_config(bench_weights) : bench_config;
        const grasp::RunConfig cfg = load_config(config_path);
        auto samples = bench_data.data_dir.empty() && bench_data.synthetic_count == 0
                           ? [&] {
                                 grasp::SyntheticConfig scfg;
                                 scfg.count = 20;
                                 scfg.image_size = 64;
                                 scfg.seed = cfg.seed;
                                 return grasp::gen_synthetic(scfg);
                             }()
                           : bench_data.load(cfg.seed);
        auto model = grasp::build_model(cfg);
        load_model_weights(*model, bench_weights);
        if (bench_repeats < 100)
            throw grasp::ConfigError("bench: --repeats must be >= 100");
        const grasp::TimingResult timing =
            grasp::time_inference(*model, samples, cfg, bench_repeats, 10);
        const grasp::EnvFingerprint env = grasp::environment_fingerprint();
        std::cout << "fps mean " << timing.fps_mean << ", std " << timing.fps_std
                  << " (" << bench_repeats << " passes, single-threaded, " << env.cpu
                  << ")\n";
        if (!bench_report.empty()) {
            json j;
            j["fps"] = {{"mean", timing.fps_mean}, {"std", timing.fps_std}};
            j["repeats"] = bench_repeats;
            j["env"] = {{"cpu", env.cpu},
                        {"hardware_threads", env.hardware_threads},
                        {"compiler", env.compiler},
                        {"scalar_bits", env.scalar_bits}};
            write_file(bench_report, j.dump(2) + "\n");
        }
        return kExitOk;
    }

    return kExitOther;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const grasp::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const grasp::TrainAbort& e) {
        std::cerr << "training aborted: " << e.what() << "\n";
        return kExitTrainAbort;
    } catch (const grasp::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitOther;
    }
}
