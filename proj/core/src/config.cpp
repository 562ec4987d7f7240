#include "grasp/config.hpp"

#include "grasp/errors.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <set>

using nlohmann::json;

namespace grasp {

std::string to_string(Variant v) {
    switch (v) {
        case Variant::uni_modal: return "uni-modal";
        case Variant::multi_modal: return "multi-modal";
        case Variant::graspability: return "graspability";
    }
    return "uni-modal";
}

Variant variant_from_string(const std::string& s) {
    if (s == "uni-modal") return Variant::uni_modal;
    if (s == "multi-modal") return Variant::multi_modal;
    if (s == "graspability") return Variant::graspability;
    throw ConfigError("unknown variant '" + s +
                      "' (uni-modal, multi-modal, graspability)");
}

std::string to_string(Activation a) {
    switch (a) {
        case Activation::relu: return "relu";
        case Activation::tanh: return "tanh";
        case Activation::linear: return "linear";
    }
    return "linear";
}

Activation activation_from_string(const std::string& s) {
    if (s == "relu") return Activation::relu;
    if (s == "tanh") return Activation::tanh;
    if (s == "linear") return Activation::linear;
    throw ConfigError("unknown activation '" + s + "' (relu, tanh, linear)");
}

void BackboneSpec::validate() const {
    if (stem_channels == 0) throw ConfigError("backbone: stem_channels must be > 0");
    if (stages.empty()) throw ConfigError("backbone: at least one stage required");
    for (const auto& s : stages)
        if (s.blocks == 0 || s.channels == 0)
            throw ConfigError("backbone: stage blocks and channels must be > 0");
}

void HeadSpec::validate() const {
    if (widths.empty()) throw ConfigError("head: widths must not be empty");
    if (!activations.empty() && activations.size() != widths.size())
        throw ConfigError("head: activations must match widths in length");
    if (!(dropout_p >= 0.0 && dropout_p < 1.0))
        throw ConfigError("head: dropout_p must be in [0, 1)");
}

void StagePlan::validate(const char* stage) const {
    const std::string tag = std::string("train.") + stage + ": ";
    if (epochs < 0) throw ConfigError(tag + "epochs must be >= 0");
    if (epochs > 0 && !(lr0 > 0)) throw ConfigError(tag + "lr0 must be > 0");
    if (!(decay >= 0)) throw ConfigError(tag + "decay must be >= 0");
    if (!(momentum >= 0 && momentum < 1)) throw ConfigError(tag + "momentum in [0, 1)");
    if (batch_size <= 0) throw ConfigError(tag + "batch_size must be > 0");
}

void RunConfig::validate() const {
    backbone.validate();
    head.validate();
    preprocess.validate();
    train.stage1.validate("stage1");
    train.stage2.validate("stage2");
    metrics.validate_rectangle();
    if (!(fixed_h > 0) || !(fixed_w > 0))
        throw ConfigError("fixed_h and fixed_w must be > 0");
    if (threads < 0) throw ConfigError("threads must be >= 0");
    const std::size_t out = head.widths.back();
    if (variant == Variant::graspability) {
        if (out != 2)
            throw ConfigError("graspability head must end in width 2, got " +
                              std::to_string(out));
        if (preprocess.patch_size <= 0)
            throw ConfigError("graspability variant needs preprocess.patch_size > 0 "
                              "(grasp-centered queries)");
    } else if (out != 4) {
        throw ConfigError("regression head must end in width 4, got " +
                          std::to_string(out));
    }
}

RunConfig default_run_config(Variant v) {
    RunConfig cfg;
    cfg.variant = v;
    switch (v) {
        case Variant::uni_modal:
            cfg.head.widths = {256, 4};
            cfg.train.stage1 = {30, 0.001, 1e-6, 0.9, 32};
            break;
        case Variant::multi_modal:
            cfg.head.widths = {512, 128, 4};
            cfg.train.stage1 = {50, 0.0006, 1e-6, 0.9, 32};
            break;
        case Variant::graspability:
            cfg.head.widths = {512, 128, 2};
            cfg.train.stage1 = {50, 0.0006, 1e-6, 0.9, 32};
            cfg.preprocess.patch_policy = PatchPolicy::grasp_centered;
            cfg.preprocess.patch_size = 32;
            break;
    }
    cfg.head.activations.assign(cfg.head.widths.size(), Activation::relu);
    cfg.head.activations.back() = Activation::linear;
    // fine-tuning stage: much lower rate, plateau-scheduled
    cfg.train.stage2 = cfg.train.stage1;
    cfg.train.stage2.lr0 = cfg.train.stage1.lr0 / 10.0;
    cfg.train.stage2.epochs = 15;
    return cfg;
}

namespace {

[[noreturn]] void bad(const std::string& msg) { throw ConfigError("config: " + msg); }

void check_keys(const json& j, const std::string& where,
                const std::set<std::string>& allowed) {
    if (!j.is_object()) bad(where + " must be an object");
    for (const auto& [key, _] : j.items())
        if (!allowed.count(key)) bad("unknown key '" + key + "' in " + where);
}

template <typename T>
void maybe(const json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        bad(std::string("bad value for '") + key + "': " + e.what());
    }
}

void maybe_str(const json& j, const char* key, std::string& out) { maybe(j, key, out); }

} // namespace

RunConfig run_config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    check_keys(j, "config",
               {"variant", "modality", "backbone", "head", "preprocess", "train",
                "metrics", "seed", "fixed_h", "fixed_w", "threads"});

    std::string variant_str = "uni-modal";
    maybe_str(j, "variant", variant_str);
    RunConfig cfg = default_run_config(variant_from_string(variant_str));

    std::string modality_str = to_string(cfg.modality);
    maybe_str(j, "modality", modality_str);
    cfg.modality = modality_from_string(modality_str);

    if (j.contains("backbone")) {
        const json& b = j.at("backbone");
        check_keys(b, "backbone", {"stem_channels", "stages"});
        maybe(b, "stem_channels", cfg.backbone.stem_channels);
        if (b.contains("stages")) {
            cfg.backbone.stages.clear();
            for (const json& s : b.at("stages")) {
                check_keys(s, "backbone.stages[]", {"blocks", "channels"});
                BackboneSpec::Stage stage;
                maybe(s, "blocks", stage.blocks);
                maybe(s, "channels", stage.channels);
                cfg.backbone.stages.push_back(stage);
            }
        }
    }
    if (j.contains("head")) {
        const json& h = j.at("head");
        check_keys(h, "head", {"widths", "activations", "dropout_p"});
        if (h.contains("widths")) {
            maybe(h, "widths", cfg.head.widths);
            // re-derive default activations for the new layer count
            cfg.head.activations.assign(cfg.head.widths.size(), Activation::relu);
            if (!cfg.head.activations.empty())
                cfg.head.activations.back() = Activation::linear;
        }
        if (h.contains("activations")) {
            std::vector<std::string> acts;
            maybe(h, "activations", acts);
            cfg.head.activations.clear();
            for (const auto& a : acts)
                cfg.head.activations.push_back(activation_from_string(a));
        }
        maybe(h, "dropout_p", cfg.head.dropout_p);
    }
    if (j.contains("preprocess")) {
        const json& p = j.at("preprocess");
        check_keys(p, "preprocess",
                   {"input_size", "patch_policy", "patch_size", "angle_encoding"});
        maybe(p, "input_size", cfg.preprocess.input_size);
        std::string policy = to_string(cfg.preprocess.patch_policy);
        maybe_str(p, "patch_policy", policy);
        cfg.preprocess.patch_policy = patch_policy_from_string(policy);
        maybe(p, "patch_size", cfg.preprocess.patch_size);
        std::string enc = to_string(cfg.preprocess.angle_encoding);
        maybe_str(p, "angle_encoding", enc);
        cfg.preprocess.angle_encoding = angle_encoding_from_string(enc);
    }
    if (j.contains("train")) {
        const json& t = j.at("train");
        check_keys(t, "train", {"stage1", "stage2", "plateau"});
        auto read_stage = [&](const char* name, StagePlan& plan) {
            if (!t.contains(name)) return;
            const json& s = t.at(name);
            check_keys(s, std::string("train.") + name,
                       {"epochs", "lr0", "decay", "momentum", "batch_size"});
            maybe(s, "epochs", plan.epochs);
            maybe(s, "lr0", plan.lr0);
            maybe(s, "decay", plan.decay);
            maybe(s, "momentum", plan.momentum);
            maybe(s, "batch_size", plan.batch_size);
        };
        read_stage("stage1", cfg.train.stage1);
        read_stage("stage2", cfg.train.stage2);
        if (t.contains("plateau")) {
            const json& pl = t.at("plateau");
            check_keys(pl, "train.plateau", {"patience", "factor", "min_lr"});
            maybe(pl, "patience", cfg.train.plateau.patience);
            maybe(pl, "factor", cfg.train.plateau.factor);
            maybe(pl, "min_lr", cfg.train.plateau.min_lr);
        }
    }
    if (j.contains("metrics")) {
        const json& m = j.at("metrics");
        check_keys(m, "metrics",
                   {"angle_threshold", "jaccard_threshold", "point_distance_threshold"});
        maybe(m, "angle_threshold", cfg.metrics.angle_threshold);
        maybe(m, "jaccard_threshold", cfg.metrics.jaccard_threshold);
        if (m.contains("point_distance_threshold") &&
            !m.at("point_distance_threshold").is_null())
            maybe(m, "point_distance_threshold", cfg.metrics.point_distance_threshold);
    }
    maybe(j, "seed", cfg.seed);
    maybe(j, "fixed_h", cfg.fixed_h);
    maybe(j, "fixed_w", cfg.fixed_w);
    maybe(j, "threads", cfg.threads);

    cfg.validate();
    return cfg;
}

std::string run_config_to_json(const RunConfig& cfg) {
    json j;
    j["variant"] = to_string(cfg.variant);
    j["modality"] = to_string(cfg.modality);
    j["backbone"]["stem_channels"] = cfg.backbone.stem_channels;
    j["backbone"]["stages"] = json::array();
    for (const auto& s : cfg.backbone.stages)
        j["backbone"]["stages"].push_back({{"blocks", s.blocks}, {"channels", s.channels}});
    j["head"]["widths"] = cfg.head.widths;
    j["head"]["activations"] = json::array();
    for (Activation a : cfg.head.activations)
        j["head"]["activations"].push_back(to_string(a));
    j["head"]["dropout_p"] = cfg.head.dropout_p;
    j["preprocess"] = {{"input_size", cfg.preprocess.input_size},
                       {"patch_policy", to_string(cfg.preprocess.patch_policy)},
                       {"patch_size", cfg.preprocess.patch_size},
                       {"angle_encoding", to_string(cfg.preprocess.angle_encoding)}};
    auto stage_json = [](const StagePlan& s) {
        return json{{"epochs", s.epochs},
                    {"lr0", s.lr0},
                    {"decay", s.decay},
                    {"momentum", s.momentum},
                    {"batch_size", s.batch_size}};
    };
    j["train"]["stage1"] = stage_json(cfg.train.stage1);
    j["train"]["stage2"] = stage_json(cfg.train.stage2);
    j["train"]["plateau"] = {{"patience", cfg.train.plateau.patience},
                             {"factor", cfg.train.plateau.factor},
                             {"min_lr", cfg.train.plateau.min_lr}};
    j["metrics"]["angle_threshold"] = cfg.metrics.angle_threshold;
    j["metrics"]["jaccard_threshold"] = cfg.metrics.jaccard_threshold;
    if (std::isnan(cfg.metrics.point_distance_threshold))
        j["metrics"]["point_distance_threshold"] = nullptr;
    else
        j["metrics"]["point_distance_threshold"] = cfg.metrics.point_distance_threshold;
    j["seed"] = cfg.seed;
    j["fixed_h"] = cfg.fixed_h;
    j["fixed_w"] = cfg.fixed_w;
    j["threads"] = cfg.threads;
    return j.dump(2);
}

} // namespace grasp
