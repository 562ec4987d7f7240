#include "grasp/splits.hpp"

#include "grasp/errors.hpp"
#include "grasp/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <map>
#include <set>

using nlohmann::json;

namespace grasp {

std::string to_string(SplitMode mode) {
    return mode == SplitMode::image_wise ? "image-wise" : "object-wise";
}

SplitMode split_mode_from_string(const std::string& s) {
    if (s == "image-wise") return SplitMode::image_wise;
    if (s == "object-wise") return SplitMode::object_wise;
    throw ConfigError("unknown split mode '" + s + "' (use image-wise or object-wise)");
}

bool SplitPlan::contains(size_t fold, const std::string& id) const {
    const auto& f = folds.at(fold);
    return std::find(f.begin(), f.end(), id) != f.end();
}

SplitPlan make_splits(const std::vector<SampleKey>& keys, SplitMode mode,
                      std::uint64_t seed) {
    if (keys.empty()) throw DataError("make_splits: empty sample list");

    SplitPlan plan;
    plan.mode = mode;
    plan.seed = seed;
    std::mt19937_64 rng(seed);

    if (mode == SplitMode::image_wise) {
        std::vector<std::string> ids;
        ids.reserve(keys.size());
        for (const auto& k : keys) ids.push_back(k.id);
        std::sort(ids.begin(), ids.end());
        fisher_yates(ids, rng);
        for (size_t i = 0; i < ids.size(); ++i)
            plan.folds[i % 5].push_back(std::move(ids[i]));
    } else {
        std::map<std::string, std::vector<std::string>> by_object;
        for (const auto& k : keys) by_object[k.object_id].push_back(k.id);
        if (by_object.size() < 5)
            throw DataError("object-wise split needs at least 5 objects, found " +
                            std::to_string(by_object.size()));
        std::vector<std::string> objects;
        objects.reserve(by_object.size());
        for (const auto& [obj, _] : by_object) objects.push_back(obj);
        fisher_yates(objects, rng);
        for (size_t i = 0; i < objects.size(); ++i) {
            auto& ids = by_object[objects[i]];
            auto& fold = plan.folds[i % 5];
            fold.insert(fold.end(), ids.begin(), ids.end());
        }
    }
    for (auto& fold : plan.folds) std::sort(fold.begin(), fold.end());
    return plan;
}

SplitPlan make_splits(const std::vector<RgbdSample>& samples, SplitMode mode,
                      std::uint64_t seed) {
    std::vector<SampleKey> keys;
    keys.reserve(samples.size());
    for (const auto& s : samples) keys.push_back({s.id, s.object_id});
    return make_splits(keys, mode, seed);
}

std::string split_plan_to_json(const SplitPlan& plan) {
    json j;
    j["mode"] = to_string(plan.mode);
    j["seed"] = plan.seed;
    j["rng_algorithm"] = kRngAlgorithm;
    j["folds"] = json::array();
    for (const auto& fold : plan.folds) j["folds"].push_back(fold);
    return j.dump(2);
}

SplitPlan split_plan_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw FormatError(std::string("split plan JSON: ") + e.what());
    }
    SplitPlan plan;
    try {
        plan.mode = split_mode_from_string(j.at("mode").get<std::string>());
        plan.seed = j.at("seed").get<std::uint64_t>();
        const auto& folds = j.at("folds");
        if (folds.size() != 5)
            throw FormatError("split plan must have exactly 5 folds");
        for (size_t i = 0; i < 5; ++i)
            plan.folds[i] = folds[i].get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        throw FormatError(std::string("split plan JSON: ") + e.what());
    }
    return plan;
}

} // namespace grasp
