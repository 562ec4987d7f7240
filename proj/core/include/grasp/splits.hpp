#pragma once

#include "grasp/dataset.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace grasp {

enum class SplitMode { image_wise, object_wise };

std::string to_string(SplitMode mode);
SplitMode split_mode_from_string(const std::string& s);

struct SampleKey {
    std::string id;
    std::string object_id;
};

// Five disjoint folds covering the full sample set. Object-wise plans keep
// all samples of an object in the same fold.
struct SplitPlan {
    SplitMode mode = SplitMode::image_wise;
    std::uint64_t seed = 0;
    std::array<std::vector<std::string>, 5> folds;

    bool contains(size_t fold, const std::string& id) const;
};

// Deterministic 5-fold plan: keys are sorted by id, then shuffled with a
// seeded mt19937_64 Fisher-Yates pass and dealt round-robin. Image-wise
// shuffles sample ids (fold sizes differ by at most 1); object-wise
// shuffles object ids and samples follow their object.
SplitPlan make_splits(const std::vector<SampleKey>& keys, SplitMode mode,
                      std::uint64_t seed);
SplitPlan make_splits(const std::vector<RgbdSample>& samples, SplitMode mode,
                      std::uint64_t seed);

std::string split_plan_to_json(const SplitPlan& plan);
SplitPlan split_plan_from_json(const std::string& text);

} // namespace grasp
