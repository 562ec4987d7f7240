#pragma once

#include "grasp/dataset.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace grasp {

// Raised-bar scenes: a rectangular bar of random color, size and
// orientation over a textured background, elevated in the depth channel.
// Positive grasps close across the bar near its middle; negatives sit on
// the background or run parallel to the bar at its ends. Perpendicular
// grasps across a bar give an unambiguous oracle labeling, which is what
// makes desk-scale accuracy numbers meaningful.
struct SyntheticConfig {
    int count = 200;
    int image_size = 64;
    std::uint64_t seed = 0;
    int images_per_object = 4;     // scenes sharing one bar archetype
    double missing_fraction = 0.02; // random depth holes
    double grasp_h = 10;            // plate contact length (pixels at size 64)
    double grasp_w = 16;            // opening width
};

// Deterministic per seed; scene i depends only on (seed, i), so prefixes
// are stable when count grows. Every positive grasp self-passes the
// rectangle metric and the bar depth is strictly above the background.
std::vector<RgbdSample> gen_synthetic(const SyntheticConfig& cfg);

// Materializes samples in the Cornell on-disk layout (pcdNNNNr.png,
// pcdNNNN.txt, pcdNNNNcpos/cneg.txt plus object_ids.txt), so generated
// data flows through the same parsers as the real dataset.
void write_cornell_tree(const std::vector<RgbdSample>& samples,
                        const std::string& out_dir);

} // namespace grasp
