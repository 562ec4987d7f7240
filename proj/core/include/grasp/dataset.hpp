#pragma once

#include "grasp/geometry.hpp"
#include "grasp/image.hpp"

#include <string>
#include <vector>

namespace grasp {

// One Cornell-format dataset item. Annotation rectangles are stored as
// parsed grasp configurations; the raw depth keeps its missing-value mask
// so the zero-fill happens later, as a deliberate preprocessing step.
struct RgbdSample {
    std::string id;        // numeric string from the file stem
    std::string object_id; // object-instance identifier
    ImageU8 rgb;
    DepthRaster depth;
    std::vector<GraspRect> positive_grasps;
    std::vector<GraspRect> negative_grasps;
};

struct ImageBounds {
    int height = 0;
    int width = 0;
};

struct RectParseStats {
    size_t skipped_nonfinite = 0;     // quadruples with NaN/Inf coordinates
    size_t skipped_degenerate = 0;    // quadruples with a zero-length edge
    size_t skipped_out_of_bounds = 0; // center outside the image
    size_t total_skipped() const {
        return skipped_nonfinite + skipped_degenerate + skipped_out_of_bounds;
    }
};

// Parses a rectangle annotation file: whitespace-separated "x y" lines,
// four consecutive corner lines per rectangle. Each quadruple becomes a
// GraspRect with center = corner mean, h = |c0-c1|, w = |c1-c2| and theta
// from the c1->c2 edge. Quadruples with non-finite coordinates are skipped
// and counted, matching how the Cornell files are annotated in the wild.
//
// Throws FormatError when the line count is not a multiple of 4 or a token
// does not parse as a decimal real.
std::vector<GraspRect> parse_rect_file(const std::string& path, ImageBounds bounds,
                                       RectParseStats* stats = nullptr);

// Parses an ASCII point cloud whose header declares FIELDS including `z`
// (the depth coordinate) and `index` (linear image index, row-major).
// Cells never mentioned stay flagged missing.
DepthRaster parse_pcd_to_depth(const std::string& path, int height, int width);

struct SkippedSample {
    std::string id;
    std::string reason;
};

struct LoadReport {
    size_t loaded = 0;
    std::vector<SkippedSample> skipped_samples;
    RectParseStats rect_stats;            // aggregated over all samples
    std::string object_id_source;         // "mapping-file" or "id-prefix"
    size_t positive_count = 0;
    size_t negative_count = 0;
};

// Loads every sample under root_dir (searched recursively). Expected layout
// per sample id NNNN:
//   pcdNNNNr.png      RGB image
//   pcdNNNN.txt       ASCII point cloud
//   pcdNNNNcpos.txt   positive rectangles
//   pcdNNNNcneg.txt   negative rectangles
// Object identity comes from an optional two-column `object_ids.txt` at the
// root ("sample_id object_id" per line); otherwise the first two digits of
// the id. The returned list is sorted by id regardless of directory
// enumeration order. Incomplete samples are skipped and reported.
std::vector<RgbdSample> load_dataset(const std::string& root_dir,
                                     LoadReport* report = nullptr);

} // namespace grasp
