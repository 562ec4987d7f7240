#pragma once

#include "grasp/dataset.hpp"
#include "grasp/geometry.hpp"
#include "grasp/image.hpp"

#include <array>
#include <string>
#include <vector>

namespace grasp {

enum class Modality { rgb, rgd, depth3 };
enum class PatchPolicy { full_image, grasp_centered };
enum class AngleEncoding { double_angle, raw };

std::string to_string(Modality m);
Modality modality_from_string(const std::string& s);
std::string to_string(PatchPolicy p);
PatchPolicy patch_policy_from_string(const std::string& s);
std::string to_string(AngleEncoding e);
AngleEncoding angle_encoding_from_string(const std::string& s);

struct PreprocessConfig {
    int input_size = 64;                 // S: network input is S x S x 3
    PatchPolicy patch_policy = PatchPolicy::full_image;
    int patch_size = 0;                  // required when grasp_centered
    AngleEncoding angle_encoding = AngleEncoding::double_angle;

    void validate() const;
};

// Fixed-size network input. Pixel planes are stored channel-major
// (3 x S x S), values in [0, 1]. crop geometry allows back-projection:
// source = crop_origin + patch_coordinate, input = patch * scale.
struct NetInput {
    int size = 0;
    Modality modality = Modality::rgb;
    Point2 crop_origin;   // top-left of the source patch, pixels
    double patch_size = 0; // source patch side, pixels
    double scale = 0;      // input_size / patch_size
    std::vector<double> pixels;
};

// Regression target: patch-relative center plus an angle code. In
// double_angle mode (a0, a1) = (cos 2theta, sin 2theta), which is smooth
// across the 0/180 wrap; raw mode stores (theta/180, 0).
struct TargetVec {
    double tx = 0, ty = 0, a0 = 0, a1 = 0;
    std::array<double, 4> as_array() const { return {tx, ty, a0, a1}; }
};

// Affine map of the observed depth range onto 0..255; missing cells become
// 0 after rescaling. A degenerate range (min == max) maps to all zeros.
// Throws DataError if every cell is missing.
ImageU8 rescale_depth(const DepthRaster& depth);

// (R, G, depth): the blue channel replaced by rescaled depth.
ImageU8 to_rgd(const ImageU8& rgb, const ImageU8& depth8);

// Depth plane replicated into 3 identical channels.
ImageU8 depth_to_3channel(const ImageU8& depth8);

// Square crop centered at (cx, cy); out-of-source regions are zero-filled.
// Reports the crop origin for coordinate back-projection. Throws if the
// center lies outside the image.
ImageU8 extract_patch(const ImageU8& src, double cx, double cy, int patch_size,
                      Point2* origin = nullptr);

// Convenience form over a dataset sample: crops the RGB image and the
// rescaled depth with one shared origin.
struct SamplePatch {
    ImageU8 rgb;
    ImageU8 depth8;
    Point2 origin;
};
SamplePatch extract_patch(const RgbdSample& sample, double cx, double cy,
                          int patch_size);

// Corner-aligned bilinear resample of a single plane.
std::vector<double> resize_plane_bilinear(const std::vector<double>& src,
                                          int src_h, int src_w,
                                          int out_h, int out_w);

TargetVec encode_target(const GraspRect& g, Point2 crop_origin, double patch_size,
                        AngleEncoding encoding = AngleEncoding::double_angle);

// Inverse of encode_target; h and w are supplied externally (fixed gripper
// geometry). Throws on a (0, 0) angle vector in double_angle mode.
GraspRect decode_output(const TargetVec& v, Point2 crop_origin, double patch_size,
                        double h, double w,
                        AngleEncoding encoding = AngleEncoding::double_angle);

// Euclidean normalization; the zero vector is returned unchanged.
std::vector<double> l2_normalize(const std::vector<double>& v);

// Full pipeline: rescale depth, assemble the modality raster, crop per the
// patch policy, resize to input_size and scale to [0, 1]. `center` selects
// the patch center for grasp_centered policy and is ignored otherwise.
NetInput make_net_input(const RgbdSample& sample, const PreprocessConfig& cfg,
                        Modality modality, Point2 center = {0, 0});

} // namespace grasp
