#include "grasp/preprocess.hpp"

#include "grasp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace grasp {

std::string to_string(Modality m) {
    switch (m) {
        case Modality::rgb: return "rgb";
        case Modality::rgd: return "rgd";
        case Modality::depth3: return "depth3";
    }
    return "rgb";
}

Modality modality_from_string(const std::string& s) {
    if (s == "rgb") return Modality::rgb;
    if (s == "rgd") return Modality::rgd;
    if (s == "depth3") return Modality::depth3;
    throw ConfigError("unknown modality '" + s + "' (rgb, rgd, depth3)");
}

std::string to_string(PatchPolicy p) {
    return p == PatchPolicy::full_image ? "full-image" : "grasp-centered";
}

PatchPolicy patch_policy_from_string(const std::string& s) {
    if (s == "full-image") return PatchPolicy::full_image;
    if (s == "grasp-centered") return PatchPolicy::grasp_centered;
    throw ConfigError("unknown patch policy '" + s + "' (full-image, grasp-centered)");
}

std::string to_string(AngleEncoding e) {
    return e == AngleEncoding::double_angle ? "double-angle" : "raw";
}

AngleEncoding angle_encoding_from_string(const std::string& s) {
    if (s == "double-angle") return AngleEncoding::double_angle;
    if (s == "raw") return AngleEncoding::raw;
    throw ConfigError("unknown angle encoding '" + s + "' (double-angle, raw)");
}

void PreprocessConfig::validate() const {
    if (input_size < 2)
        throw ConfigError("preprocess: input_size must be >= 2");
    if (patch_policy == PatchPolicy::grasp_centered && patch_size <= 0)
        throw ConfigError("preprocess: grasp-centered policy needs patch_size > 0 "
                          "(no paper default exists)");
}

ImageU8 rescale_depth(const DepthRaster& depth) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    const size_t n = depth.values.size();
    for (size_t i = 0; i < n; ++i) {
        if (depth.missing[i]) continue;
        lo = std::min(lo, depth.values[i]);
        hi = std::max(hi, depth.values[i]);
    }
    if (!(lo <= hi))
        throw DataError("rescale_depth: raster has no valid depth readings");

    ImageU8 out(depth.height, depth.width, 1);
    if (hi == lo) return out; // degenerate range -> all zeros
    const double k = 255.0 / (hi - lo);
    for (size_t i = 0; i < n; ++i) {
        if (depth.missing[i]) continue; // stays 0
        const double v = (depth.values[i] - lo) * k;
        out.data[i] = static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
    }
    return out;
}

ImageU8 to_rgd(const ImageU8& rgb, const ImageU8& depth8) {
    if (rgb.channels != 3 || depth8.channels != 1 || rgb.height != depth8.height ||
        rgb.width != depth8.width)
        throw Error("to_rgd: shape mismatch between RGB and depth rasters");
    ImageU8 out = rgb;
    for (size_t p = 0; p < out.pixel_count(); ++p)
        out.data[p * 3 + 2] = depth8.data[p];
    return out;
}

ImageU8 depth_to_3channel(const ImageU8& depth8) {
    if (depth8.channels != 1) throw Error("depth_to_3channel: expected 1 channel");
    ImageU8 out(depth8.height, depth8.width, 3);
    for (size_t p = 0; p < depth8.data.size(); ++p) {
        out.data[p * 3 + 0] = depth8.data[p];
        out.data[p * 3 + 1] = depth8.data[p];
        out.data[p * 3 + 2] = depth8.data[p];
    }
    return out;
}

ImageU8 extract_patch(const ImageU8& src, double cx, double cy, int patch_size,
                      Point2* origin) {
    if (patch_size <= 0) throw Error("extract_patch: patch_size must be positive");
    if (cx < 0 || cx >= src.width || cy < 0 || cy >= src.height)
        throw Error("extract_patch: center (" + std::to_string(cx) + ", " +
                    std::to_string(cy) + ") outside image " +
                    std::to_string(src.width) + "x" + std::to_string(src.height));
    const int ox = static_cast<int>(std::lround(cx)) - patch_size / 2;
    const int oy = static_cast<int>(std::lround(cy)) - patch_size / 2;
    ImageU8 out(patch_size, patch_size, src.channels);
    for (int r = 0; r < patch_size; ++r) {
        const int sr = oy + r;
        if (sr < 0 || sr >= src.height) continue;
        const int c0 = std::max(0, -ox);
        const int c1 = std::min(patch_size, src.width - ox);
        if (c0 >= c1) continue;
        const size_t src_off = (static_cast<size_t>(sr) * src.width + (ox + c0)) * src.channels;
        const size_t dst_off = (static_cast<size_t>(r) * patch_size + c0) * src.channels;
        std::copy_n(src.data.begin() + src_off,
                    static_cast<size_t>(c1 - c0) * src.channels,
                    out.data.begin() + dst_off);
    }
    if (origin) *origin = {static_cast<double>(ox), static_cast<double>(oy)};
    return out;
}

SamplePatch extract_patch(const RgbdSample& sample, double cx, double cy,
                          int patch_size) {
    SamplePatch p;
    p.rgb = extract_patch(sample.rgb, cx, cy, patch_size, &p.origin);
    p.depth8 = extract_patch(rescale_depth(sample.depth), cx, cy, patch_size, nullptr);
    return p;
}

std::vector<double> resize_plane_bilinear(const std::vector<double>& src,
                                          int src_h, int src_w,
                                          int out_h, int out_w) {
    if (src_h <= 0 || src_w <= 0 || static_cast<size_t>(src_h) * src_w != src.size())
        throw Error("resize_plane_bilinear: bad source shape");
    if (out_h <= 0 || out_w <= 0)
        throw Error("resize_plane_bilinear: bad output shape");
    std::vector<double> out(static_cast<size_t>(out_h) * out_w);
    const double ry = out_h > 1 ? static_cast<double>(src_h - 1) / (out_h - 1) : 0.0;
    const double rx = out_w > 1 ? static_cast<double>(src_w - 1) / (out_w - 1) : 0.0;
    for (int r = 0; r < out_h; ++r) {
        const double sy = out_h > 1 ? r * ry : 0.5 * (src_h - 1);
        const int y0 = std::min(static_cast<int>(sy), src_h - 1);
        const int y1 = std::min(y0 + 1, src_h - 1);
        const double fy = sy - y0;
        for (int c = 0; c < out_w; ++c) {
            const double sx = out_w > 1 ? c * rx : 0.5 * (src_w - 1);
            const int x0 = std::min(static_cast<int>(sx), src_w - 1);
            const int x1 = std::min(x0 + 1, src_w - 1);
            const double fx = sx - x0;
            const double top = src[static_cast<size_t>(y0) * src_w + x0] * (1 - fx) +
                               src[static_cast<size_t>(y0) * src_w + x1] * fx;
            const double bot = src[static_cast<size_t>(y1) * src_w + x0] * (1 - fx) +
                               src[static_cast<size_t>(y1) * src_w + x1] * fx;
            out[static_cast<size_t>(r) * out_w + c] = top * (1 - fy) + bot * fy;
        }
    }
    return out;
}

TargetVec encode_target(const GraspRect& g, Point2 crop_origin, double patch_size,
                        AngleEncoding encoding) {
    const double tx = (g.x() - crop_origin.x) / patch_size;
    const double ty = (g.y() - crop_origin.y) / patch_size;
    if (tx < 0 || tx > 1 || ty < 0 || ty > 1)
        throw Error("encode_target: grasp center outside the patch");
    TargetVec v;
    v.tx = tx;
    v.ty = ty;
    const double t = g.theta() * std::numbers::pi / 180.0;
    if (encoding == AngleEncoding::double_angle) {
        v.a0 = std::cos(2 * t);
        v.a1 = std::sin(2 * t);
    } else {
        v.a0 = g.theta() / 180.0;
        v.a1 = 0.0;
    }
    return v;
}

GraspRect decode_output(const TargetVec& v, Point2 crop_origin, double patch_size,
                        double h, double w, AngleEncoding encoding) {
    double theta;
    if (encoding == AngleEncoding::double_angle) {
        if (v.a0 == 0.0 && v.a1 == 0.0)
            throw Error("decode_output: zero angle vector, orientation undefined");
        theta = 0.5 * std::atan2(v.a1, v.a0) * 180.0 / std::numbers::pi;
    } else {
        theta = v.a0 * 180.0;
    }
    const double x = crop_origin.x + v.tx * patch_size;
    const double y = crop_origin.y + v.ty * patch_size;
    return GraspRect(x, y, h, w, theta);
}

std::vector<double> l2_normalize(const std::vector<double>& v) {
    double norm_sq = 0.0;
    for (double x : v) {
        if (!std::isfinite(x)) throw Error("l2_normalize: non-finite entry");
        norm_sq += x * x;
    }
    if (norm_sq == 0.0) return v;
    const double inv = 1.0 / std::sqrt(norm_sq);
    std::vector<double> out(v.size());
    for (size_t i = 0; i < v.size(); ++i) out[i] = v[i] * inv;
    return out;
}

NetInput make_net_input(const RgbdSample& sample, const PreprocessConfig& cfg,
                        Modality modality, Point2 center) {
    cfg.validate();
    const ImageU8 depth8 = rescale_depth(sample.depth);
    ImageU8 base;
    switch (modality) {
        case Modality::rgb: base = sample.rgb; break;
        case Modality::rgd: base = to_rgd(sample.rgb, depth8); break;
        case Modality::depth3: base = depth_to_3channel(depth8); break;
    }

    int side;
    Point2 c;
    if (cfg.patch_policy == PatchPolicy::full_image) {
        // smallest centered square covering the whole image
        side = std::max(base.height, base.width);
        c = {0.5 * (base.width - 1), 0.5 * (base.height - 1)};
    } else {
        side = cfg.patch_size;
        c = center;
    }

    NetInput in;
    in.size = cfg.input_size;
    in.modality = modality;
    const ImageU8 patch = extract_patch(base, c.x, c.y, side, &in.crop_origin);
    in.patch_size = side;
    in.scale = static_cast<double>(cfg.input_size) / side;

    const int S = cfg.input_size;
    in.pixels.resize(3 * static_cast<size_t>(S) * S);
    std::vector<double> plane(static_cast<size_t>(side) * side);
    for (int ch = 0; ch < 3; ++ch) {
        for (size_t p = 0; p < plane.size(); ++p)
            plane[p] = patch.data[p * 3 + ch] / 255.0;
        const auto resized = resize_plane_bilinear(plane, side, side, S, S);
        std::copy(resized.begin(), resized.end(),
                  in.pixels.begin() + static_cast<size_t>(ch) * S * S);
    }
    return in;
}

} // namespace grasp
