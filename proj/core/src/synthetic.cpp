#include "grasp/synthetic.hpp"

#include "grasp/errors.hpp"
#include "grasp/png_io.hpp"
#include "grasp/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

namespace fs = std::filesystem;

namespace grasp {

namespace {

struct Archetype {
    double length, thickness;
    std::array<int, 3> bg_color, bar_color;
    double bg_depth, bar_height;
};

Archetype make_archetype(std::uint64_t seed, std::size_t object_index, int S) {
    std::mt19937_64 rng(mix_seed(seed, 0xA0000000ull + object_index));
    Archetype a;
    a.length = uniform_real(rng, 0.45, 0.70) * S;
    a.thickness = uniform_real(rng, 0.12, 0.19) * S;
    // low-saturation colors around random gray levels, with a guaranteed
    // same-polarity edge in every channel (bars stay learnable from scratch
    // at desk scale, either polarity, random tint)
    const double bg_gray = uniform_real(rng, 90, 170);
    double bar_gray;
    do {
        bar_gray = uniform_real(rng, 10, 245);
    } while (std::fabs(bar_gray - bg_gray) < 70);
    for (auto& c : a.bg_color)
        c = static_cast<int>(std::clamp(bg_gray + uniform_real(rng, -20, 20), 0.0, 255.0));
    for (auto& c : a.bar_color)
        c = static_cast<int>(std::clamp(bar_gray + uniform_real(rng, -22, 22), 0.0, 255.0));
    a.bg_depth = uniform_real(rng, 0.2, 0.4);
    a.bar_height = uniform_real(rng, 0.3, 0.5);
    return a;
}

std::uint8_t clamp_u8(double v) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
}

} // namespace

std::vector<RgbdSample> gen_synthetic(const SyntheticConfig& cfg) {
    if (cfg.count <= 0) throw ConfigError("gen_synthetic: count must be > 0");
    if (cfg.image_size < 16) throw ConfigError("gen_synthetic: image_size too small");
    if (cfg.images_per_object <= 0)
        throw ConfigError("gen_synthetic: images_per_object must be > 0");
    if (!(cfg.missing_fraction >= 0 && cfg.missing_fraction < 0.5))
        throw ConfigError("gen_synthetic: missing_fraction must be in [0, 0.5)");

    const int S = cfg.image_size;
    const double px_scale = S / 64.0;
    const double gh = cfg.grasp_h * px_scale;
    const double gw = cfg.grasp_w * px_scale;

    std::vector<RgbdSample> samples;
    samples.reserve(cfg.count);
    for (int i = 0; i < cfg.count; ++i) {
        const std::size_t object = static_cast<std::size_t>(i) /
                                   static_cast<std::size_t>(cfg.images_per_object);
        const Archetype arch = make_archetype(cfg.seed, object, S);
        std::mt19937_64 rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(i)));

        const double phi = uniform_real(rng, 0.0, 180.0);
        const double rad = phi * std::numbers::pi / 180.0;
        const double ux = std::cos(rad), uy = std::sin(rad);
        const double vx = -uy, vy = ux;
        const double half_diag = 0.5 * std::hypot(arch.length, arch.thickness) + 1.0;
        const double cx = uniform_real(rng, half_diag, S - 1 - half_diag);
        const double cy = uniform_real(rng, half_diag, S - 1 - half_diag);

        auto bar_frame = [&](double px, double py, double& along, double& across) {
            const double dx = px - cx, dy = py - cy;
            along = dx * ux + dy * uy;
            across = dx * vx + dy * vy;
        };
        auto on_bar = [&](double px, double py) {
            double a, b;
            bar_frame(px, py, a, b);
            return std::fabs(a) <= arch.length / 2 && std::fabs(b) <= arch.thickness / 2;
        };

        RgbdSample sample;
        char id[16];
        std::snprintf(id, sizeof id, "%04d", i);
        sample.id = id;
        char obj[16];
        std::snprintf(obj, sizeof obj, "%03zu", object);
        sample.object_id = obj;

        sample.rgb = ImageU8(S, S, 3);
        sample.depth = DepthRaster(S, S);
        for (int r = 0; r < S; ++r) {
            for (int c = 0; c < S; ++c) {
                const bool bar = on_bar(c, r);
                for (int ch = 0; ch < 3; ++ch) {
                    const int base = bar ? arch.bar_color[ch] : arch.bg_color[ch];
                    sample.rgb.at(r, c, ch) =
                        clamp_u8(base + uniform_real(rng, -10.0, 10.0));
                }
                const double depth = (bar ? arch.bg_depth + arch.bar_height
                                          : arch.bg_depth) +
                                     uniform_real(rng, -0.01, 0.01);
                if (uniform_unit(rng) >= cfg.missing_fraction)
                    sample.depth.set(r, c, depth);
            }
        }

        // positives: perpendicular grasps across the bar near its middle,
        // canonical center grasp first
        const double theta_grasp = phi + 90.0;
        for (double t : {0.0, -0.3, 0.3}) {
            const double gx = cx + t * (arch.length / 2) * ux;
            const double gy = cy + t * (arch.length / 2) * uy;
            sample.positive_grasps.emplace_back(gx, gy, gh, gw, theta_grasp);
        }
        // negatives: parallel grasps hanging off both bar ends, plus one
        // rectangle on clear background
        for (double dir : {1.0, -1.0}) {
            const double off = arch.length / 2 + 2.0 * px_scale;
            const double gx = std::clamp(cx + dir * off * ux, 1.0, S - 2.0);
            const double gy = std::clamp(cy + dir * off * uy, 1.0, S - 2.0);
            sample.negative_grasps.emplace_back(gx, gy, gh, gw, phi);
        }
        {
            double gx = 0, gy = 0;
            bool placed = false;
            for (int attempt = 0; attempt < 200 && !placed; ++attempt) {
                gx = uniform_real(rng, 6.0 * px_scale, S - 1 - 6.0 * px_scale);
                gy = uniform_real(rng, 6.0 * px_scale, S - 1 - 6.0 * px_scale);
                double a, b;
                bar_frame(gx, gy, a, b);
                const double da = std::max(0.0, std::fabs(a) - arch.length / 2);
                const double db = std::max(0.0, std::fabs(b) - arch.thickness / 2);
                placed = std::hypot(da, db) >= 0.18 * S;
            }
            if (!placed) { // fall back to the farthest corner
                const double corners[4][2] = {{4, 4},
                                              {S - 5.0, 4},
                                              {4, S - 5.0},
                                              {S - 5.0, S - 5.0}};
                double best = -1;
                for (const auto& corner : corners) {
                    const double d = std::hypot(corner[0] - cx, corner[1] - cy);
                    if (d > best) {
                        best = d;
                        gx = corner[0];
                        gy = corner[1];
                    }
                }
            }
            sample.negative_grasps.emplace_back(gx, gy, gh, gw,
                                                uniform_real(rng, 0.0, 180.0));
        }
        samples.push_back(std::move(sample));
    }
    return samples;
}

void write_cornell_tree(const std::vector<RgbdSample>& samples,
                        const std::string& out_dir) {
    fs::create_directories(out_dir);
    const fs::path root(out_dir);

    std::ofstream object_map(root / "object_ids.txt");
    if (!object_map) throw DataError("cannot write to " + out_dir);

    for (const RgbdSample& s : samples) {
        write_png((root / ("pcd" + s.id + "r.png")).string(), s.rgb);

        std::ofstream pcd(root / ("pcd" + s.id + ".txt"));
        std::size_t points = 0;
        for (std::uint8_t m : s.depth.missing) points += m == 0;
        pcd << "# synthetic scene " << s.id << "\nVERSION .7\n"
            << "FIELDS x y z rgb index\nSIZE 4 4 4 4 4\nTYPE F F F F F\n"
            << "COUNT 1 1 1 1 1\nWIDTH " << points << "\nHEIGHT 1\n"
            << "VIEWPOINT 0 0 0 1 0 0 0\nPOINTS " << points << "\nDATA ascii\n";
        char line[128];
        for (int r = 0; r < s.depth.height; ++r)
            for (int c = 0; c < s.depth.width; ++c) {
                if (s.depth.is_missing(r, c)) continue;
                std::snprintf(line, sizeof line, "%.6f %.6f %.6f 0 %d\n", c * 0.001,
                              r * 0.001, s.depth.value(r, c), r * s.depth.width + c);
                pcd << line;
            }

        auto write_rects = [&](const fs::path& path, const std::vector<GraspRect>& rects) {
            std::ofstream out(path);
            for (const GraspRect& g : rects) {
                const Polygon poly = rect_corners(g);
                // start from vertex 1 so the first emitted edge is the
                // h-extent, matching how the parser derives h, w and theta
                for (int k = 0; k < 4; ++k) {
                    const Point2& v = poly.vertices[(k + 1) % 4];
                    std::snprintf(line, sizeof line, "%.6f %.6f\n", v.x, v.y);
                    out << line;
                }
            }
        };
        write_rects(root / ("pcd" + s.id + "cpos.txt"), s.positive_grasps);
        write_rects(root / ("pcd" + s.id + "cneg.txt"), s.negative_grasps);

        object_map << s.id << " " << s.object_id << "\n";
    }
}

} // namespace grasp
