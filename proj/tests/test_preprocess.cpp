#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "grasp/errors.hpp"
#include "grasp/preprocess.hpp"
#include "grasp/rng.hpp"

#include <cmath>
#include <random>

using namespace grasp;

namespace {

DepthRaster make_depth(int h, int w, double lo, double hi) {
    DepthRaster d(h, w);
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c)
            d.set(r, c, lo + (hi - lo) * (r * w + c) / std::max(1, h * w - 1));
    return d;
}

RgbdSample make_sample(int h, int w, std::uint64_t seed = 1) {
    RgbdSample s;
    s.id = "0001";
    s.object_id = "00";
    s.rgb = ImageU8(h, w, 3);
    std::mt19937_64 rng(seed);
    for (auto& b : s.rgb.data) b = static_cast<std::uint8_t>(rng() & 0xff);
    s.depth = make_depth(h, w, 0.4, 0.9);
    s.positive_grasps.emplace_back(w / 2.0, h / 2.0, 6, 10, 30);
    return s;
}

} // namespace

TEST_CASE("rescale_depth endpoints, degenerate range and missing cells") {
    DepthRaster d(1, 2);
    d.set(0, 0, 0.0);
    d.set(0, 1, 10.0);
    ImageU8 out = rescale_depth(d);
    CHECK(out.data[0] == 0);
    CHECK(out.data[1] == 255);

    DepthRaster constant(2, 2);
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) constant.set(r, c, 5.0);
    out = rescale_depth(constant);
    for (auto b : out.data) CHECK(b == 0);

    DepthRaster holes(1, 3);
    holes.set(0, 0, 0.0);
    holes.set(0, 2, 10.0); // (0,1) left missing
    out = rescale_depth(holes);
    CHECK(out.data[0] == 0);
    CHECK(out.data[1] == 0); // missing -> zero after rescale
    CHECK(out.data[2] == 255);

    DepthRaster all_missing(2, 2);
    CHECK_THROWS_AS(rescale_depth(all_missing), DataError);
}

TEST_CASE("to_rgd replaces the blue channel only") {
    ImageU8 rgb(2, 2, 3);
    for (size_t i = 0; i < rgb.data.size(); ++i) rgb.data[i] = static_cast<std::uint8_t>(i + 1);
    ImageU8 depth(2, 2, 1);
    SUBCASE("zero depth") {
        const ImageU8 out = to_rgd(rgb, depth);
        for (size_t p = 0; p < out.pixel_count(); ++p) {
            CHECK(out.data[p * 3 + 0] == rgb.data[p * 3 + 0]);
            CHECK(out.data[p * 3 + 1] == rgb.data[p * 3 + 1]);
            CHECK(out.data[p * 3 + 2] == 0);
        }
    }
    SUBCASE("saturated depth on black image") {
        ImageU8 black(2, 2, 3);
        for (auto& b : depth.data) b = 255;
        const ImageU8 out = to_rgd(black, depth);
        for (size_t p = 0; p < out.pixel_count(); ++p) {
            CHECK(out.data[p * 3 + 0] == 0);
            CHECK(out.data[p * 3 + 1] == 0);
            CHECK(out.data[p * 3 + 2] == 255);
        }
    }
    SUBCASE("depth channel round trip") {
        for (size_t i = 0; i < depth.data.size(); ++i)
            depth.data[i] = static_cast<std::uint8_t>(37 * i);
        const ImageU8 out = to_rgd(rgb, depth);
        for (size_t p = 0; p < out.pixel_count(); ++p)
            CHECK(out.data[p * 3 + 2] == depth.data[p]);
    }
    SUBCASE("shape mismatch") {
        ImageU8 small(1, 2, 1);
        CHECK_THROWS_AS(to_rgd(rgb, small), Error);
    }
}

TEST_CASE("depth_to_3channel replicates the plane") {
    ImageU8 depth(3, 2, 1);
    for (size_t i = 0; i < depth.data.size(); ++i)
        depth.data[i] = static_cast<std::uint8_t>(50 * i);
    const ImageU8 out = depth_to_3channel(depth);
    for (size_t p = 0; p < out.pixel_count(); ++p) {
        CHECK(out.data[p * 3 + 0] == depth.data[p]);
        CHECK(out.data[p * 3 + 1] == depth.data[p]);
        CHECK(out.data[p * 3 + 2] == depth.data[p]);
    }
}

TEST_CASE("extract_patch interior crop is an exact sub-raster") {
    ImageU8 src(10, 10, 3);
    for (size_t i = 0; i < src.data.size(); ++i)
        src.data[i] = static_cast<std::uint8_t>(i % 251);
    Point2 origin;
    const ImageU8 patch = extract_patch(src, 5, 5, 4, &origin);
    CHECK(origin.x == 3);
    CHECK(origin.y == 3);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            for (int ch = 0; ch < 3; ++ch)
                CHECK(patch.at(r, c, ch) == src.at(r + 3, c + 3, ch));
}

TEST_CASE("extract_patch zero-pads outside the source") {
    ImageU8 src(10, 10, 1);
    for (auto& b : src.data) b = 200;
    Point2 origin;
    const ImageU8 patch = extract_patch(src, 0, 0, 8, &origin);
    CHECK(origin.x == -4);
    CHECK(origin.y == -4);
    // rows/cols mapping to negative source indices are zero
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c) {
            const bool inside = (r >= 4 && c >= 4);
            CHECK(patch.at(r, c, 0) == (inside ? 200 : 0));
        }
    // back-projection: patch coordinate + origin = source coordinate
    CHECK(origin.x + 4 == 0);
    CHECK(origin.y + 4 == 0);
    CHECK_THROWS_AS(extract_patch(src, -1, 5, 4), Error);
    CHECK_THROWS_AS(extract_patch(src, 5, 10, 4), Error);
}

TEST_CASE("resize_plane_bilinear") {
    SUBCASE("constant stays constant exactly") {
        std::vector<double> src(5 * 7, 0.375);
        const auto out = resize_plane_bilinear(src, 5, 7, 9, 9);
        for (double v : out) CHECK(v == 0.375);
    }
    SUBCASE("2x2 to 3x3 center is the bilinear midpoint") {
        const std::vector<double> src = {0, 0, 0, 100};
        const auto out = resize_plane_bilinear(src, 2, 2, 3, 3);
        CHECK(out[4] == doctest::Approx(25.0));
        CHECK(out[0] == doctest::Approx(0.0));
        CHECK(out[8] == doctest::Approx(100.0));
    }
    SUBCASE("output stays within source bounds") {
        std::mt19937_64 rng(17);
        std::vector<double> src(6 * 6);
        for (auto& v : src) v = uniform_real(rng, -3, 3);
        const double lo = *std::min_element(src.begin(), src.end());
        const double hi = *std::max_element(src.begin(), src.end());
        for (int s : {2, 5, 13, 64}) {
            const auto out = resize_plane_bilinear(src, 6, 6, s, s);
            for (double v : out) {
                CHECK(v >= lo - 1e-12);
                CHECK(v <= hi + 1e-12);
            }
        }
    }
}

TEST_CASE("encode_target basics") {
    const GraspRect g(32, 32, 6, 10, 0);
    const TargetVec v = encode_target(g, {0, 0}, 64);
    CHECK(v.tx == doctest::Approx(0.5));
    CHECK(v.ty == doctest::Approx(0.5));
    CHECK(v.a0 == doctest::Approx(1.0));
    CHECK(v.a1 == doctest::Approx(0.0));

    const GraspRect g90(32, 32, 6, 10, 90);
    const TargetVec v90 = encode_target(g90, {0, 0}, 64);
    CHECK(v90.a0 == doctest::Approx(-1.0));
    CHECK(std::fabs(v90.a1) < 1e-12);

    // theta and theta+180 encode identically (canonicalized at construction)
    const GraspRect a(10, 10, 2, 3, 42), b(10, 10, 2, 3, 222);
    const TargetVec va = encode_target(a, {0, 0}, 64), vb = encode_target(b, {0, 0}, 64);
    CHECK(va.a0 == vb.a0);
    CHECK(va.a1 == vb.a1);

    // unit-circle invariant
    CHECK(va.a0 * va.a0 + va.a1 * va.a1 == doctest::Approx(1.0).epsilon(1e-6));

    CHECK_THROWS_AS(encode_target(GraspRect(100, 5, 1, 1, 0), {0, 0}, 64), Error);
}

TEST_CASE("decode_output inverts encode_target") {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 100; ++i) {
        const Point2 origin{uniform_real(rng, -40, 40), uniform_real(rng, -40, 40)};
        const double side = uniform_real(rng, 32, 256);
        const GraspRect g(origin.x + uniform_real(rng, 0.05, 0.95) * side,
                          origin.y + uniform_real(rng, 0.05, 0.95) * side,
                          uniform_real(rng, 1, 20), uniform_real(rng, 1, 20),
                          uniform_real(rng, 0, 180));
        const TargetVec v = encode_target(g, origin, side);
        const GraspRect back = decode_output(v, origin, side, g.h(), g.w());
        CHECK(std::fabs(back.x() - g.x()) < 0.5);
        CHECK(std::fabs(back.y() - g.y()) < 0.5);
        CHECK(angle_delta(back.theta(), g.theta()) < 1e-6);
    }
}

TEST_CASE("decode_output unshifted identity and error case") {
    TargetVec v{0.5, 0.5, 1.0, 0.0};
    const GraspRect g = decode_output(v, {0, 0}, 64, 6, 10);
    CHECK(g.x() == doctest::Approx(32));
    CHECK(g.y() == doctest::Approx(32));
    CHECK(g.theta() == doctest::Approx(0));
    TargetVec zero{0.5, 0.5, 0.0, 0.0};
    CHECK_THROWS_AS(decode_output(zero, {0, 0}, 64, 6, 10), Error);
}

TEST_CASE("raw angle encoding round trip") {
    const GraspRect g(20, 20, 4, 8, 137.5);
    const TargetVec v = encode_target(g, {0, 0}, 64, AngleEncoding::raw);
    CHECK(v.a0 == doctest::Approx(137.5 / 180.0));
    const GraspRect back = decode_output(v, {0, 0}, 64, 4, 8, AngleEncoding::raw);
    CHECK(back.theta() == doctest::Approx(137.5));
}

TEST_CASE("l2_normalize") {
    const auto v = l2_normalize({3, 4});
    CHECK(v[0] == doctest::Approx(0.6));
    CHECK(v[1] == doctest::Approx(0.8));
    const auto unit = l2_normalize({0, 1, 0});
    CHECK(unit == std::vector<double>{0, 1, 0});
    const auto zero = l2_normalize({0, 0, 0});
    CHECK(zero == std::vector<double>{0, 0, 0});
    std::mt19937_64 rng(55);
    for (int i = 0; i < 50; ++i) {
        std::vector<double> x(1 + rng() % 16);
        for (auto& e : x) e = uniform_real(rng, -10, 10);
        const auto n = l2_normalize(x);
        double norm = 0;
        for (double e : n) norm += e * e;
        CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("make_net_input is finite and in [0,1] for all modalities") {
    RgbdSample sample = make_sample(48, 64);
    // punch some missing-depth holes
    sample.depth.missing[5] = 1;
    sample.depth.missing[100] = 1;
    PreprocessConfig cfg;
    cfg.input_size = 32;
    for (Modality m : {Modality::rgb, Modality::rgd, Modality::depth3}) {
        const NetInput in = make_net_input(sample, cfg, m);
        CHECK(in.size == 32);
        CHECK(in.pixels.size() == 3u * 32 * 32);
        for (double p : in.pixels) {
            CHECK(std::isfinite(p));
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
        }
        // full-image policy covers the whole raster: side = max(H, W)
        CHECK(in.patch_size == 64);
        CHECK(in.scale == doctest::Approx(0.5));
    }
}

TEST_CASE("make_net_input grasp-centered policy uses the provided center") {
    RgbdSample sample = make_sample(64, 64);
    PreprocessConfig cfg;
    cfg.input_size = 16;
    cfg.patch_policy = PatchPolicy::grasp_centered;
    cfg.patch_size = 24;
    const NetInput in = make_net_input(sample, cfg, Modality::rgb, {20, 30});
    CHECK(in.patch_size == 24);
    CHECK(in.crop_origin.x == 20 - 12);
    CHECK(in.crop_origin.y == 30 - 12);

    cfg.patch_size = 0;
    CHECK_THROWS_AS(make_net_input(sample, cfg, Modality::rgb, {20, 30}), ConfigError);
}
