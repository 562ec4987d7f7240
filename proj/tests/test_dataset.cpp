#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "grasp/dataset.hpp"
#include "grasp/errors.hpp"
#include "grasp/png_io.hpp"
#include "grasp/rng.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>

namespace fs = std::filesystem;
using namespace grasp;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("graspkit_test_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

void write_text(const fs::path& p, const std::string& content) {
    std::ofstream out(p);
    out << content;
}

// Minimal valid sample: 4x4 RGB png, dense 4x4 cloud, one rect each.
void write_sample(const fs::path& dir, const std::string& id) {
    ImageU8 rgb(4, 4, 3);
    for (size_t i = 0; i < rgb.data.size(); ++i)
        rgb.data[i] = static_cast<std::uint8_t>(i * 7 % 251);
    write_png((dir / ("pcd" + id + "r.png")).string(), rgb);

    std::string pcd = "# test cloud\nVERSION .7\nFIELDS x y z rgb index\n"
                      "SIZE 4 4 4 4 4\nTYPE F F F F F\nCOUNT 1 1 1 1 1\n"
                      "WIDTH 16\nHEIGHT 1\nPOINTS 16\nDATA ascii\n";
    for (int i = 0; i < 16; ++i)
        pcd += "0.1 0.2 " + std::to_string(0.5 + 0.01 * i) + " 0 " + std::to_string(i) + "\n";
    write_text(dir / ("pcd" + id + ".txt"), pcd);

    write_text(dir / ("pcd" + id + "cpos.txt"), "1 1\n1 3\n3 3\n3 1\n");
    write_text(dir / ("pcd" + id + "cneg.txt"), "0 0\n0 1\n2 1\n2 0\n");
}

} // namespace

TEST_CASE("parse_rect_file derives center, extents and angle from corners") {
    TempDir tmp;
    const fs::path f = tmp.path / "rects.txt";
    write_text(f, "0 0\n0 2\n4 2\n4 0\n");
    const auto rects = parse_rect_file(f.string(), {100, 100});
    REQUIRE(rects.size() == 1);
    CHECK(rects[0].x() == doctest::Approx(2.0));
    CHECK(rects[0].y() == doctest::Approx(1.0));
    CHECK(rects[0].h() == doctest::Approx(2.0));
    CHECK(rects[0].w() == doctest::Approx(4.0));
    CHECK(rects[0].theta() == doctest::Approx(0.0));
}

TEST_CASE("parse_rect_file corner-rotation invariance") {
    // the same physical rectangle listed starting from each corner
    const std::vector<std::array<double, 2>> corners = {
        {10, 5}, {10, 11}, {20, 11}, {20, 5}};
    TempDir tmp;
    std::vector<GraspRect> parsed;
    for (int start = 0; start < 4; ++start) {
        std::string text;
        for (int k = 0; k < 4; ++k) {
            const auto& c = corners[(start + k) % 4];
            text += std::to_string(c[0]) + " " + std::to_string(c[1]) + "\n";
        }
        const fs::path f = tmp.path / ("rot" + std::to_string(start) + ".txt");
        write_text(f, text);
        const auto rects = parse_rect_file(f.string(), {100, 100});
        REQUIRE(rects.size() == 1);
        parsed.push_back(rects[0]);
    }
    for (const auto& r : parsed) {
        CHECK(r.x() == doctest::Approx(parsed[0].x()));
        CHECK(r.y() == doctest::Approx(parsed[0].y()));
        // extents may swap with a 90-degree angle shift; the product and the
        // corner set are invariant
        CHECK(r.h() * r.w() == doctest::Approx(parsed[0].h() * parsed[0].w()));
        CHECK(jaccard(r, parsed[0]) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("parse_rect_file round-trips through rect_corners") {
    std::mt19937_64 rng(5);
    TempDir tmp;
    for (int trial = 0; trial < 50; ++trial) {
        const GraspRect g(uniform_real(rng, 20, 80), uniform_real(rng, 20, 80),
                          uniform_real(rng, 2, 20), uniform_real(rng, 2, 20),
                          uniform_real(rng, 0, 180));
        const Polygon poly = rect_corners(g);
        std::string text;
        for (const auto& v : poly.vertices) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.10f %.10f\n", v.x, v.y);
            text += buf;
        }
        const fs::path f = tmp.path / "roundtrip.txt";
        write_text(f, text);
        const auto rects = parse_rect_file(f.string(), {200, 200});
        REQUIRE(rects.size() == 1);
        const Polygon back = rect_corners(rects[0]);
        // original corners recovered as a set
        for (const auto& v : poly.vertices) {
            bool found = false;
            for (const auto& u : back.vertices)
                found = found || (std::fabs(u.x - v.x) < 1e-6 && std::fabs(u.y - v.y) < 1e-6);
            CHECK(found);
        }
    }
}

TEST_CASE("parse_rect_file skips non-finite quadruples and counts them") {
    TempDir tmp;
    const fs::path f = tmp.path / "nan.txt";
    write_text(f, "1 1\n1 3\n3 3\n3 1\n"
                  "NaN 0\n0 1\n2 1\n2 0\n"
                  "5 5\n5 7\n7 7\n7 5\n");
    RectParseStats stats;
    const auto rects = parse_rect_file(f.string(), {100, 100}, &stats);
    CHECK(rects.size() == 2);
    CHECK(stats.skipped_nonfinite == 1);
}

TEST_CASE("parse_rect_file error paths") {
    TempDir tmp;
    const fs::path bad_count = tmp.path / "badcount.txt";
    write_text(bad_count, "1 1\n1 3\n3 3\n");
    CHECK_THROWS_AS(parse_rect_file(bad_count.string(), {100, 100}), FormatError);

    const fs::path bad_token = tmp.path / "badtoken.txt";
    write_text(bad_token, "1 1\n1 x\n3 3\n3 1\n");
    CHECK_THROWS_AS(parse_rect_file(bad_token.string(), {100, 100}), FormatError);

    const fs::path empty = tmp.path / "empty.txt";
    write_text(empty, "");
    CHECK(parse_rect_file(empty.string(), {100, 100}).empty());

    CHECK_THROWS_AS(parse_rect_file((tmp.path / "absent.txt").string(), {100, 100}),
                    DataError);
}

TEST_CASE("parse_pcd_to_depth dense and sparse clouds") {
    TempDir tmp;
    std::string header = "FIELDS x y z rgb index\nSIZE 4 4 4 4 4\nTYPE F F F F F\n"
                         "COUNT 1 1 1 1 1\nWIDTH 16\nHEIGHT 1\nPOINTS 16\nDATA ascii\n";
    SUBCASE("all 16 points present") {
        std::string body;
        for (int i = 0; i < 16; ++i)
            body += "0 0 " + std::to_string(1.0 + i) + " 0 " + std::to_string(i) + "\n";
        const fs::path f = tmp.path / "dense.txt";
        write_text(f, header + body);
        const DepthRaster d = parse_pcd_to_depth(f.string(), 4, 4);
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) {
                CHECK_FALSE(d.is_missing(r, c));
                CHECK(d.value(r, c) == doctest::Approx(1.0 + r * 4 + c));
            }
    }
    SUBCASE("missing point leaves a masked cell") {
        std::string body;
        for (int i = 0; i < 16; ++i) {
            if (i == 6) continue;
            body += "0 0 2.5 0 " + std::to_string(i) + "\n";
        }
        const fs::path f = tmp.path / "sparse.txt";
        write_text(f, header + body);
        const DepthRaster d = parse_pcd_to_depth(f.string(), 4, 4);
        CHECK(d.is_missing(1, 2)); // index 6 -> row 1, col 2
        int missing = 0;
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) missing += d.is_missing(r, c) ? 1 : 0;
        CHECK(missing == 1);
    }
    SUBCASE("malformed header") {
        const fs::path f = tmp.path / "noheader.txt";
        write_text(f, "1 2 3\n");
        CHECK_THROWS_AS(parse_pcd_to_depth(f.string(), 4, 4), FormatError);

        const fs::path f2 = tmp.path / "noindex.txt";
        write_text(f2, "FIELDS x y z\nDATA ascii\n0 0 1\n");
        CHECK_THROWS_AS(parse_pcd_to_depth(f2.string(), 4, 4), FormatError);

        const fs::path f3 = tmp.path / "binary.txt";
        write_text(f3, "FIELDS x y z index\nDATA binary\n");
        CHECK_THROWS_AS(parse_pcd_to_depth(f3.string(), 4, 4), FormatError);
    }
    SUBCASE("out-of-bounds index") {
        const fs::path f = tmp.path / "oob.txt";
        write_text(f, header + "0 0 1.0 0 16\n");
        CHECK_THROWS_AS(parse_pcd_to_depth(f.string(), 4, 4), FormatError);
    }
}

TEST_CASE("png round trip") {
    TempDir tmp;
    ImageU8 img(7, 5, 3);
    std::mt19937_64 rng(9);
    for (auto& b : img.data) b = static_cast<std::uint8_t>(rng() & 0xff);
    const fs::path f = tmp.path / "img.png";
    write_png(f.string(), img);
    const ImageU8 back = read_png_rgb8(f.string());
    CHECK(back.height == img.height);
    CHECK(back.width == img.width);
    CHECK(back.data == img.data);
    CHECK_THROWS_AS(read_png_rgb8((tmp.path / "absent.png").string()), DataError);
}

TEST_CASE("load_dataset over a fixture tree") {
    TempDir tmp;
    write_sample(tmp.path, "0001");
    fs::create_directories(tmp.path / "sub");
    write_sample(tmp.path / "sub", "0102");
    // incomplete sample: image only
    ImageU8 rgb(4, 4, 3);
    write_png((tmp.path / "pcd0203r.png").string(), rgb);

    LoadReport report;
    const auto samples = load_dataset(tmp.path.string(), &report);
    REQUIRE(samples.size() == 2);
    CHECK(samples[0].id == "0001"); // sorted by id
    CHECK(samples[1].id == "0102");
    CHECK(report.loaded == 2);
    REQUIRE(report.skipped_samples.size() == 1);
    CHECK(report.skipped_samples[0].id == "0203");
    CHECK(report.object_id_source == "id-prefix");
    CHECK(samples[0].object_id == "00");
    CHECK(samples[1].object_id == "01");
    CHECK(report.positive_count == 2);
    CHECK(report.negative_count == 2);
    CHECK(samples[0].rgb.height == samples[0].depth.height);
    CHECK(samples[0].rgb.width == samples[0].depth.width);
}

TEST_CASE("load_dataset object mapping file") {
    TempDir tmp;
    write_sample(tmp.path, "0001");
    write_sample(tmp.path, "0002");
    write_text(tmp.path / "object_ids.txt", "0001 mug\n0002 mug\n");
    LoadReport report;
    const auto samples = load_dataset(tmp.path.string(), &report);
    CHECK(report.object_id_source == "mapping-file");
    CHECK(samples[0].object_id == "mug");
    CHECK(samples[1].object_id == "mug");
}

TEST_CASE("load_dataset error paths") {
    TempDir tmp;
    CHECK_THROWS_AS(load_dataset((tmp.path / "nope").string()), DataError);
    fs::create_directories(tmp.path / "empty");
    CHECK_THROWS_AS(load_dataset((tmp.path / "empty").string()), DataError);
}
