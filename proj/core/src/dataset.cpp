#include "grasp/dataset.hpp"

#include "grasp/errors.hpp"
#include "grasp/png_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;

namespace grasp {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) tokens.push_back(tok);
    return tokens;
}

double parse_real(const std::string& tok, const std::string& path, size_t line_no) {
    const char* begin = tok.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw FormatError(path + ":" + std::to_string(line_no) +
                          ": unparseable token '" + tok + "'");
    return v;
}

} // namespace

std::vector<GraspRect> parse_rect_file(const std::string& path, ImageBounds bounds,
                                       RectParseStats* stats) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open rectangle file: " + path);

    std::vector<Point2> corners;
    std::vector<size_t> corner_lines;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto tokens = split_ws(line);
        if (tokens.empty()) continue; // tolerate trailing blank lines
        if (tokens.size() != 2)
            throw FormatError(path + ":" + std::to_string(line_no) +
                              ": expected 'x y', got " + std::to_string(tokens.size()) +
                              " tokens");
        corners.push_back({parse_real(tokens[0], path, line_no),
                           parse_real(tokens[1], path, line_no)});
        corner_lines.push_back(line_no);
    }
    if (corners.size() % 4 != 0)
        throw FormatError(path + ": corner line count " + std::to_string(corners.size()) +
                          " is not a multiple of 4 (last line " +
                          std::to_string(line_no) + ")");

    std::vector<GraspRect> rects;
    RectParseStats local;
    for (size_t q = 0; q + 3 < corners.size(); q += 4) {
        const Point2& c0 = corners[q];
        const Point2& c1 = corners[q + 1];
        const Point2& c2 = corners[q + 2];
        const Point2& c3 = corners[q + 3];
        bool finite = true;
        for (const Point2* p : {&c0, &c1, &c2, &c3})
            finite = finite && std::isfinite(p->x) && std::isfinite(p->y);
        if (!finite) {
            ++local.skipped_nonfinite;
            continue;
        }
        const double cx = 0.25 * (c0.x + c1.x + c2.x + c3.x);
        const double cy = 0.25 * (c0.y + c1.y + c2.y + c3.y);
        const double h = std::hypot(c0.x - c1.x, c0.y - c1.y);
        const double w = std::hypot(c1.x - c2.x, c1.y - c2.y);
        if (!(h > 0.0) || !(w > 0.0)) {
            ++local.skipped_degenerate;
            continue;
        }
        if (cx < 0.0 || cx >= bounds.width || cy < 0.0 || cy >= bounds.height) {
            ++local.skipped_out_of_bounds;
            continue;
        }
        const double theta =
            std::atan2(c2.y - c1.y, c2.x - c1.x) * 180.0 / std::numbers::pi;
        rects.emplace_back(cx, cy, h, w, theta);
    }
    if (stats) {
        stats->skipped_nonfinite += local.skipped_nonfinite;
        stats->skipped_degenerate += local.skipped_degenerate;
        stats->skipped_out_of_bounds += local.skipped_out_of_bounds;
    }
    return rects;
}

DepthRaster parse_pcd_to_depth(const std::string& path, int height, int width) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open point cloud: " + path);

    std::string line;
    size_t line_no = 0;
    std::optional<int> z_pos, index_pos;
    size_t field_count = 0;
    bool ascii = false, header_done = false;
    while (std::getline(in, line)) {
        ++line_no;
        const auto tokens = split_ws(line);
        if (tokens.empty() || tokens[0][0] == '#') continue;
        if (tokens[0] == "FIELDS") {
            for (size_t i = 1; i < tokens.size(); ++i) {
                if (tokens[i] == "z") z_pos = static_cast<int>(i - 1);
                if (tokens[i] == "index") index_pos = static_cast<int>(i - 1);
            }
            field_count = tokens.size() - 1;
        } else if (tokens[0] == "DATA") {
            if (tokens.size() < 2 || tokens[1] != "ascii")
                throw FormatError(path + ": only DATA ascii clouds are supported");
            ascii = true;
            header_done = true;
            break;
        }
    }
    if (!header_done || !ascii)
        throw FormatError(path + ": missing header (no DATA ascii line)");
    if (field_count == 0)
        throw FormatError(path + ": missing FIELDS declaration");
    if (!index_pos)
        throw FormatError(path + ": FIELDS has no 'index' entry");
    if (!z_pos)
        throw FormatError(path + ": FIELDS has no 'z' entry");

    DepthRaster raster(height, width);
    const long long cell_count = static_cast<long long>(height) * width;
    while (std::getline(in, line)) {
        ++line_no;
        const auto tokens = split_ws(line);
        if (tokens.empty()) continue;
        if (tokens.size() != field_count)
            throw FormatError(path + ":" + std::to_string(line_no) + ": expected " +
                              std::to_string(field_count) + " fields, got " +
                              std::to_string(tokens.size()));
        const double index_raw = parse_real(tokens[*index_pos], path, line_no);
        const long long index = std::llround(index_raw);
        if (index < 0 || index >= cell_count)
            throw FormatError(path + ":" + std::to_string(line_no) + ": point index " +
                              std::to_string(index) + " outside " +
                              std::to_string(height) + "x" + std::to_string(width));
        const double depth = parse_real(tokens[*z_pos], path, line_no);
        raster.set(static_cast<int>(index / width), static_cast<int>(index % width), depth);
    }
    return raster;
}

namespace {

// "pcd0123r.png" -> "0123"
std::optional<std::string> id_from_rgb_name(const std::string& name) {
    if (name.size() < 9) return std::nullopt; // pcd + digit + r.png
    if (name.rfind("pcd", 0) != 0) return std::nullopt;
    if (name.substr(name.size() - 5) != "r.png") return std::nullopt;
    const std::string digits = name.substr(3, name.size() - 8);
    if (digits.empty()) return std::nullopt;
    for (char c : digits)
        if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    return digits;
}

std::map<std::string, std::string> read_object_map(const fs::path& root) {
    std::map<std::string, std::string> map;
    const fs::path file = root / "object_ids.txt";
    std::ifstream in(file);
    if (!in) return map;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto tokens = split_ws(line);
        if (tokens.empty() || tokens[0][0] == '#') continue;
        if (tokens.size() != 2)
            throw FormatError(file.string() + ":" + std::to_string(line_no) +
                              ": expected 'sample_id object_id'");
        map[tokens[0]] = tokens[1];
    }
    return map;
}

} // namespace

std::vector<RgbdSample> load_dataset(const std::string& root_dir, LoadReport* report) {
    const fs::path root(root_dir);
    std::error_code ec;
    if (!fs::is_directory(root, ec))
        throw DataError("dataset root is not a readable directory: " + root_dir);

    // id -> directory holding that sample's files
    std::map<std::string, fs::path> found;
    for (auto it = fs::recursive_directory_iterator(root, ec);
         it != fs::recursive_directory_iterator(); it.increment(ec)) {
        if (ec) throw DataError("error scanning " + root_dir + ": " + ec.message());
        if (!it->is_regular_file()) continue;
        if (const auto id = id_from_rgb_name(it->path().filename().string()))
            found[*id] = it->path().parent_path();
    }

    const auto object_map = read_object_map(root);
    LoadReport local;
    local.object_id_source = object_map.empty() ? "id-prefix" : "mapping-file";

    std::vector<RgbdSample> samples;
    for (const auto& [id, dir] : found) {
        const fs::path rgb_path = dir / ("pcd" + id + "r.png");
        const fs::path pcd_path = dir / ("pcd" + id + ".txt");
        const fs::path pos_path = dir / ("pcd" + id + "cpos.txt");
        const fs::path neg_path = dir / ("pcd" + id + "cneg.txt");

        std::string missing;
        for (const auto& [p, tag] : {std::pair{pcd_path, "point cloud"},
                                     std::pair{pos_path, "positive rects"},
                                     std::pair{neg_path, "negative rects"}}) {
            if (!fs::exists(p)) missing += std::string(missing.empty() ? "" : ", ") + tag;
        }
        if (!missing.empty()) {
            local.skipped_samples.push_back({id, "missing " + missing});
            continue;
        }

        RgbdSample s;
        s.id = id;
        s.rgb = read_png_rgb8(rgb_path.string());
        const ImageBounds bounds{s.rgb.height, s.rgb.width};
        s.depth = parse_pcd_to_depth(pcd_path.string(), bounds.height, bounds.width);
        s.positive_grasps = parse_rect_file(pos_path.string(), bounds, &local.rect_stats);
        s.negative_grasps = parse_rect_file(neg_path.string(), bounds, &local.rect_stats);
        if (const auto it = object_map.find(id); it != object_map.end())
            s.object_id = it->second;
        else
            s.object_id = id.size() >= 2 ? id.substr(0, 2) : id;
        local.positive_count += s.positive_grasps.size();
        local.negative_count += s.negative_grasps.size();
        samples.push_back(std::move(s));
    }
    // std::map iteration already yields ids in sorted order
    local.loaded = samples.size();
    if (report) *report = std::move(local);
    if (samples.empty())
        throw DataError("no samples found under " + root_dir);
    return samples;
}

} // namespace grasp
