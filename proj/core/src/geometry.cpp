#include "grasp/geometry.hpp"

#include "grasp/errors.hpp"

#include <cmath>
#include <numbers>

namespace grasp {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

double cross(const Point2& o, const Point2& a, const Point2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

} // namespace

double Polygon::area() const {
    const size_t n = vertices.size();
    if (n < 3) return 0.0;
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const Point2& p = vertices[i];
        const Point2& q = vertices[(i + 1) % n];
        acc += p.x * q.y - q.x * p.y;
    }
    return 0.5 * acc;
}

bool Polygon::is_convex_ccw() const {
    const size_t n = vertices.size();
    if (n < 3) return false;
    for (size_t i = 0; i < n; ++i) {
        const Point2& a = vertices[i];
        const Point2& b = vertices[(i + 1) % n];
        const Point2& c = vertices[(i + 2) % n];
        if (cross(a, b, c) < 0.0) return false;
    }
    return area() >= 0.0;
}

double canonical_angle(double theta_deg) {
    if (!std::isfinite(theta_deg)) throw Error("canonical_angle: non-finite angle");
    double t = std::fmod(theta_deg, 180.0);
    if (t < 0.0) t += 180.0;
    if (t >= 180.0) t -= 180.0; // fmod can land exactly on 180 after the +=
    return t;
}

double angle_delta(double t1_deg, double t2_deg) {
    double d = std::fmod(std::fabs(t1_deg - t2_deg), 180.0);
    return std::min(d, 180.0 - d);
}

GraspRect::GraspRect(double x, double y, double h, double w, double theta_deg)
    : x_(x), y_(y), h_(h), w_(w), theta_(canonical_angle(theta_deg)) {
    if (!(std::isfinite(x) && std::isfinite(y)))
        throw Error("GraspRect: non-finite center");
    if (!(h > 0.0) || !(w > 0.0))
        throw Error("GraspRect: extents must be positive (h=" + std::to_string(h) +
                    ", w=" + std::to_string(w) + ")");
}

Polygon rect_corners(const GraspRect& g) {
    const double t = g.theta() * kDegToRad;
    const double ux = std::cos(t), uy = std::sin(t);   // opening axis, length w
    const double vx = -uy, vy = ux;                     // plate axis, length h
    const double hw = 0.5 * g.w(), hh = 0.5 * g.h();
    Polygon p;
    p.vertices = {
        {g.x() - hw * ux - hh * vx, g.y() - hw * uy - hh * vy},
        {g.x() + hw * ux - hh * vx, g.y() + hw * uy - hh * vy},
        {g.x() + hw * ux + hh * vx, g.y() + hw * uy + hh * vy},
        {g.x() - hw * ux + hh * vx, g.y() - hw * uy + hh * vy},
    };
    return p;
}

double convex_intersection_area(const Polygon& a, const Polygon& b) {
    std::vector<Point2> out = a.vertices;
    const size_t nb = b.vertices.size();
    for (size_t i = 0; i < nb && !out.empty(); ++i) {
        const Point2& e0 = b.vertices[i];
        const Point2& e1 = b.vertices[(i + 1) % nb];
        std::vector<Point2> in;
        in.swap(out);
        const size_t n = in.size();
        for (size_t j = 0; j < n; ++j) {
            const Point2& cur = in[j];
            const Point2& nxt = in[(j + 1) % n];
            const double dc = cross(e0, e1, cur);
            const double dn = cross(e0, e1, nxt);
            if (dc >= 0.0) out.push_back(cur);
            if ((dc > 0.0 && dn < 0.0) || (dc < 0.0 && dn > 0.0)) {
                const double t = dc / (dc - dn);
                out.push_back({cur.x + t * (nxt.x - cur.x),
                               cur.y + t * (nxt.y - cur.y)});
            }
        }
    }
    if (out.size() < 3) return 0.0;
    Polygon clipped;
    clipped.vertices = std::move(out);
    const double area = clipped.area();
    return area > 0.0 ? area : 0.0;
}

double jaccard(const GraspRect& a, const GraspRect& b) {
    const Polygon pa = rect_corners(a);
    const Polygon pb = rect_corners(b);
    const double inter = convex_intersection_area(pa, pb);
    if (inter <= 0.0) return 0.0;
    const double uni = pa.area() + pb.area() - inter;
    return inter / uni;
}

} // namespace grasp
