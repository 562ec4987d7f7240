#pragma once

#include <vector>

namespace grasp {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

// Convex polygon, vertices counter-clockwise (positive shoelace area).
struct Polygon {
    std::vector<Point2> vertices;

    double area() const;         // signed shoelace area (>= 0 for CCW)
    bool is_convex_ccw() const;  // every consecutive cross product >= 0
};

// Five-dimensional grasp configuration: center (x, y), plate height h,
// gripper opening w, orientation theta in degrees.
//
// theta is canonicalized to [0, 180) at construction; a grasp rectangle is
// physically symmetric under a 180 degree rotation. The edge pair parallel
// to theta carries length w (opening axis), the perpendicular pair carries h.
class GraspRect {
public:
    GraspRect(double x, double y, double h, double w, double theta_deg);

    double x() const { return x_; }
    double y() const { return y_; }
    double h() const { return h_; }
    double w() const { return w_; }
    double theta() const { return theta_; } // degrees in [0, 180)

    Point2 center() const { return {x_, y_}; }
    double area() const { return h_ * w_; }

private:
    double x_, y_, h_, w_, theta_;
};

// Reduces an arbitrary angle in degrees to [0, 180).
double canonical_angle(double theta_deg);

// Smallest separation between two grasp orientations, in [0, 90] degrees.
// Rectangles are invariant under 180 degree rotation, so
// angle_delta(t, t + 180k) == 0 for every integer k.
double angle_delta(double t1_deg, double t2_deg);

// The four corners of a grasp rectangle in counter-clockwise order.
// First emitted edge runs along the theta direction and has length w.
Polygon rect_corners(const GraspRect& g);

// Area of the intersection of two convex CCW polygons via half-plane
// clipping (Sutherland-Hodgman against each edge of the clip polygon).
// Disjoint or degenerate intersections yield 0.
double convex_intersection_area(const Polygon& a, const Polygon& b);

// Jaccard index |A n B| / |A u B| of two grasp rectangles, in [0, 1].
// jaccard(a, a) == 1 exactly.
double jaccard(const GraspRect& a, const GraspRect& b);

} // namespace grasp
