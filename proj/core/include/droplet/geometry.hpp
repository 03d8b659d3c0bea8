#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace droplet {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
    friend constexpr Point2 operator*(Point2 p, double s) { return {s * p.x, s * p.y}; }
    friend constexpr bool operator==(Point2, Point2) = default;
};

using Vec2 = Point2;

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline double distance(Point2 a, Point2 b) { return norm(b - a); }

// Orientation of the triple (a, b, c): > 0 for a left turn.
constexpr double orient(Point2 a, Point2 b, Point2 c) { return cross(b - a, c - a); }

bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d);

struct BoundingBox {
    double min_x = 0.0;
    double min_y = 0.0;
    double max_x = 0.0;
    double max_y = 0.0;

    double width() const { return max_x - min_x; }
    double height() const { return max_y - min_y; }
};

/// Closed polygonal curve of marker points, counterclockwise and simple.
///
/// Construction validates every invariant (at least kMinMarkers finite
/// points, consecutive markers distinct, positive signed area, no pair of
/// non-adjacent edges intersecting) and throws InvalidArgument or
/// InvalidDomain otherwise. Indices passed to the accessors wrap around.
class ClosedCurve {
public:
    static constexpr std::size_t kMinMarkers = 8;

    explicit ClosedCurve(std::vector<Point2> markers);

    std::size_t size() const { return markers_.size(); }
    std::span<const Point2> markers() const { return markers_; }
    const Point2& operator[](std::ptrdiff_t i) const { return markers_[wrap(i)]; }

    double signed_area() const { return area_; }
    double perimeter() const { return perimeter_; }
    // Length of the edge from marker i to marker i + 1.
    double edge_length(std::ptrdiff_t i) const;
    double min_spacing() const;
    double max_spacing() const;
    Point2 centroid() const;
    BoundingBox bounds() const;
    // 2 * area / perimeter; exact for tangential polygons and the disk.
    double inradius_estimate() const { return 2.0 * area_ / perimeter_; }

    // Winding-number test; points on the boundary count as inside.
    bool contains(Point2 p) const;
    double distance_to_boundary(Point2 p) const;

private:
    std::size_t wrap(std::ptrdiff_t i) const {
        const auto n = static_cast<std::ptrdiff_t>(markers_.size());
        return static_cast<std::size_t>(((i % n) + n) % n);
    }

    std::vector<Point2> markers_;
    double area_ = 0.0;
    double perimeter_ = 0.0;
};

double polygon_signed_area(std::span<const Point2> pts);
bool is_simple_polygon(std::span<const Point2> pts);

// Points R(cos θ_k, sin θ_k) + center with θ_k = 2πk/n. No size checks.
std::vector<Point2> circle_points(double radius, std::size_t n, Point2 center = {});

ClosedCurve make_disk(double radius, std::size_t n, Point2 center = {});

struct RoundedTriangleSpec {
    double a = 1.0;              // half side length
    double fillet_radius = 0.0;  // corner rounding radius, 0 gives the sharp triangle
    std::size_t marker_count = 600;
};

void validate(const RoundedTriangleSpec& spec);

// Equilateral triangle with vertices (-a,0), (a,0), (0,a√3) whose corners are
// replaced by circular arcs of radius r tangent to both adjacent edges. Each
// tangent point sits at distance r√3 from its vertex. Marker 0 is the bottom
// midpoint (0,0); the marker set is mirror symmetric under x -> -x.
ClosedCurve make_rounded_triangle(const RoundedTriangleSpec& spec);

// Half-width of the straight part of the bottom edge: a - √3 r.
inline double flat_bottom_half_width(const RoundedTriangleSpec& spec) {
    return spec.a - std::sqrt(3.0) * spec.fillet_radius;
}

struct CurveQueries {
    double signed_area = 0.0;
    double perimeter = 0.0;
    std::vector<Vec2> outward_normals;
    std::vector<double> signed_curvature;
};

// Unit outward normal at each marker, perpendicular to the chord joining the
// two neighbours.
std::vector<Vec2> outward_normals(const ClosedCurve& curve);

// Signed curvature of the circle through each marker and its two neighbours.
// Positive where a counterclockwise curve turns left; 0 for collinear triples.
std::vector<double> signed_curvatures(const ClosedCurve& curve);

CurveQueries curve_queries(const ClosedCurve& curve);

double default_convexity_tol(const ClosedCurve& curve);

bool is_convex(const ClosedCurve& curve, double tol);
inline bool is_convex(const ClosedCurve& curve) { return is_convex(curve, default_convexity_tol(curve)); }

// n markers equally spaced in arclength along the polygon, starting at marker 0.
ClosedCurve resample_uniform(const ClosedCurve& curve, std::size_t n);

// Smallest y where the vertical line through x meets the polygon.
// Throws OutOfDomain when the line misses the curve.
double extract_graph_height(const ClosedCurve& curve, double x);

// Point on the curve between markers i and i + 1 at parameter s in [0, 1] by
// four-point cubic interpolation through markers i-1 .. i+2.
Point2 interpolate_on_curve(const ClosedCurve& curve, std::ptrdiff_t i, double s);
// Derivative of the same interpolant with respect to s.
Vec2 interpolate_tangent_on_curve(const ClosedCurve& curve, std::ptrdiff_t i, double s);

std::vector<Point2> convex_hull(std::vector<Point2> pts);

}  // namespace droplet
