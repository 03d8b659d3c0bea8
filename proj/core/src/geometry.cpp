#include "droplet/geometry.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <numbers>
#include <string>

#include "droplet/errors.hpp"

namespace droplet {

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt3 = std::sqrt(3.0);

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

bool on_segment(Point2 a, Point2 b, Point2 p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
}

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
    const Vec2 ab = b - a;
    const double len2 = dot(ab, ab);
    double s = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
    s = std::clamp(s, 0.0, 1.0);
    return distance(p, a + s * ab);
}

}  // namespace

bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d) {
    const int o1 = sign_of(orient(a, b, c));
    const int o2 = sign_of(orient(a, b, d));
    const int o3 = sign_of(orient(c, d, a));
    const int o4 = sign_of(orient(c, d, b));
    if (o1 != o2 && o3 != o4) {
        return true;
    }
    if (o1 == 0 && on_segment(a, b, c)) return true;
    if (o2 == 0 && on_segment(a, b, d)) return true;
    if (o3 == 0 && on_segment(c, d, a)) return true;
    if (o4 == 0 && on_segment(c, d, b)) return true;
    return false;
}

double polygon_signed_area(std::span<const Point2> pts) {
    double twice = 0.0;
    const std::size_t n = pts.size();
    for (std::size_t i = 0; i < n; ++i) {
        twice += cross(pts[i], pts[(i + 1) % n]);
    }
    return 0.5 * twice;
}

bool is_simple_polygon(std::span<const Point2> pts) {
    const std::size_t n = pts.size();
    if (n < 3) return false;
    // Bounding boxes of the edges prune most pairs before the orientation test.
    std::vector<BoundingBox> boxes(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 a = pts[i];
        const Point2 b = pts[(i + 1) % n];
        boxes[i] = {std::min(a.x, b.x), std::min(a.y, b.y), std::max(a.x, b.x), std::max(a.y, b.y)};
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            const BoundingBox& bi = boxes[i];
            const BoundingBox& bj = boxes[j];
            if (bi.max_x < bj.min_x || bj.max_x < bi.min_x || bi.max_y < bj.min_y || bj.max_y < bi.min_y) {
                continue;
            }
            const Point2 a = pts[i];
            const Point2 b = pts[(i + 1) % n];
            const Point2 c = pts[j];
            const Point2 d = pts[(j + 1) % n];
            if (adjacent) {
                // Adjacent edges share one vertex; they only overlap if they fold back on each other.
                const Point2 shared = (j == i + 1) ? b : a;
                const Point2 p = (j == i + 1) ? a : b;
                const Point2 q = (j == i + 1) ? d : c;
                if (orient(p, shared, q) == 0.0 && dot(p - shared, q - shared) > 0.0) {
                    return false;
                }
                continue;
            }
            if (segments_intersect(a, b, c, d)) {
                return false;
            }
        }
    }
    return true;
}

ClosedCurve::ClosedCurve(std::vector<Point2> markers) : markers_(std::move(markers)) {
    const std::size_t n = markers_.size();
    if (n < kMinMarkers) {
        throw InvalidArgument("closed curve needs at least " + std::to_string(kMinMarkers) + " markers, got " +
                              std::to_string(n));
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(markers_[i].x) || !std::isfinite(markers_[i].y)) {
            throw InvalidArgument("marker " + std::to_string(i) + " is not finite");
        }
        if (markers_[i] == markers_[(i + 1) % n]) {
            throw InvalidArgument("markers " + std::to_string(i) + " and " + std::to_string((i + 1) % n) +
                                  " coincide");
        }
    }
    area_ = polygon_signed_area(markers_);
    if (!(area_ > 0.0)) {
        throw InvalidArgument("closed curve must be counterclockwise (signed area " + std::to_string(area_) + ")");
    }
    if (!is_simple_polygon(markers_)) {
        throw InvalidDomain("closed curve is self-intersecting");
    }
    for (std::size_t i = 0; i < n; ++i) {
        perimeter_ += distance(markers_[i], markers_[(i + 1) % n]);
    }
}

double ClosedCurve::edge_length(std::ptrdiff_t i) const { return distance((*this)[i], (*this)[i + 1]); }

double ClosedCurve::min_spacing() const {
    double h = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < size(); ++i) h = std::min(h, edge_length(static_cast<std::ptrdiff_t>(i)));
    return h;
}

double ClosedCurve::max_spacing() const {
    double h = 0.0;
    for (std::size_t i = 0; i < size(); ++i) h = std::max(h, edge_length(static_cast<std::ptrdiff_t>(i)));
    return h;
}

Point2 ClosedCurve::centroid() const {
    // Area centroid; shift by marker 0 to limit cancellation far from the origin.
    const Point2 o = markers_.front();
    double cx = 0.0;
    double cy = 0.0;
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 p = markers_[i] - o;
        const Point2 q = markers_[(i + 1) % n] - o;
        const double w = cross(p, q);
        cx += (p.x + q.x) * w;
        cy += (p.y + q.y) * w;
    }
    return {o.x + cx / (6.0 * area_), o.y + cy / (6.0 * area_)};
}

BoundingBox ClosedCurve::bounds() const {
    BoundingBox box{markers_[0].x, markers_[0].y, markers_[0].x, markers_[0].y};
    for (const Point2& p : markers_) {
        box.min_x = std::min(box.min_x, p.x);
        box.min_y = std::min(box.min_y, p.y);
        box.max_x = std::max(box.max_x, p.x);
        box.max_y = std::max(box.max_y, p.y);
    }
    return box;
}

bool ClosedCurve::contains(Point2 p) const {
    int winding = 0;
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 a = markers_[i];
        const Point2 b = markers_[(i + 1) % n];
        const double o = orient(a, b, p);
        if (o == 0.0 && on_segment(a, b, p)) {
            return true;
        }
        if (a.y <= p.y) {
            if (b.y > p.y && o > 0.0) ++winding;
        } else if (b.y <= p.y && o < 0.0) {
            --winding;
        }
    }
    return winding != 0;
}

double ClosedCurve::distance_to_boundary(Point2 p) const {
    double d = std::numeric_limits<double>::infinity();
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
        d = std::min(d, point_segment_distance(p, markers_[i], markers_[(i + 1) % n]));
    }
    return d;
}

std::vector<Point2> circle_points(double radius, std::size_t n, Point2 center) {
    std::vector<Point2> pts(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double theta = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
        pts[k] = {center.x + radius * std::cos(theta), center.y + radius * std::sin(theta)};
    }
    return pts;
}

ClosedCurve make_disk(double radius, std::size_t n, Point2 center) {
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw InvalidArgument("disk radius must be positive, got " + std::to_string(radius));
    }
    if (n < ClosedCurve::kMinMarkers) {
        throw InvalidArgument("disk needs at least 8 markers, got " + std::to_string(n));
    }
    return ClosedCurve(circle_points(radius, n, center));
}

void validate(const RoundedTriangleSpec& spec) {
    if (!(spec.a > 0.0) || !std::isfinite(spec.a)) {
        throw InvalidArgument("triangle half side a must be positive, got " + std::to_string(spec.a));
    }
    if (!(spec.fillet_radius >= 0.0)) {
        throw InvalidArgument("fillet radius must be non-negative, got " + std::to_string(spec.fillet_radius));
    }
    if (!(spec.fillet_radius < spec.a / kSqrt3)) {
        throw InvalidArgument("fillet radius " + std::to_string(spec.fillet_radius) +
                              " makes the corner fillets overlap (need r < a/sqrt(3))");
    }
    const std::size_t pieces = spec.fillet_radius > 0.0 ? 6 : 3;
    if (spec.marker_count < 3 * pieces) {
        throw InvalidArgument("rounded triangle needs at least 3 markers per edge and arc, got N = " +
                              std::to_string(spec.marker_count));
    }
}

namespace {

// One straight or circular piece of the rounded triangle boundary, traversed
// counterclockwise; markers are placed at parameters k/count, k < count.
struct Piece {
    bool arc = false;
    Point2 start;
    Point2 end;
    Point2 center;
    double radius = 0.0;
    double angle0 = 0.0;
    double angle1 = 0.0;
    std::size_t count = 0;

    double length() const { return arc ? radius * (angle1 - angle0) : distance(start, end); }

    Point2 at(double s) const {
        if (arc) {
            const double th = angle0 + s * (angle1 - angle0);
            return {center.x + radius * std::cos(th), center.y + radius * std::sin(th)};
        }
        return start + s * (end - start);
    }
};

}  // namespace

ClosedCurve make_rounded_triangle(const RoundedTriangleSpec& spec) {
    validate(spec);
    const double a = spec.a;
    const double r = spec.fillet_radius;
    const double top = a * kSqrt3;
    const double t = kSqrt3 * r;  // vertex-to-tangent-point distance
    const double deg = kPi / 180.0;

    const Point2 c_right{a - t, r};
    const Point2 c_top{0.0, top - 2.0 * r};
    const Point2 c_left{-a + t, r};
    auto on_circle = [r](Point2 c, double th) { return Point2{c.x + r * std::cos(th), c.y + r * std::sin(th)}; };

    // Seven pieces starting at the bottom midpoint; arcs are skipped when r == 0,
    // where every tangent point collapses onto its vertex.
    std::vector<Piece> pieces;
    pieces.push_back({false, {0.0, 0.0}, {a - t, 0.0}, {}});
    if (r > 0.0) pieces.push_back({true, {}, {}, c_right, r, -90.0 * deg, 30.0 * deg});
    pieces.push_back({false, on_circle(c_right, 30.0 * deg), on_circle(c_top, 30.0 * deg), {}});
    if (r > 0.0) pieces.push_back({true, {}, {}, c_top, r, 30.0 * deg, 150.0 * deg});
    pieces.push_back({false, on_circle(c_top, 150.0 * deg), on_circle(c_left, 150.0 * deg), {}});
    if (r > 0.0) pieces.push_back({true, {}, {}, c_left, r, 150.0 * deg, 270.0 * deg});
    pieces.push_back({false, {-a + t, 0.0}, {0.0, 0.0}, {}});

    double perimeter = 0.0;
    for (const Piece& p : pieces) perimeter += p.length();
    const double h = perimeter / static_cast<double>(spec.marker_count);
    auto target = [h](double len, std::size_t floor_count) {
        return std::max<std::size_t>(floor_count, static_cast<std::size_t>(std::lround(len / h)));
    };

    // Mirror pairs get equal counts; the remainder goes to the bottom halves
    // (even part) and to the top arc (odd part).
    const std::size_t last = pieces.size() - 1;
    std::size_t half_bottom = target(pieces.front().length(), 2);
    const std::size_t side = target(pieces[r > 0.0 ? 2 : 1].length(), 3);
    const std::size_t arc = r > 0.0 ? target(pieces[1].length(), 3) : 0;
    std::size_t top_arc = arc;
    const auto used = static_cast<std::ptrdiff_t>(2 * half_bottom + 2 * side + 2 * arc + top_arc);
    std::ptrdiff_t remainder = static_cast<std::ptrdiff_t>(spec.marker_count) - used;
    if (remainder % 2 != 0) {
        if (r == 0.0) {
            throw InvalidArgument("sharp triangle needs an even marker count for mirror symmetry");
        }
        top_arc = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(top_arc) + (remainder > 0 ? 1 : -1));
        remainder -= remainder > 0 ? 1 : -1;
    }
    const std::ptrdiff_t new_half = static_cast<std::ptrdiff_t>(half_bottom) + remainder / 2;
    if (new_half < 2 || top_arc < (r > 0.0 ? 3u : 0u)) {
        throw InvalidArgument("marker count " + std::to_string(spec.marker_count) +
                              " too small for this fillet radius");
    }
    half_bottom = static_cast<std::size_t>(new_half);

    pieces.front().count = half_bottom;
    pieces[last].count = half_bottom;
    if (r > 0.0) {
        pieces[1].count = arc;
        pieces[2].count = side;
        pieces[3].count = top_arc;
        pieces[4].count = side;
        pieces[5].count = arc;
    } else {
        pieces[1].count = side;
        pieces[2].count = side;
    }

    std::vector<Point2> markers;
    markers.reserve(spec.marker_count);
    for (const Piece& p : pieces) {
        for (std::size_t k = 0; k < p.count; ++k) {
            markers.push_back(p.at(static_cast<double>(k) / static_cast<double>(p.count)));
        }
    }
    return ClosedCurve(std::move(markers));
}

std::vector<Vec2> outward_normals(const ClosedCurve& curve) {
    const auto n = static_cast<std::ptrdiff_t>(curve.size());
    std::vector<Vec2> normals(curve.size());
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const Vec2 chord = curve[i + 1] - curve[i - 1];
        const double len = norm(chord);
        normals[static_cast<std::size_t>(i)] = {chord.y / len, -chord.x / len};
    }
    return normals;
}

std::vector<double> signed_curvatures(const ClosedCurve& curve) {
    const auto n = static_cast<std::ptrdiff_t>(curve.size());
    std::vector<double> kappa(curve.size());
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const Point2 a = curve[i - 1];
        const Point2 b = curve[i];
        const Point2 c = curve[i + 1];
        const double ab = distance(a, b);
        const double bc = distance(b, c);
        const double ca = distance(c, a);
        const double turn = cross(b - a, c - b);
        if (std::abs(turn) <= 4.0 * std::numeric_limits<double>::epsilon() * ab * bc) {
            kappa[static_cast<std::size_t>(i)] = 0.0;
            continue;
        }
        kappa[static_cast<std::size_t>(i)] = 2.0 * turn / (ab * bc * ca);
    }
    return kappa;
}

CurveQueries curve_queries(const ClosedCurve& curve) {
    return {curve.signed_area(), curve.perimeter(), outward_normals(curve), signed_curvatures(curve)};
}

double default_convexity_tol(const ClosedCurve& curve) { return 1e-6 / curve.inradius_estimate(); }

bool is_convex(const ClosedCurve& curve, double tol) {
    const auto kappa = signed_curvatures(curve);
    if (std::any_of(kappa.begin(), kappa.end(), [tol](double k) { return k < -tol; })) {
        return false;
    }
    // Turning test: sine of the exterior angle at each marker, scaled to a
    // curvature by the local spacing so one tolerance serves both tests.
    const auto n = static_cast<std::ptrdiff_t>(curve.size());
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const Vec2 e0 = curve[i] - curve[i - 1];
        const Vec2 e1 = curve[i + 1] - curve[i];
        const double l0 = norm(e0);
        const double l1 = norm(e1);
        const double sine = cross(e0, e1) / (l0 * l1);
        if (sine < -tol * 0.5 * (l0 + l1)) {
            return false;
        }
    }
    return true;
}

ClosedCurve resample_uniform(const ClosedCurve& curve, std::size_t n) {
    if (n < ClosedCurve::kMinMarkers) {
        throw InvalidArgument("resampling needs at least 8 markers, got " + std::to_string(n));
    }
    const std::size_t m = curve.size();
    std::vector<double> cumulative(m + 1, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        cumulative[i + 1] = cumulative[i] + curve.edge_length(static_cast<std::ptrdiff_t>(i));
    }
    const double total = cumulative[m];

    auto point_at = [&](double s) {
        s = std::clamp(s, 0.0, total);
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), s);
        std::size_t seg = static_cast<std::size_t>(std::distance(cumulative.begin(), it)) - 1;
        seg = std::min(seg, m - 1);
        const double len = cumulative[seg + 1] - cumulative[seg];
        const double u = len > 0.0 ? (s - cumulative[seg]) / len : 0.0;
        const Point2 a = curve[static_cast<std::ptrdiff_t>(seg)];
        const Point2 b = curve[static_cast<std::ptrdiff_t>(seg) + 1];
        return a + u * (b - a);
    };

    // Start from equal arclength along the input polygon, then equidistribute
    // the chord lengths of the output polygon. The equal-chord polygon is a
    // fixed point, which makes repeated resampling idempotent.
    std::vector<double> s(n + 1);
    for (std::size_t k = 0; k <= n; ++k) s[k] = total * static_cast<double>(k) / static_cast<double>(n);
    std::vector<Point2> pts(n);
    std::vector<double> chord_sum(n + 1);
    for (int iter = 0; iter < 50; ++iter) {
        for (std::size_t k = 0; k < n; ++k) pts[k] = point_at(s[k]);
        chord_sum[0] = 0.0;
        for (std::size_t k = 0; k < n; ++k) chord_sum[k + 1] = chord_sum[k] + distance(pts[k], pts[(k + 1) % n]);
        std::vector<double> next(n + 1);
        next[0] = 0.0;
        next[n] = total;
        std::size_t seg = 0;
        double moved = 0.0;
        for (std::size_t k = 1; k < n; ++k) {
            const double goal = chord_sum[n] * static_cast<double>(k) / static_cast<double>(n);
            while (seg + 1 < n && chord_sum[seg + 1] < goal) ++seg;
            const double span = chord_sum[seg + 1] - chord_sum[seg];
            const double u = span > 0.0 ? (goal - chord_sum[seg]) / span : 0.0;
            next[k] = s[seg] + u * (s[seg + 1] - s[seg]);
            moved = std::max(moved, std::abs(next[k] - s[k]));
        }
        s.swap(next);
        if (moved <= 1e-14 * total) break;
    }
    for (std::size_t k = 0; k < n; ++k) pts[k] = point_at(s[k]);
    return ClosedCurve(std::move(pts));
}

double extract_graph_height(const ClosedCurve& curve, double x) {
    double best = std::numeric_limits<double>::infinity();
    const auto n = static_cast<std::ptrdiff_t>(curve.size());
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const Point2 a = curve[i];
        const Point2 b = curve[i + 1];
        if (x < std::min(a.x, b.x) || x > std::max(a.x, b.x)) continue;
        if (a.x == b.x) {
            best = std::min({best, a.y, b.y});
            continue;
        }
        if (x == a.x) {
            best = std::min(best, a.y);
        } else if (x == b.x) {
            best = std::min(best, b.y);
        } else {
            const double u = (x - a.x) / (b.x - a.x);
            best = std::min(best, a.y + u * (b.y - a.y));
        }
    }
    if (!std::isfinite(best)) {
        throw OutOfDomain("vertical line x = " + std::to_string(x) + " does not meet the curve");
    }
    return best;
}

Point2 interpolate_on_curve(const ClosedCurve& curve, std::ptrdiff_t i, double s) {
    const std::array<double, 4> w{
        -s * (s - 1.0) * (s - 2.0) / 6.0,
        (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0,
        -(s + 1.0) * s * (s - 2.0) / 2.0,
        (s + 1.0) * s * (s - 1.0) / 6.0,
    };
    // Interpolate offsets from marker i to keep the result exact on straight runs.
    const Point2 base = curve[i];
    Point2 acc{};
    for (std::ptrdiff_t k = 0; k < 4; ++k) {
        acc = acc + w[static_cast<std::size_t>(k)] * (curve[i - 1 + k] - base);
    }
    return base + acc;
}

Vec2 interpolate_tangent_on_curve(const ClosedCurve& curve, std::ptrdiff_t i, double s) {
    const std::array<double, 4> w{
        -(3.0 * s * s - 6.0 * s + 2.0) / 6.0,
        (3.0 * s * s - 4.0 * s - 1.0) / 2.0,
        -(3.0 * s * s - 2.0 * s - 2.0) / 2.0,
        (3.0 * s * s - 1.0) / 6.0,
    };
    const Point2 base = curve[i];
    Vec2 acc{};
    for (std::ptrdiff_t k = 0; k < 4; ++k) {
        acc = acc + w[static_cast<std::size_t>(k)] * (curve[i - 1 + k] - base);
    }
    return acc;
}

std::vector<Point2> convex_hull(std::vector<Point2> pts) {
    std::sort(pts.begin(), pts.end(), [](Point2 p, Point2 q) { return p.x < q.x || (p.x == q.x && p.y < q.y); });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;
    std::vector<Point2> hull(2 * pts.size());
    std::size_t k = 0;
    for (const Point2& p : pts) {
        while (k >= 2 && orient(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && orient(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

}  // namespace droplet
