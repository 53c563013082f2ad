#pragma once

#include <array>
#include <cmath>
#include <optional>

namespace gradfem {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Point2 a, Point2 b) = default;
};

struct Segment2 {
  Point2 a;
  Point2 b;
};

using Triangle2 = std::array<Point2, 3>;
using Barycentric = std::array<double, 3>;

inline double cross(Point2 u, Point2 v) { return u.x * v.y - u.y * v.x; }
inline double dot(Point2 u, Point2 v) { return u.x * v.x + u.y * v.y; }
inline double norm(Point2 u) { return std::hypot(u.x, u.y); }
inline double distance(Point2 a, Point2 b) { return norm(b - a); }
inline double length(const Segment2& s) { return distance(s.a, s.b); }

/// Twice the signed area of (a, b, c); positive for counterclockwise order.
inline double signed_area2(Point2 a, Point2 b, Point2 c) { return cross(b - a, c - a); }

/// Sign of (b-a)x(c-a). Values with |cross| <= 1e-14 * scale^2 are reported as 0,
/// scale being the largest coordinate magnitude among the three points.
int orient2d(Point2 a, Point2 b, Point2 c);

/// True when p lies on the closed segment s (collinear within the orient2d band).
bool point_on_segment(Point2 p, const Segment2& s);

/// True when both ends of `piece` lie on the line through `edge`, up to rounding
/// measured against the coordinate magnitude (not the edge length).
bool on_line_of(const Segment2& piece, const Segment2& edge);

/// Barycentric coordinates of p with respect to tri. No clamping.
Barycentric barycentric_of(const Triangle2& tri, Point2 p);

Point2 from_barycentric(const Triangle2& tri, const Barycentric& lambda);

/// Closed-triangle containment with a small relative tolerance on the barycentrics.
bool point_in_triangle(const Triangle2& tri, Point2 p, double tol = 1e-12);

/// Portion of s inside the closed triangle. Empty when the overlap is a point or
/// shorter than a relative tolerance. The returned endpoints lie on s and keep its direction.
std::optional<Segment2> clip_segment_to_triangle(const Segment2& s, const Triangle2& tri);

/// Interior angle at vertex b of the corner a-b-c, in [0, pi].
double angle_at(Point2 a, Point2 b, Point2 c);

}  // namespace gradfem
