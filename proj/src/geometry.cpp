#include "gradfem/geometry.hpp"

#include <algorithm>
#include <numbers>

namespace gradfem {

namespace {

constexpr double kOrientTol = 1e-14;
constexpr double kParallelTol = 1e-12;
constexpr double kLengthTol = 1e-12;

double max_abs(std::initializer_list<Point2> pts) {
  double s = 0.0;
  for (const auto& p : pts) s = std::max({s, std::abs(p.x), std::abs(p.y)});
  return s;
}

}  // namespace

int orient2d(Point2 a, Point2 b, Point2 c) {
  const double det = signed_area2(a, b, c);
  const double scale = max_abs({a, b, c});
  if (std::abs(det) <= kOrientTol * scale * scale) return 0;
  return det > 0 ? 1 : -1;
}

bool point_on_segment(Point2 p, const Segment2& s) {
  if (orient2d(s.a, s.b, p) != 0) return false;
  const Point2 d = s.b - s.a;
  const double t = dot(p - s.a, d);
  const double len2 = dot(d, d);
  const double tol = kLengthTol * len2;
  return t >= -tol && t <= len2 + tol;
}

bool on_line_of(const Segment2& piece, const Segment2& edge) {
  const Point2 e = edge.b - edge.a;
  const double e_len = norm(e);
  if (e_len == 0.0) return false;
  const double tol = kLengthTol * e_len * max_abs({piece.a, piece.b, edge.a, edge.b});
  return std::abs(cross(e, piece.a - edge.a)) <= tol && std::abs(cross(e, piece.b - edge.a)) <= tol;
}

Barycentric barycentric_of(const Triangle2& tri, Point2 p) {
  const double area2 = signed_area2(tri[0], tri[1], tri[2]);
  const double l1 = signed_area2(tri[0], p, tri[2]) / area2;
  const double l2 = signed_area2(tri[0], tri[1], p) / area2;
  return {1.0 - l1 - l2, l1, l2};
}

Point2 from_barycentric(const Triangle2& tri, const Barycentric& l) {
  return {l[0] * tri[0].x + l[1] * tri[1].x + l[2] * tri[2].x,
          l[0] * tri[0].y + l[1] * tri[1].y + l[2] * tri[2].y};
}

bool point_in_triangle(const Triangle2& tri, Point2 p, double tol) {
  const auto l = barycentric_of(tri, p);
  return l[0] >= -tol && l[1] >= -tol && l[2] >= -tol;
}

std::optional<Segment2> clip_segment_to_triangle(const Segment2& s, const Triangle2& tri_in) {
  Triangle2 tri = tri_in;
  if (signed_area2(tri[0], tri[1], tri[2]) < 0) std::swap(tri[1], tri[2]);

  const Point2 d = s.b - s.a;
  const double seg_len = norm(d);
  if (seg_len == 0.0) return std::nullopt;
  const double scale = std::max(max_abs({s.a, s.b, tri[0], tri[1], tri[2]}), 1e-300);

  double t0 = 0.0;
  double t1 = 1.0;
  for (int k = 0; k < 3; ++k) {
    const Point2 p = tri[k];
    const Point2 q = tri[(k + 1) % 3];
    const Point2 e = q - p;
    const double e_len = norm(e);
    // Inside of edge k is where cross(e, x - p) >= 0.
    const double f0 = cross(e, s.a - p);
    const double fd = cross(e, d);
    if (std::abs(fd) <= kParallelTol * e_len * seg_len) {
      if (f0 < -kParallelTol * e_len * scale) return std::nullopt;
      continue;
    }
    const double t = -f0 / fd;
    if (fd > 0) {
      t0 = std::max(t0, t);
    } else {
      t1 = std::min(t1, t);
    }
    if (t0 >= t1) return std::nullopt;
  }
  if ((t1 - t0) * seg_len <= kLengthTol * scale) return std::nullopt;

  Segment2 out;
  out.a = t0 == 0.0 ? s.a : s.a + t0 * d;
  out.b = t1 == 1.0 ? s.b : s.a + t1 * d;
  return out;
}

double angle_at(Point2 a, Point2 b, Point2 c) {
  const Point2 u = a - b;
  const Point2 v = c - b;
  return std::atan2(std::abs(cross(u, v)), dot(u, v));
}

}  // namespace gradfem
