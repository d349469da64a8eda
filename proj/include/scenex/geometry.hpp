#pragma once

#include <cmath>
#include <optional>
#include <vector>

namespace scenex {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
  double squared_norm() const { return x * x + y * y; }
};

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

/// Piecewise-linear route. Arc length `s` addresses points along it;
/// queries clamp to [0, length()].
class Polyline {
 public:
  Polyline() = default;
  explicit Polyline(std::vector<Vec2> points);

  const std::vector<Vec2>& points() const { return points_; }
  double length() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }

  Vec2 point_at(double s) const;
  /// Heading (radians) of the segment containing s.
  double heading_at(double s) const;

 private:
  std::vector<Vec2> points_;
  std::vector<double> cumulative_;  // cumulative_[i] = arc length at points_[i]
};

/// Axis-oriented rectangle rotated by `heading` about its center.
struct OrientedRect {
  Vec2 center;
  double half_length = 0.0;  // along heading
  double half_width = 0.0;   // perpendicular
  double heading = 0.0;

  bool contains(const Vec2& p) const;
};

/// True if the open segment a->b passes through the rectangle.
/// Touching only at the segment endpoints does not count.
bool segment_intersects_rect(const Vec2& a, const Vec2& b, const OrientedRect& rect);

/// True iff no occluder blocks the open segment observer->target.
bool line_of_sight(const Vec2& observer, const Vec2& target,
                   const std::vector<OrientedRect>& occluders);

struct ConflictPoint {
  Vec2 point;
  double s_a = 0.0;  // arc length along route a
  double s_b = 0.0;  // arc length along route b
};

/// All transversal intersection points of two polylines. Collinear overlaps
/// are not reported as points.
std::vector<ConflictPoint> route_intersections(const Polyline& a, const Polyline& b);

/// The unique conflict point of two routes, or nullopt when there is none
/// or more than one.
std::optional<ConflictPoint> unique_conflict_point(const Polyline& a, const Polyline& b);

}  // namespace scenex
