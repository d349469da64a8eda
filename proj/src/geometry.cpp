#include "scenex/geometry.hpp"

#include <algorithm>
#include <stdexcept>

namespace scenex {

Polyline::Polyline(std::vector<Vec2> points) : points_(std::move(points)) {
  if (points_.size() < 2) {
    throw std::invalid_argument("Polyline needs at least 2 points");
  }
  cumulative_.resize(points_.size());
  cumulative_[0] = 0.0;
  for (std::size_t i = 1; i < points_.size(); ++i) {
    cumulative_[i] = cumulative_[i - 1] + distance(points_[i - 1], points_[i]);
  }
}

Vec2 Polyline::point_at(double s) const {
  if (points_.empty()) return {};
  if (s <= 0.0) return points_.front();
  if (s >= length()) return points_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
  std::size_t i = static_cast<std::size_t>(it - cumulative_.begin());
  // s lies in segment [i-1, i]
  double seg_len = cumulative_[i] - cumulative_[i - 1];
  double t = seg_len > 0.0 ? (s - cumulative_[i - 1]) / seg_len : 0.0;
  return points_[i - 1] + (points_[i] - points_[i - 1]) * t;
}

double Polyline::heading_at(double s) const {
  if (points_.size() < 2) return 0.0;
  std::size_t i = 1;
  if (s > 0.0) {
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), std::min(s, length()));
    i = static_cast<std::size_t>(it - cumulative_.begin());
    i = std::min(i, points_.size() - 1);
    i = std::max<std::size_t>(i, 1);
  }
  Vec2 d = points_[i] - points_[i - 1];
  return std::atan2(d.y, d.x);
}

bool OrientedRect::contains(const Vec2& p) const {
  const double c = std::cos(heading), s = std::sin(heading);
  const Vec2 d = p - center;
  const double lx = c * d.x + s * d.y;
  const double ly = -s * d.x + c * d.y;
  return std::abs(lx) <= half_length && std::abs(ly) <= half_width;
}

bool segment_intersects_rect(const Vec2& a, const Vec2& b, const OrientedRect& rect) {
  // Transform into the rect frame, then Liang-Barsky slab clipping.
  const double c = std::cos(rect.heading), s = std::sin(rect.heading);
  auto to_local = [&](const Vec2& p) {
    const Vec2 d = p - rect.center;
    return Vec2{c * d.x + s * d.y, -s * d.x + c * d.y};
  };
  const Vec2 p0 = to_local(a);
  const Vec2 p1 = to_local(b);
  const Vec2 d = p1 - p0;

  double t_min = 0.0, t_max = 1.0;
  const double lo[2] = {-rect.half_length, -rect.half_width};
  const double hi[2] = {rect.half_length, rect.half_width};
  const double p[2] = {p0.x, p0.y};
  const double dd[2] = {d.x, d.y};
  for (int axis = 0; axis < 2; ++axis) {
    if (dd[axis] == 0.0) {
      if (p[axis] < lo[axis] || p[axis] > hi[axis]) return false;
    } else {
      double t0 = (lo[axis] - p[axis]) / dd[axis];
      double t1 = (hi[axis] - p[axis]) / dd[axis];
      if (t0 > t1) std::swap(t0, t1);
      t_min = std::max(t_min, t0);
      t_max = std::min(t_max, t1);
      if (t_min > t_max) return false;
    }
  }
  // Open-segment semantics: contact confined to an endpoint does not occlude.
  return t_max > 0.0 && t_min < 1.0;
}

bool line_of_sight(const Vec2& observer, const Vec2& target,
                   const std::vector<OrientedRect>& occluders) {
  for (const auto& rect : occluders) {
    if (segment_intersects_rect(observer, target, rect)) return false;
  }
  return true;
}

namespace {

// Proper intersection of segments [a0,a1] and [b0,b1]; collinear overlaps
// yield nullopt. t/u are the parameters on each segment.
std::optional<std::pair<double, double>> segment_intersection(const Vec2& a0, const Vec2& a1,
                                                              const Vec2& b0, const Vec2& b1) {
  const Vec2 r = a1 - a0;
  const Vec2 q = b1 - b0;
  const double denom = r.cross(q);
  if (denom == 0.0) return std::nullopt;
  const Vec2 d = b0 - a0;
  const double t = d.cross(q) / denom;
  const double u = d.cross(r) / denom;
  if (t < 0.0 || t > 1.0 || u < 0.0 || u > 1.0) return std::nullopt;
  return std::make_pair(t, u);
}

}  // namespace

std::vector<ConflictPoint> route_intersections(const Polyline& a, const Polyline& b) {
  std::vector<ConflictPoint> out;
  const auto& pa = a.points();
  const auto& pb = b.points();
  double sa = 0.0;
  for (std::size_t i = 0; i + 1 < pa.size(); ++i) {
    const double len_a = distance(pa[i], pa[i + 1]);
    double sb = 0.0;
    for (std::size_t j = 0; j + 1 < pb.size(); ++j) {
      const double len_b = distance(pb[j], pb[j + 1]);
      if (auto hit = segment_intersection(pa[i], pa[i + 1], pb[j], pb[j + 1])) {
        ConflictPoint cp;
        cp.point = pa[i] + (pa[i + 1] - pa[i]) * hit->first;
        cp.s_a = sa + hit->first * len_a;
        cp.s_b = sb + hit->second * len_b;
        // Shared polyline vertices produce the same hit from adjacent
        // segment pairs; keep one.
        bool duplicate = false;
        for (const auto& prev : out) {
          if (std::abs(prev.s_a - cp.s_a) < 1e-9 && std::abs(prev.s_b - cp.s_b) < 1e-9) {
            duplicate = true;
            break;
          }
        }
        if (!duplicate) out.push_back(cp);
      }
      sb += len_b;
    }
    sa += len_a;
  }
  return out;
}

std::optional<ConflictPoint> unique_conflict_point(const Polyline& a, const Polyline& b) {
  auto hits = route_intersections(a, b);
  if (hits.size() != 1) return std::nullopt;
  return hits.front();
}

}  // namespace scenex
