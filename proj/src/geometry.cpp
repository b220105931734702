#include "fracbly/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "fracbly/error.hpp"
#include "fracbly/numeric.hpp"

namespace fracbly {

namespace {

Point resolve_offset(Point offset, int d) {
  if (offset.empty()) return Point(static_cast<std::size_t>(d), 0.0);
  if (static_cast<int>(offset.size()) != d) {
    throw InvalidInput("domain offset has " + std::to_string(offset.size()) +
                       " coordinates, expected " + std::to_string(d));
  }
  for (double c : offset) {
    if (!std::isfinite(c)) throw InvalidInput("domain offset must be finite");
  }
  return offset;
}

double cross(const Point2& a, const Point2& b) { return a[0] * b[1] - a[1] * b[0]; }

double signed_area(const std::vector<Point2>& v) {
  CompensatedSum s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    s.add(cross(v[i], v[(i + 1) % v.size()]));
  }
  return 0.5 * s.value();
}

int orientation(const Point2& a, const Point2& b, const Point2& c) {
  const double v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
  return (v > 0) - (v < 0);
}

bool on_segment(const Point2& a, const Point2& b, const Point2& p) {
  return std::min(a[0], b[0]) <= p[0] && p[0] <= std::max(a[0], b[0]) &&
         std::min(a[1], b[1]) <= p[1] && p[1] <= std::max(a[1], b[1]);
}

bool segments_intersect(const Point2& p1, const Point2& p2, const Point2& q1, const Point2& q2) {
  const int o1 = orientation(p1, p2, q1);
  const int o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1);
  const int o4 = orientation(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(p1, p2, q1)) return true;
  if (o2 == 0 && on_segment(p1, p2, q2)) return true;
  if (o3 == 0 && on_segment(q1, q2, p1)) return true;
  if (o4 == 0 && on_segment(q1, q2, p2)) return true;
  return false;
}

bool is_simple(const std::vector<Point2>& v) {
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n])) return false;
    }
  }
  return true;
}

// Centroid of the (shifted) polygon vertices, without the offset.
Point2 polygon_centroid(const std::vector<Point2>& v) {
  CompensatedSum cx, cy;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point2& a = v[i];
    const Point2& b = v[(i + 1) % v.size()];
    const double c = cross(a, b);
    cx.add((a[0] + b[0]) * c);
    cy.add((a[1] + b[1]) * c);
  }
  const double area = signed_area(v);
  return {cx.value() / (6.0 * area), cy.value() / (6.0 * area)};
}

}  // namespace

std::string to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::box: return "box";
    case DomainKind::disk: return "disk";
    case DomainKind::ball: return "ball";
    case DomainKind::polygon: return "polygon";
  }
  return "?";
}

DomainKind domain_kind_from_string(const std::string& name) {
  if (name == "box") return DomainKind::box;
  if (name == "disk") return DomainKind::disk;
  if (name == "ball") return DomainKind::ball;
  if (name == "polygon") return DomainKind::polygon;
  throw InvalidInput("unknown domain kind '" + name + "'");
}

Domain Domain::box(std::vector<double> edges, Point offset) {
  if (edges.size() < 2) throw InvalidInput("box needs at least 2 edge lengths (d >= 2)");
  for (double e : edges) {
    if (!(e > 0.0) || !std::isfinite(e)) {
      throw InvalidInput("box edge lengths must be positive and finite");
    }
  }
  Domain dom;
  dom.kind_ = DomainKind::box;
  dom.dimension_ = static_cast<int>(edges.size());
  dom.offset_ = resolve_offset(std::move(offset), dom.dimension_);
  dom.edges_ = std::move(edges);
  return dom;
}

Domain Domain::disk(double radius, Point center) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidInput("disk radius must be positive");
  Domain dom;
  dom.kind_ = DomainKind::disk;
  dom.dimension_ = 2;
  dom.offset_ = resolve_offset(std::move(center), 2);
  dom.radius_ = radius;
  return dom;
}

Domain Domain::ball(int dimension, double radius, Point center) {
  if (dimension < 3) throw InvalidInput("ball requires d >= 3 (use disk for d = 2)");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidInput("ball radius must be positive");
  Domain dom;
  dom.kind_ = DomainKind::ball;
  dom.dimension_ = dimension;
  dom.offset_ = resolve_offset(std::move(center), dimension);
  dom.radius_ = radius;
  return dom;
}

Domain Domain::polygon(std::vector<Point2> vertices, Point offset) {
  if (vertices.size() < 3) throw InvalidInput("polygon needs at least 3 vertices");
  for (const auto& p : vertices) {
    if (!std::isfinite(p[0]) || !std::isfinite(p[1])) {
      throw InvalidInput("polygon vertices must be finite");
    }
  }
  const double area = signed_area(vertices);
  if (!(std::abs(area) > 0.0)) throw InvalidInput("degenerate polygon (zero area)");
  if (!is_simple(vertices)) throw InvalidInput("polygon is not simple (edges intersect)");
  if (area < 0.0) std::reverse(vertices.begin(), vertices.end());
  Domain dom;
  dom.kind_ = DomainKind::polygon;
  dom.dimension_ = 2;
  dom.offset_ = resolve_offset(std::move(offset), 2);
  dom.vertices_ = std::move(vertices);
  return dom;
}

Domain Domain::translated(std::span<const double> shift) const {
  if (static_cast<int>(shift.size()) != dimension_) {
    throw InvalidInput("translation has wrong dimension");
  }
  Domain out = *this;
  for (int i = 0; i < dimension_; ++i) out.offset_[i] += shift[i];
  return out;
}

Domain Domain::dilated(double t) const {
  if (!(t > 0.0)) throw InvalidInput("dilation factor must be positive");
  Domain out = *this;
  for (double& c : out.offset_) c *= t;
  for (double& e : out.edges_) e *= t;
  out.radius_ *= t;
  for (auto& v : out.vertices_) {
    v[0] *= t;
    v[1] *= t;
  }
  return out;
}

bool Domain::contains(std::span<const double> p) const {
  switch (kind_) {
    case DomainKind::box:
      for (int i = 0; i < dimension_; ++i) {
        const double x = p[i] - offset_[i];
        if (x < 0.0 || x > edges_[i]) return false;
      }
      return true;
    case DomainKind::disk:
    case DomainKind::ball: {
      double r2 = 0.0;
      for (int i = 0; i < dimension_; ++i) {
        const double x = p[i] - offset_[i];
        r2 += x * x;
      }
      return r2 <= radius_ * radius_;
    }
    case DomainKind::polygon: {
      const double x = p[0] - offset_[0];
      const double y = p[1] - offset_[1];
      bool inside = false;
      const std::size_t n = vertices_.size();
      for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const auto& a = vertices_[i];
        const auto& b = vertices_[j];
        if ((a[1] > y) != (b[1] > y) &&
            x < (b[0] - a[0]) * (y - a[1]) / (b[1] - a[1]) + a[0]) {
          inside = !inside;
        }
      }
      return inside;
    }
  }
  return false;
}

std::pair<Point, Point> Domain::bounding_box() const {
  Point lo(offset_), hi(offset_);
  switch (kind_) {
    case DomainKind::box:
      for (int i = 0; i < dimension_; ++i) hi[i] += edges_[i];
      break;
    case DomainKind::disk:
    case DomainKind::ball:
      for (int i = 0; i < dimension_; ++i) {
        lo[i] -= radius_;
        hi[i] += radius_;
      }
      break;
    case DomainKind::polygon: {
      double xmin = vertices_[0][0], xmax = xmin, ymin = vertices_[0][1], ymax = ymin;
      for (const auto& v : vertices_) {
        xmin = std::min(xmin, v[0]);
        xmax = std::max(xmax, v[0]);
        ymin = std::min(ymin, v[1]);
        ymax = std::max(ymax, v[1]);
      }
      lo[0] += xmin;
      hi[0] += xmax;
      lo[1] += ymin;
      hi[1] += ymax;
      break;
    }
  }
  return {lo, hi};
}

double Domain::diameter() const {
  switch (kind_) {
    case DomainKind::box: {
      double s = 0.0;
      for (double e : edges_) s += e * e;
      return std::sqrt(s);
    }
    case DomainKind::disk:
    case DomainKind::ball:
      return 2.0 * radius_;
    case DomainKind::polygon: {
      double best = 0.0;
      for (const auto& a : vertices_) {
        for (const auto& b : vertices_) {
          best = std::max(best, std::hypot(a[0] - b[0], a[1] - b[1]));
        }
      }
      return best;
    }
  }
  return 0.0;
}

double unit_ball_volume(int d) {
  if (d < 1) throw InvalidInput("unit_ball_volume requires d >= 1");
  return std::pow(kPi, 0.5 * d) / gamma_fn(1.0 + 0.5 * d);
}

double volume(const Domain& domain) {
  switch (domain.kind()) {
    case DomainKind::box: {
      double v = 1.0;
      for (double e : domain.edges()) v *= e;
      return v;
    }
    case DomainKind::disk:
      return kPi * domain.radius() * domain.radius();
    case DomainKind::ball:
      return unit_ball_volume(domain.dimension()) * std::pow(domain.radius(), domain.dimension());
    case DomainKind::polygon:
      return signed_area(domain.vertices());
  }
  return 0.0;
}

Point center_of_mass(const Domain& domain) {
  Point c = domain.offset();
  switch (domain.kind()) {
    case DomainKind::box:
      for (int i = 0; i < domain.dimension(); ++i) c[i] += 0.5 * domain.edges()[i];
      break;
    case DomainKind::disk:
    case DomainKind::ball:
      break;
    case DomainKind::polygon: {
      const Point2 g = polygon_centroid(domain.vertices());
      c[0] += g[0];
      c[1] += g[1];
      break;
    }
  }
  return c;
}

double moment_of_inertia(const Domain& domain) {
  const int d = domain.dimension();
  switch (domain.kind()) {
    case DomainKind::box: {
      double s = 0.0;
      for (double e : domain.edges()) s += e * e;
      return volume(domain) * s / 12.0;
    }
    case DomainKind::disk:
    case DomainKind::ball:
      return d * unit_ball_volume(d) * std::pow(domain.radius(), d + 2) / (d + 2.0);
    case DomainKind::polygon: {
      // Fan of triangles (c, v_i, v_{i+1}) from the centroid c.
      const Point2 g = polygon_centroid(domain.vertices());
      std::vector<Point2> v = domain.vertices();
      for (auto& p : v) {
        p[0] -= g[0];
        p[1] -= g[1];
      }
      CompensatedSum s;
      for (std::size_t i = 0; i < v.size(); ++i) {
        const Point2& a = v[i];
        const Point2& b = v[(i + 1) % v.size()];
        const double quad = a[0] * a[0] + a[0] * b[0] + b[0] * b[0] + a[1] * a[1] +
                            a[1] * b[1] + b[1] * b[1];
        s.add(cross(a, b) * quad);
      }
      return s.value() / 12.0;
    }
  }
  return 0.0;
}

double beta(const Domain& domain) {
  const int d = domain.dimension();
  return 2.0 * std::pow(2.0 * kPi, -d) * std::sqrt(volume(domain) * moment_of_inertia(domain));
}

double rearrangement_radius(const Domain& domain) {
  const int d = domain.dimension();
  return std::pow(volume(domain) / unit_ball_volume(d), 1.0 / d);
}

GeometrySummary summarize(const Domain& domain) {
  const int d = domain.dimension();
  GeometrySummary g;
  g.volume = volume(domain);
  g.center_of_mass = center_of_mass(domain);
  g.inertia = moment_of_inertia(domain);
  g.omega_d = unit_ball_volume(d);
  g.rearrangement_radius = std::pow(g.volume / g.omega_d, 1.0 / d);
  g.beta = 2.0 * std::pow(2.0 * kPi, -d) * std::sqrt(g.volume * g.inertia);
  g.omega_cap = g.volume * std::pow(2.0 * kPi, -d);
  return g;
}

double inertia_ball_lower_bound(int d, double vol) {
  return d / (d + 2.0) * std::pow(unit_ball_volume(d), -2.0 / d) * std::pow(vol, (d + 2.0) / d);
}

double beta_lower_bound(int d, double vol) {
  return std::pow(2.0 * kPi, -d) * std::pow(unit_ball_volume(d), -1.0 / d) *
         std::pow(vol, (d + 1.0) / d);
}

}  // namespace fracbly
