#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

namespace fracbly {

using Point = std::vector<double>;
using Point2 = std::array<double, 2>;

enum class DomainKind { box, disk, ball, polygon };

std::string to_string(DomainKind kind);
DomainKind domain_kind_from_string(const std::string& name);

/// A bounded region in R^d. Boxes span [offset, offset + edges]; disks and
/// balls are centred at offset; polygon vertices are shifted by offset.
/// Instances are always valid: the factories reject degenerate input.
class Domain {
 public:
  static Domain box(std::vector<double> edges, Point offset = {});
  static Domain disk(double radius, Point center = {});
  static Domain ball(int dimension, double radius, Point center = {});
  static Domain polygon(std::vector<Point2> vertices, Point offset = {});

  [[nodiscard]] DomainKind kind() const { return kind_; }
  [[nodiscard]] int dimension() const { return dimension_; }
  [[nodiscard]] const Point& offset() const { return offset_; }
  [[nodiscard]] const std::vector<double>& edges() const { return edges_; }
  [[nodiscard]] double radius() const { return radius_; }
  [[nodiscard]] const std::vector<Point2>& vertices() const { return vertices_; }

  [[nodiscard]] Domain translated(std::span<const double> shift) const;
  /// Image under z -> t z.
  [[nodiscard]] Domain dilated(double t) const;

  [[nodiscard]] bool contains(std::span<const double> p) const;
  /// Axis-aligned bounding box as (lower corner, upper corner).
  [[nodiscard]] std::pair<Point, Point> bounding_box() const;
  [[nodiscard]] double diameter() const;

  /// Polygons violate the smooth-boundary hypothesis of the bounds;
  /// reports carry this flag.
  [[nodiscard]] bool has_corners() const {
    return kind_ == DomainKind::box || kind_ == DomainKind::polygon;
  }

  bool operator==(const Domain&) const = default;

 private:
  Domain() = default;

  DomainKind kind_ = DomainKind::box;
  int dimension_ = 2;
  Point offset_;
  std::vector<double> edges_;
  double radius_ = 0.0;
  std::vector<Point2> vertices_;
};

struct GeometrySummary {
  double volume = 0.0;
  Point center_of_mass;
  double inertia = 0.0;  // about the centre of mass
  double omega_d = 0.0;
  double rearrangement_radius = 0.0;
  double beta = 0.0;
  double omega_cap = 0.0;  // |Omega| / (2 pi)^d

  [[nodiscard]] int dimension() const { return static_cast<int>(center_of_mass.size()); }
};

double volume(const Domain& domain);
Point center_of_mass(const Domain& domain);
/// Integral of |z - c|^2 over the domain, c the centre of mass.
double moment_of_inertia(const Domain& domain);
/// 2 (2 pi)^{-d} sqrt(|Omega| I(Omega)), the uniform gradient bound.
double beta(const Domain& domain);
/// Radius R of the ball with the same volume.
double rearrangement_radius(const Domain& domain);

GeometrySummary summarize(const Domain& domain);

/// Lower bound on the inertia attained by the centred ball of equal volume.
double inertia_ball_lower_bound(int d, double volume);
/// Lower bound on beta implied by inertia_ball_lower_bound.
double beta_lower_bound(int d, double volume);

}  // namespace fracbly
