#pragma once

// Planar domains, uniform lattice discretisation, legal pole sites
// (plaquette centers) and branch-cut paths.

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <tuple>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "minpart/errors.hpp"

namespace minpart {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct BoundingBox {
  double xmin, ymin, xmax, ymax;
  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
};

enum class Shape { UnitSquare, Rectangle, Disk, RegularPolygon, Polygon };

namespace detail {

inline long double orient(Point a, Point b, Point c) {
  return (static_cast<long double>(b.x) - a.x) * (static_cast<long double>(c.y) - a.y) -
         (static_cast<long double>(b.y) - a.y) * (static_cast<long double>(c.x) - a.x);
}

inline int sign_of(long double v) { return (v > 0) - (v < 0); }

inline bool on_segment(Point a, Point b, Point p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

// Closed-segment intersection test on orientation signs.
inline bool segments_intersect(Point a, Point b, Point c, Point d) {
  const int o1 = sign_of(orient(a, b, c));
  const int o2 = sign_of(orient(a, b, d));
  const int o3 = sign_of(orient(c, d, a));
  const int o4 = sign_of(orient(c, d, b));
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

// Segments cross at a single point interior to both.
inline bool segments_cross_properly(Point a, Point b, Point c, Point d) {
  const int o1 = sign_of(orient(a, b, c));
  const int o2 = sign_of(orient(a, b, d));
  const int o3 = sign_of(orient(c, d, a));
  const int o4 = sign_of(orient(c, d, b));
  return o1 * o2 < 0 && o3 * o4 < 0;
}

inline double segment_distance(Point a, Point b, Point p) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double s = len2 > 0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  return std::hypot(p.x - (a.x + s * dx), p.y - (a.y + s * dy));
}

}  // namespace detail

/// A bounded planar domain. Regular polygons are expanded to an explicit
/// counter-clockwise vertex list centered at the origin with a vertex on the
/// positive x axis.
class DomainSpec {
 public:
  static DomainSpec unit_square() {
    DomainSpec d;
    d.shape_ = Shape::UnitSquare;
    return d;
  }

  static DomainSpec rectangle(double width, double height) {
    if (!(width > 0 && height > 0)) throw Error(ErrorCode::InvalidArgument, "rectangle sides must be positive");
    DomainSpec d;
    d.shape_ = Shape::Rectangle;
    d.width_ = width;
    d.height_ = height;
    return d;
  }

  static DomainSpec disk(double radius, Point center = {0.0, 0.0}) {
    if (!(radius > 0)) throw Error(ErrorCode::InvalidArgument, "disk radius must be positive");
    DomainSpec d;
    d.shape_ = Shape::Disk;
    d.radius_ = radius;
    d.center_ = center;
    return d;
  }

  static DomainSpec regular_polygon(int sides, double area) {
    if (sides < 3 || !(area > 0)) throw Error(ErrorCode::BadPolygon, "regular polygon needs >= 3 sides and positive area");
    DomainSpec d;
    d.shape_ = Shape::RegularPolygon;
    d.sides_ = sides;
    d.area_ = area;
    const double circumradius = std::sqrt(2.0 * area / (sides * std::sin(2.0 * std::numbers::pi / sides)));
    for (int i = 0; i < sides; ++i) {
      const double a = 2.0 * std::numbers::pi * i / sides;
      d.vertices_.push_back({circumradius * std::cos(a), circumradius * std::sin(a)});
    }
    return d;
  }

  static DomainSpec polygon(std::vector<Point> vertices) {
    if (vertices.size() >= 2) {
      const auto& f = vertices.front();
      const auto& l = vertices.back();
      if (f.x == l.x && f.y == l.y) vertices.pop_back();
    }
    if (vertices.size() < 3) throw Error(ErrorCode::BadPolygon, "polygon needs at least 3 distinct vertices");
    const std::size_t n = vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
      const auto& a = vertices[i];
      const auto& b = vertices[(i + 1) % n];
      if (!std::isfinite(a.x) || !std::isfinite(a.y)) throw Error(ErrorCode::BadPolygon, "non-finite vertex");
      if (a.x == b.x && a.y == b.y) throw Error(ErrorCode::BadPolygon, "repeated consecutive vertex");
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
        const Point a = vertices[i], b = vertices[(i + 1) % n];
        const Point c = vertices[j], d = vertices[(j + 1) % n];
        if (adjacent) {
          // Adjacent edges may only share their common vertex; collinear
          // back-tracking is a self-overlap.
          const Point shared = (j == i + 1) ? b : a;
          const Point other_ab = (j == i + 1) ? a : b;
          const Point other_cd = (j == i + 1) ? d : c;
          if (detail::sign_of(detail::orient(other_ab, shared, other_cd)) == 0) {
            const double dot = (other_ab.x - shared.x) * (other_cd.x - shared.x) +
                               (other_ab.y - shared.y) * (other_cd.y - shared.y);
            if (dot > 0) throw Error(ErrorCode::BadPolygon, "polygon folds back on itself");
          }
          continue;
        }
        if (detail::segments_intersect(a, b, c, d)) throw Error(ErrorCode::BadPolygon, "polygon is self-intersecting");
      }
    }
    long double twice_area = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& a = vertices[i];
      const auto& b = vertices[(i + 1) % n];
      twice_area += static_cast<long double>(a.x) * b.y - static_cast<long double>(b.x) * a.y;
    }
    if (twice_area == 0) throw Error(ErrorCode::BadPolygon, "polygon has zero area");
    if (twice_area < 0) std::reverse(vertices.begin(), vertices.end());
    DomainSpec d;
    d.shape_ = Shape::Polygon;
    d.vertices_ = std::move(vertices);
    d.area_ = static_cast<double>(std::abs(twice_area) / 2);
    return d;
  }

  Shape shape() const { return shape_; }
  double radius() const { return radius_; }
  Point center() const { return center_; }
  int sides() const { return sides_; }
  const std::vector<Point>& vertices() const { return vertices_; }

  double area() const {
    switch (shape_) {
      case Shape::UnitSquare: return 1.0;
      case Shape::Rectangle: return width_ * height_;
      case Shape::Disk: return std::numbers::pi * radius_ * radius_;
      case Shape::RegularPolygon:
      case Shape::Polygon: return area_;
    }
    return 0.0;
  }

  BoundingBox bbox() const {
    switch (shape_) {
      case Shape::UnitSquare: return {0.0, 0.0, 1.0, 1.0};
      case Shape::Rectangle: return {0.0, 0.0, width_, height_};
      case Shape::Disk:
        return {center_.x - radius_, center_.y - radius_, center_.x + radius_, center_.y + radius_};
      case Shape::RegularPolygon:
      case Shape::Polygon: {
        BoundingBox b{vertices_[0].x, vertices_[0].y, vertices_[0].x, vertices_[0].y};
        for (const auto& v : vertices_) {
          b.xmin = std::min(b.xmin, v.x);
          b.ymin = std::min(b.ymin, v.y);
          b.xmax = std::max(b.xmax, v.x);
          b.ymax = std::max(b.ymax, v.y);
        }
        return b;
      }
    }
    return {};
  }

  double diameter() const {
    switch (shape_) {
      case Shape::UnitSquare: return std::sqrt(2.0);
      case Shape::Rectangle: return std::hypot(width_, height_);
      case Shape::Disk: return 2.0 * radius_;
      case Shape::RegularPolygon:
      case Shape::Polygon: {
        double d = 0.0;
        for (const auto& a : vertices_)
          for (const auto& b : vertices_) d = std::max(d, std::hypot(a.x - b.x, a.y - b.y));
        return d;
      }
    }
    return 0.0;
  }

  /// Closed point membership.
  bool contains(Point p) const {
    switch (shape_) {
      case Shape::UnitSquare:
      case Shape::Rectangle: {
        const auto b = bbox();
        return p.x >= b.xmin && p.x <= b.xmax && p.y >= b.ymin && p.y <= b.ymax;
      }
      case Shape::Disk: {
        const double dx = p.x - center_.x, dy = p.y - center_.y;
        return dx * dx + dy * dy <= radius_ * radius_;
      }
      case Shape::RegularPolygon:
      case Shape::Polygon: return polygon_winding(p) != 0 || on_polygon_boundary(p);
    }
    return false;
  }

  /// Distance from p to the complement of the domain (0 outside).
  double clearance(Point p) const {
    switch (shape_) {
      case Shape::UnitSquare:
      case Shape::Rectangle: {
        const auto b = bbox();
        return std::max(0.0, std::min({p.x - b.xmin, b.xmax - p.x, p.y - b.ymin, b.ymax - p.y}));
      }
      case Shape::Disk: return std::max(0.0, radius_ - std::hypot(p.x - center_.x, p.y - center_.y));
      case Shape::RegularPolygon:
      case Shape::Polygon: {
        if (polygon_winding(p) == 0) return 0.0;
        double d = std::numeric_limits<double>::infinity();
        const std::size_t n = vertices_.size();
        for (std::size_t i = 0; i < n; ++i)
          d = std::min(d, detail::segment_distance(vertices_[i], vertices_[(i + 1) % n], p));
        return d;
      }
    }
    return 0.0;
  }

  /// True iff the closed axis-aligned square [x0,x0+s]x[y0,y0+s] lies in the
  /// closed domain (up to a relative tolerance on the outline).
  bool contains_square(Point corner, double side) const {
    const double tol = 1e-12 * std::max(1.0, diameter());
    const std::array<Point, 4> c{{{corner.x, corner.y},
                                  {corner.x + side, corner.y},
                                  {corner.x + side, corner.y + side},
                                  {corner.x, corner.y + side}}};
    switch (shape_) {
      case Shape::UnitSquare:
      case Shape::Rectangle: {
        const auto b = bbox();
        return corner.x >= b.xmin - tol && corner.y >= b.ymin - tol && corner.x + side <= b.xmax + tol &&
               corner.y + side <= b.ymax + tol;
      }
      case Shape::Disk:
        return std::all_of(c.begin(), c.end(), [&](Point p) {
          return std::hypot(p.x - center_.x, p.y - center_.y) <= radius_ + tol;
        });
      case Shape::RegularPolygon:
      case Shape::Polygon: {
        if (!std::all_of(c.begin(), c.end(), [&](Point p) { return contains(p); })) return false;
        for (const auto& v : vertices_)
          if (v.x > corner.x && v.x < corner.x + side && v.y > corner.y && v.y < corner.y + side) return false;
        const std::size_t n = vertices_.size();
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t e = 0; e < 4; ++e)
            if (detail::segments_cross_properly(vertices_[i], vertices_[(i + 1) % n], c[e], c[(e + 1) % 4]))
              return false;
        return true;
      }
    }
    return false;
  }

  std::string id() const {
    std::ostringstream os;
    os.precision(17);
    switch (shape_) {
      case Shape::UnitSquare: os << "unit_square"; break;
      case Shape::Rectangle: os << "rectangle(" << width_ << "," << height_ << ")"; break;
      case Shape::Disk: os << "disk(" << radius_ << ";" << center_.x << "," << center_.y << ")"; break;
      case Shape::RegularPolygon: os << "regular_polygon(" << sides_ << "," << area_ << ")"; break;
      case Shape::Polygon: os << "polygon(" << vertices_.size() << ")"; break;
    }
    return os.str();
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    switch (shape_) {
      case Shape::UnitSquare: j["shape"] = "unit_square"; break;
      case Shape::Rectangle:
        j = {{"shape", "rectangle"}, {"width", width_}, {"height", height_}};
        break;
      case Shape::Disk:
        j = {{"shape", "disk"}, {"radius", radius_}, {"center", {center_.x, center_.y}}};
        break;
      case Shape::RegularPolygon:
        j = {{"shape", "regular_polygon"}, {"sides", sides_}, {"area", area_}};
        break;
      case Shape::Polygon: {
        j["shape"] = "polygon";
        j["vertices"] = nlohmann::json::array();
        for (const auto& v : vertices_) j["vertices"].push_back({v.x, v.y});
        break;
      }
    }
    return j;
  }

  static DomainSpec from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("shape")) throw Error(ErrorCode::ConfigError, "domain needs a \"shape\" field");
    const auto shape = j.at("shape").get<std::string>();
    if (shape == "unit_square") return unit_square();
    if (shape == "rectangle") return rectangle(j.at("width").get<double>(), j.at("height").get<double>());
    if (shape == "disk") {
      Point c{0.0, 0.0};
      if (j.contains("center")) c = {j["center"].at(0).get<double>(), j["center"].at(1).get<double>()};
      return disk(j.value("radius", 1.0), c);
    }
    if (shape == "regular_polygon") return regular_polygon(j.at("sides").get<int>(), j.value("area", 1.0));
    if (shape == "polygon") {
      std::vector<Point> v;
      for (const auto& p : j.at("vertices")) v.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
      return polygon(std::move(v));
    }
    throw Error(ErrorCode::ConfigError, "unknown shape '" + shape + "'");
  }

  /// Accepts inline JSON or the short names unit_square, disk[:r],
  /// rectangle:WxH, hexagon, regular_polygon:n[:area].
  static DomainSpec parse(const std::string& text) {
    if (!text.empty() && text.front() == '{') return from_json(nlohmann::json::parse(text));
    const auto colon = text.find(':');
    const std::string name = text.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
    try {
      if (name == "unit_square" || name == "square") return unit_square();
      if (name == "disk") return disk(arg.empty() ? 1.0 : std::stod(arg));
      if (name == "hexagon") return regular_polygon(6, arg.empty() ? 1.0 : std::stod(arg));
      if (name == "rectangle") {
        const auto x = arg.find('x');
        if (x == std::string::npos) throw Error(ErrorCode::ConfigError, "rectangle needs WxH");
        return rectangle(std::stod(arg.substr(0, x)), std::stod(arg.substr(x + 1)));
      }
      if (name == "regular_polygon") {
        const auto c2 = arg.find(':');
        const int n = std::stoi(arg.substr(0, c2));
        return regular_polygon(n, c2 == std::string::npos ? 1.0 : std::stod(arg.substr(c2 + 1)));
      }
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::ConfigError, "malformed domain '" + text + "'");
    }
    throw Error(ErrorCode::ConfigError, "unknown domain '" + text + "'");
  }

 private:
  DomainSpec() = default;

  int polygon_winding(Point p) const {
    int w = 0;
    const std::size_t n = vertices_.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point a = vertices_[i], b = vertices_[(i + 1) % n];
      if (a.y <= p.y) {
        if (b.y > p.y && detail::orient(a, b, p) > 0) ++w;
      } else if (b.y <= p.y && detail::orient(a, b, p) < 0) {
        --w;
      }
    }
    return w;
  }

  bool on_polygon_boundary(Point p) const {
    const std::size_t n = vertices_.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point a = vertices_[i], b = vertices_[(i + 1) % n];
      if (detail::orient(a, b, p) == 0 && detail::on_segment(a, b, p)) return true;
    }
    return false;
  }

  Shape shape_ = Shape::UnitSquare;
  double width_ = 1.0;
  double height_ = 1.0;
  double radius_ = 1.0;
  Point center_{0.0, 0.0};
  int sides_ = 0;
  double area_ = 1.0;
  std::vector<Point> vertices_;
};

struct LatticeIndex {
  int ix = 0;
  int iy = 0;
  friend bool operator==(const LatticeIndex&, const LatticeIndex&) = default;
  friend auto operator<=>(const LatticeIndex& a, const LatticeIndex& b) {
    return std::tie(a.iy, a.ix) <=> std::tie(b.iy, b.ix);
  }
};

enum Direction : int { Right = 0, Up = 1, Left = 2, Down = 3 };

/// Uniform lattice x = xmin + i h, y = ymin + j h restricted to the points
/// whose clearance from the complement is at least h/2. Point ids are
/// assigned row by row (y-major) and are contiguous.
class Grid {
 public:
  Grid(DomainSpec domain, double h) : domain_(std::move(domain)), h_(h) {
    if (!(h > 0) || !std::isfinite(h)) throw Error(ErrorCode::InvalidArgument, "grid spacing must be positive");
    if (!(h < 0.5 * domain_.diameter()))
      throw Error(ErrorCode::InvalidArgument, "grid spacing must be below half the domain diameter");
    const auto b = domain_.bbox();
    origin_ = {b.xmin, b.ymin};
    nx_ = static_cast<int>(std::floor(b.width() / h + 1e-9)) + 1;
    ny_ = static_cast<int>(std::floor(b.height() / h + 1e-9)) + 1;
    id_.assign(static_cast<std::size_t>(nx_) * ny_, -1);
    const double need = 0.5 * h * (1.0 - 1e-12);
    for (int iy = 0; iy < ny_; ++iy) {
      for (int ix = 0; ix < nx_; ++ix) {
        const Point p = lattice_point(ix, iy);
        if (domain_.clearance(p) >= need) {
          id_[slot(ix, iy)] = static_cast<int>(points_.size());
          points_.push_back({ix, iy});
        }
      }
    }
    if (points_.empty()) throw Error(ErrorCode::EmptyGrid, "no interior lattice points at h=" + std::to_string(h));
  }

  const DomainSpec& domain() const { return domain_; }
  double h() const { return h_; }
  Point origin() const { return origin_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  std::size_t size() const { return points_.size(); }

  LatticeIndex index(int id) const { return points_[static_cast<std::size_t>(id)]; }
  Point coord(int id) const {
    const auto& p = points_[static_cast<std::size_t>(id)];
    return lattice_point(p.ix, p.iy);
  }
  Point lattice_point(int ix, int iy) const { return {origin_.x + ix * h_, origin_.y + iy * h_}; }

  /// Point id at a lattice index, or -1 when the site is not interior.
  int id_at(int ix, int iy) const {
    if (ix < 0 || iy < 0 || ix >= nx_ || iy >= ny_) return -1;
    return id_[slot(ix, iy)];
  }

  int neighbor(int id, Direction d) const {
    static constexpr std::array<int, 4> dx{1, 0, -1, 0};
    static constexpr std::array<int, 4> dy{0, 1, 0, -1};
    const auto p = index(id);
    return id_at(p.ix + dx[d], p.iy + dy[d]);
  }

  std::array<int, 4> neighbors(int id) const {
    return {neighbor(id, Right), neighbor(id, Up), neighbor(id, Left), neighbor(id, Down)};
  }

  /// Plaquette (ix,iy) is the lattice cell with lower-left corner (ix,iy);
  /// it is interior when all four corners are interior points.
  bool plaquette_interior(LatticeIndex p) const {
    return id_at(p.ix, p.iy) >= 0 && id_at(p.ix + 1, p.iy) >= 0 && id_at(p.ix, p.iy + 1) >= 0 &&
           id_at(p.ix + 1, p.iy + 1) >= 0;
  }

  /// Corner ids counter-clockwise from the lower-left corner.
  std::array<int, 4> plaquette_corners(LatticeIndex p) const {
    return {id_at(p.ix, p.iy), id_at(p.ix + 1, p.iy), id_at(p.ix + 1, p.iy + 1), id_at(p.ix, p.iy + 1)};
  }

  Point plaquette_center(LatticeIndex p) const {
    return {origin_.x + (p.ix + 0.5) * h_, origin_.y + (p.iy + 0.5) * h_};
  }

  std::vector<LatticeIndex> interior_plaquettes() const {
    std::vector<LatticeIndex> out;
    for (int iy = 0; iy + 1 < ny_; ++iy)
      for (int ix = 0; ix + 1 < nx_; ++ix)
        if (plaquette_interior({ix, iy})) out.push_back({ix, iy});
    return out;
  }

  /// Plaquette containing p (lower-left convention on lattice lines).
  LatticeIndex plaquette_of(Point p) const {
    return {static_cast<int>(std::floor((p.x - origin_.x) / h_)), static_cast<int>(std::floor((p.y - origin_.y) / h_))};
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["domain"] = domain_.to_json();
    j["h"] = h_;
    j["origin"] = {origin_.x, origin_.y};
    j["nx"] = nx_;
    j["ny"] = ny_;
    j["points"] = nlohmann::json::array();
    for (std::size_t i = 0; i < points_.size(); ++i) {
      const auto c = coord(static_cast<int>(i));
      j["points"].push_back({i, points_[i].ix, points_[i].iy, c.x, c.y});
    }
    return j;
  }

 private:
  std::size_t slot(int ix, int iy) const { return static_cast<std::size_t>(iy) * nx_ + ix; }

  DomainSpec domain_;
  double h_;
  Point origin_{};
  int nx_ = 0;
  int ny_ = 0;
  std::vector<int> id_;
  std::vector<LatticeIndex> points_;
};

inline Grid build_grid(const DomainSpec& spec, double h) { return Grid(spec, h); }

/// Poles live on interior plaquette centers; stored by plaquette index so the
/// "no pole on a grid point" invariant holds by construction.
struct PoleConfig {
  std::vector<LatticeIndex> plaquettes;

  std::size_t size() const { return plaquettes.size(); }
  bool empty() const { return plaquettes.empty(); }

  std::vector<Point> coordinates(const Grid& grid) const {
    std::vector<Point> out;
    out.reserve(plaquettes.size());
    for (const auto& p : plaquettes) out.push_back(grid.plaquette_center(p));
    return out;
  }
};

inline void validate_poles(const Grid& grid, const PoleConfig& poles) {
  for (std::size_t i = 0; i < poles.size(); ++i) {
    if (!grid.plaquette_interior(poles.plaquettes[i]))
      throw Error(ErrorCode::PoleOutsideDomain, "pole " + std::to_string(i) + " is not on an interior plaquette");
    for (std::size_t j = 0; j < i; ++j)
      if (poles.plaquettes[i] == poles.plaquettes[j])
        throw Error(ErrorCode::InvalidArgument, "poles " + std::to_string(j) + " and " + std::to_string(i) + " coincide");
  }
}

/// Snap continuous positions to the plaquettes containing them.
inline PoleConfig snap_poles(const Grid& grid, const std::vector<Point>& positions) {
  PoleConfig cfg;
  for (const auto& p : positions) cfg.plaquettes.push_back(grid.plaquette_of(p));
  validate_poles(grid, cfg);
  return cfg;
}

/// An undirected lattice edge between two point ids, stored with a < b.
struct Edge {
  int a = -1;
  int b = -1;
  Edge() = default;
  Edge(int u, int v) : a(std::min(u, v)), b(std::max(u, v)) {}
  friend bool operator==(const Edge&, const Edge&) = default;
};

struct CutPath {
  LatticeIndex pole;
  Direction direction = Down;
  std::vector<Edge> edges;
};

struct CutSet {
  std::vector<CutPath> paths;
};

/// Straight branch cut from the pole's plaquette to the lattice border. Only
/// edges present in the grid are recorded; the parity of every interior
/// plaquette other than the pole's is even by construction.
inline CutPath straight_cut(const Grid& grid, LatticeIndex pole, Direction dir) {
  CutPath path{pole, dir, {}};
  auto add = [&](int ax, int ay, int bx, int by) {
    const int a = grid.id_at(ax, ay), b = grid.id_at(bx, by);
    if (a >= 0 && b >= 0) path.edges.emplace_back(a, b);
  };
  switch (dir) {
    case Down:
      for (int j = pole.iy; j >= 0; --j) add(pole.ix, j, pole.ix + 1, j);
      break;
    case Up:
      for (int j = pole.iy + 1; j < grid.ny(); ++j) add(pole.ix, j, pole.ix + 1, j);
      break;
    case Left:
      for (int i = pole.ix; i >= 0; --i) add(i, pole.iy, i, pole.iy + 1);
      break;
    case Right:
      for (int i = pole.ix + 1; i < grid.nx(); ++i) add(i, pole.iy, i, pole.iy + 1);
      break;
  }
  return path;
}

inline CutSet default_cuts(const Grid& grid, const PoleConfig& poles, Direction dir = Down) {
  for (const auto& p : poles.plaquettes)
    if (!grid.plaquette_interior(p)) throw Error(ErrorCode::PoleOutsideDomain, "pole is not on an interior plaquette");
  CutSet cuts;
  for (const auto& p : poles.plaquettes) cuts.paths.push_back(straight_cut(grid, p, dir));
  return cuts;
}

}  // namespace minpart
