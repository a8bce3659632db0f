#ifndef TDBEM_GEOMETRY_HPP
#define TDBEM_GEOMETRY_HPP

#include <cmath>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

namespace tdbem {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double dist(Point2 a, Point2 b) { return norm(a - b); }

/// Oriented mesh element with endpoints a, b.
struct Segment {
    Point2 a;
    Point2 b;

    double length() const { return dist(a, b); }
    Point2 midpoint() const { return 0.5 * (a + b); }
    /// Point at arclength fraction t in [0,1].
    Point2 at(double t) const { return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)}; }
    /// Unit tangent a -> b.
    Point2 tangent() const {
        double l = length();
        return {(b.x - a.x) / l, (b.y - a.y) / l};
    }
};

/// 1D polygonal boundary mesh embedded in the plane. Possibly several
/// disjoint screen pieces; component_breaks[k] is the index of the first
/// element of component k. Immutable after construction.
class Mesh {
public:
    Mesh(std::vector<Segment> elements, std::vector<std::size_t> component_breaks);

    std::size_t size() const { return elements_.size(); }
    const Segment& element(std::size_t j) const { return elements_[j]; }
    const std::vector<Segment>& elements() const { return elements_; }
    double h(std::size_t j) const { return elements_[j].length(); }

    std::size_t num_components() const { return component_breaks_.size(); }
    const std::vector<std::size_t>& component_breaks() const { return component_breaks_; }
    /// Component index of element j.
    std::size_t component_of(std::size_t j) const;
    /// [first, last) element range of component k.
    std::pair<std::size_t, std::size_t> component_range(std::size_t k) const;

    /// Number of P1 vertices (per component: element count + 1).
    std::size_t num_vertices() const { return size() + num_components(); }
    /// Global vertex indices (left, right) of element j.
    std::pair<std::size_t, std::size_t> element_vertices(std::size_t j) const;

    double min_h() const;
    double max_h() const;
    /// Distance from a point to the closest element.
    double distance(Point2 p) const;

    /// Plain-text node/element listing: one vertex per line "x y", then one
    /// element per line "i j k_component".
    void write(std::ostream& os) const;

private:
    std::vector<Segment> elements_;
    std::vector<std::size_t> component_breaks_;
};

enum class GeometryKind { FlatScreen, Wedge, Trapping, CustomPolyline };

struct GeometrySpec {
    GeometryKind kind = GeometryKind::FlatScreen;
    /// Only for CustomPolyline: one polyline (>= 2 points) per component.
    std::vector<std::vector<Point2>> polylines;

    static GeometrySpec flat_screen() { return {GeometryKind::FlatScreen, {}}; }
    static GeometrySpec wedge() { return {GeometryKind::Wedge, {}}; }
    static GeometrySpec trapping() { return {GeometryKind::Trapping, {}}; }
    static GeometrySpec custom(std::vector<std::vector<Point2>> polys) {
        return {GeometryKind::CustomPolyline, std::move(polys)};
    }

    /// Corner points of each component, in order.
    std::vector<std::vector<Point2>> corners() const;
};

GeometrySpec parse_geometry(const std::string& name);

/// Uniform partition with n_per_component elements per polyline edge chain.
Mesh build_mesh(const GeometrySpec& spec, int n_per_component);

/// Midpoint bisection of the marked elements.
Mesh refine(const Mesh& mesh, const std::set<std::size_t>& marked);

/// Algebraically graded mesh: each component is split at its arclength
/// midpoint and nodes cluster with exponent beta toward both endpoints.
Mesh graded_mesh(const GeometrySpec& spec, int n_per_half, double beta);

}  // namespace tdbem

#endif
