#include "tdbem/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace tdbem {

Mesh::Mesh(std::vector<Segment> elements, std::vector<std::size_t> component_breaks)
    : elements_(std::move(elements)), component_breaks_(std::move(component_breaks)) {
    if (elements_.empty()) throw std::invalid_argument("mesh: no elements");
    if (component_breaks_.empty() || component_breaks_.front() != 0)
        throw std::invalid_argument("mesh: component_breaks must start at 0");
    for (std::size_t k = 0; k + 1 < component_breaks_.size(); ++k)
        if (component_breaks_[k + 1] <= component_breaks_[k])
            throw std::invalid_argument("mesh: component_breaks not increasing");
    if (component_breaks_.back() >= elements_.size())
        throw std::invalid_argument("mesh: component break past end");
    for (const Segment& e : elements_) {
        if (!(e.length() > 0.0)) throw std::invalid_argument("mesh: zero-length element");
        if (!std::isfinite(e.a.x) || !std::isfinite(e.a.y) || !std::isfinite(e.b.x) ||
            !std::isfinite(e.b.y))
            throw std::invalid_argument("mesh: non-finite coordinates");
    }
    // consecutive elements of a component share an endpoint
    for (std::size_t k = 0; k < num_components(); ++k) {
        auto [lo, hi] = component_range(k);
        for (std::size_t j = lo + 1; j < hi; ++j)
            if (dist(elements_[j - 1].b, elements_[j].a) > 1e-12 * std::max(1.0, norm(elements_[j].a)))
                throw std::invalid_argument("mesh: component not connected");
    }
}

std::size_t Mesh::component_of(std::size_t j) const {
    auto it = std::upper_bound(component_breaks_.begin(), component_breaks_.end(), j);
    return static_cast<std::size_t>(it - component_breaks_.begin()) - 1;
}

std::pair<std::size_t, std::size_t> Mesh::component_range(std::size_t k) const {
    std::size_t lo = component_breaks_[k];
    std::size_t hi = (k + 1 < component_breaks_.size()) ? component_breaks_[k + 1] : elements_.size();
    return {lo, hi};
}

std::pair<std::size_t, std::size_t> Mesh::element_vertices(std::size_t j) const {
    std::size_t k = component_of(j);
    // component k owns vertices [breaks[k] + k, breaks[k] + k + n_k].
    std::size_t base = component_breaks_[k] + k;
    std::size_t local = j - component_breaks_[k];
    return {base + local, base + local + 1};
}

double Mesh::min_h() const {
    double m = elements_[0].length();
    for (const Segment& e : elements_) m = std::min(m, e.length());
    return m;
}

double Mesh::max_h() const {
    double m = 0.0;
    for (const Segment& e : elements_) m = std::max(m, e.length());
    return m;
}

double Mesh::distance(Point2 p) const {
    double d = std::numeric_limits<double>::infinity();
    for (const Segment& e : elements_) {
        Point2 ab = e.b - e.a;
        double t = dot(p - e.a, ab) / dot(ab, ab);
        t = std::clamp(t, 0.0, 1.0);
        d = std::min(d, dist(p, e.at(t)));
    }
    return d;
}

void Mesh::write(std::ostream& os) const {
    for (std::size_t k = 0; k < num_components(); ++k) {
        auto [lo, hi] = component_range(k);
        os << elements_[lo].a.x << " " << elements_[lo].a.y << "\n";
        for (std::size_t j = lo; j < hi; ++j) os << elements_[j].b.x << " " << elements_[j].b.y << "\n";
    }
    for (std::size_t j = 0; j < size(); ++j) {
        auto [i0, i1] = element_vertices(j);
        os << i0 << " " << i1 << " " << component_of(j) << "\n";
    }
}

std::vector<std::vector<Point2>> GeometrySpec::corners() const {
    const double s32 = std::sqrt(3.0) / 2.0;
    switch (kind) {
        case GeometryKind::FlatScreen:
            return {{{-1.0, 0.0}, {1.0, 0.0}}};
        case GeometryKind::Wedge:
            return {{{0.0, 0.0}, {1.0, 0.0}}, {{0.0, 0.0}, {0.0, 1.0}}};
        case GeometryKind::Trapping:
            return {{{0.0, -1.0}, {0.0, 1.0}},
                    {{0.0, 1.0}, {s32, 0.5}},
                    {{0.0, -1.0}, {s32, -0.5}}};
        case GeometryKind::CustomPolyline: {
            if (polylines.empty()) throw std::invalid_argument("geometry: empty polyline list");
            for (const auto& poly : polylines) {
                if (poly.size() < 2) throw std::invalid_argument("geometry: polyline needs >= 2 points");
                for (std::size_t i = 0; i + 1 < poly.size(); ++i)
                    if (!(dist(poly[i], poly[i + 1]) > 0.0))
                        throw std::invalid_argument("geometry: degenerate polyline edge");
            }
            return polylines;
        }
    }
    throw std::invalid_argument("geometry: unknown kind");
}

GeometrySpec parse_geometry(const std::string& name) {
    if (name == "flat-screen" || name == "flat_screen" || name == "flat") return GeometrySpec::flat_screen();
    if (name == "wedge") return GeometrySpec::wedge();
    if (name == "trapping") return GeometrySpec::trapping();
    throw std::invalid_argument("geometry: unknown name '" + name + "'");
}

Mesh build_mesh(const GeometrySpec& spec, int n_per_component) {
    if (n_per_component < 1) throw std::invalid_argument("build_mesh: n_per_component must be >= 1");
    auto polys = spec.corners();
    std::vector<Segment> elements;
    std::vector<std::size_t> breaks;
    for (const auto& poly : polys) {
        breaks.push_back(elements.size());
        for (std::size_t e = 0; e + 1 < poly.size(); ++e) {
            Point2 a = poly[e], b = poly[e + 1];
            for (int j = 0; j < n_per_component; ++j) {
                double t0 = static_cast<double>(j) / n_per_component;
                double t1 = static_cast<double>(j + 1) / n_per_component;
                elements.push_back({a + t0 * (b - a), a + t1 * (b - a)});
            }
        }
    }
    return Mesh(std::move(elements), std::move(breaks));
}

Mesh refine(const Mesh& mesh, const std::set<std::size_t>& marked) {
    for (std::size_t j : marked)
        if (j >= mesh.size()) throw std::invalid_argument("refine: element index out of range");
    std::vector<Segment> elements;
    std::vector<std::size_t> breaks;
    for (std::size_t k = 0; k < mesh.num_components(); ++k) {
        breaks.push_back(elements.size());
        auto [lo, hi] = mesh.component_range(k);
        for (std::size_t j = lo; j < hi; ++j) {
            const Segment& e = mesh.element(j);
            if (marked.count(j)) {
                Point2 m = e.midpoint();
                elements.push_back({e.a, m});
                elements.push_back({m, e.b});
            } else {
                elements.push_back(e);
            }
        }
    }
    return Mesh(std::move(elements), std::move(breaks));
}

Mesh graded_mesh(const GeometrySpec& spec, int n_per_half, double beta) {
    if (beta < 1.0) throw std::invalid_argument("graded_mesh: beta must be >= 1");
    if (n_per_half < 1) throw std::invalid_argument("graded_mesh: n_per_half must be >= 1");
    auto polys = spec.corners();
    std::vector<Segment> elements;
    std::vector<std::size_t> breaks;
    for (const auto& poly : polys) {
        breaks.push_back(elements.size());
        // arclength parametrization of the component
        std::vector<double> cum{0.0};
        for (std::size_t e = 0; e + 1 < poly.size(); ++e) cum.push_back(cum.back() + dist(poly[e], poly[e + 1]));
        double total = cum.back();
        auto point_at = [&](double s) -> Point2 {
            for (std::size_t e = 0; e + 1 < poly.size(); ++e) {
                if (s <= cum[e + 1] || e + 2 == poly.size()) {
                    double t = (s - cum[e]) / (cum[e + 1] - cum[e]);
                    return poly[e] + t * (poly[e + 1] - poly[e]);
                }
            }
            return poly.back();
        };
        // nodes graded toward both endpoints, split at the midpoint
        std::vector<double> s_nodes;
        double half = 0.5 * total;
        for (int j = 0; j <= n_per_half; ++j)
            s_nodes.push_back(half * std::pow(static_cast<double>(j) / n_per_half, beta));
        for (int j = n_per_half - 1; j >= 0; --j)
            s_nodes.push_back(total - half * std::pow(static_cast<double>(j) / n_per_half, beta));
        for (std::size_t j = 0; j + 1 < s_nodes.size(); ++j)
            elements.push_back({point_at(s_nodes[j]), point_at(s_nodes[j + 1])});
    }
    return Mesh(std::move(elements), std::move(breaks));
}

}  // namespace tdbem
