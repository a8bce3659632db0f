#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "tdbem/geometry.hpp"

using namespace tdbem;

namespace {

double total_length(const Mesh& m) {
    double s = 0.0;
    for (std::size_t j = 0; j < m.size(); ++j) s += m.h(j);
    return s;
}

std::vector<double> sorted_nodes_x(const Mesh& m) {
    std::vector<double> xs;
    for (const Segment& e : m.elements()) {
        xs.push_back(e.a.x);
        xs.push_back(e.b.x);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end(), [](double a, double b) { return std::abs(a - b) < 1e-14; }),
             xs.end());
    return xs;
}

}  // namespace

TEST_CASE("build_mesh splits the flat screen uniformly") {
    Mesh m = build_mesh(GeometrySpec::flat_screen(), 2);
    REQUIRE(m.size() == 2);
    CHECK(m.element(0).a.x == doctest::Approx(-1.0));
    CHECK(m.element(0).b.x == doctest::Approx(0.0));
    CHECK(m.element(1).b.x == doctest::Approx(1.0));
    CHECK(m.element(0).a.y == 0.0);
    CHECK(m.num_components() == 1);
}

TEST_CASE("build_mesh wedge has two components meeting at the corner") {
    Mesh m = build_mesh(GeometrySpec::wedge(), 1);
    REQUIRE(m.size() == 2);
    REQUIRE(m.num_components() == 2);
    // (0,0)-(1,0) and (0,0)-(0,1) up to orientation
    auto has = [&](Point2 a, Point2 b) {
        for (const Segment& e : m.elements())
            if ((dist(e.a, a) < 1e-14 && dist(e.b, b) < 1e-14) ||
                (dist(e.a, b) < 1e-14 && dist(e.b, a) < 1e-14))
                return true;
        return false;
    };
    CHECK(has({0, 0}, {1, 0}));
    CHECK(has({0, 0}, {0, 1}));
}

TEST_CASE("build_mesh trapping geometry endpoints") {
    Mesh m = build_mesh(GeometrySpec::trapping(), 1);
    REQUIRE(m.num_components() == 3);
    REQUIRE(m.size() == 3);
    const double r3 = std::sqrt(3.0) / 2.0;
    CHECK(dist(m.element(0).a, {0, -1}) + dist(m.element(0).b, {0, 1}) < 1e-14);
    CHECK(dist(m.element(1).a, {0, 1}) + dist(m.element(1).b, {r3, 0.5}) < 1e-14);
    CHECK(dist(m.element(2).a, {0, -1}) + dist(m.element(2).b, {r3, -0.5}) < 1e-14);
}

TEST_CASE("build_mesh rejects degenerate input") {
    CHECK_THROWS(build_mesh(GeometrySpec::flat_screen(), 0));
    CHECK_THROWS(build_mesh(GeometrySpec::custom({{{0, 0}}}), 2));
    CHECK_THROWS(build_mesh(GeometrySpec::custom({{{0, 0}, {0, 0}}}), 2));
}

TEST_CASE("refine bisects marked elements and preserves the point set") {
    Mesh m = build_mesh(GeometrySpec::flat_screen(), 2);

    SUBCASE("single mark") {
        Mesh r = refine(m, {0});
        REQUIRE(r.size() == 3);
        CHECK(r.h(0) == doctest::Approx(0.5));
        CHECK(r.h(1) == doctest::Approx(0.5));
        CHECK(r.h(2) == doctest::Approx(1.0));
        CHECK(r.element(0).b.x == doctest::Approx(-0.5));
        CHECK(total_length(r) == doctest::Approx(total_length(m)));
    }
    SUBCASE("empty mark is the identity") {
        Mesh r = refine(m, {});
        REQUIRE(r.size() == m.size());
        for (std::size_t j = 0; j < m.size(); ++j)
            CHECK(dist(r.element(j).a, m.element(j).a) + dist(r.element(j).b, m.element(j).b) == 0.0);
    }
    SUBCASE("count grows by marked size") {
        Mesh r = refine(m, {0, 1});
        CHECK(r.size() == m.size() + 2);
        CHECK(total_length(r) == doctest::Approx(total_length(m)));
    }
}

TEST_CASE("graded_mesh node placement") {
    SUBCASE("beta = 2 with two per half") {
        Mesh m = graded_mesh(GeometrySpec::flat_screen(), 2, 2.0);
        auto xs = sorted_nodes_x(m);
        REQUIRE(xs.size() == 5);
        CHECK(xs[0] == doctest::Approx(-1.0));
        CHECK(xs[1] == doctest::Approx(-0.75));
        CHECK(xs[2] == doctest::Approx(0.0));
        CHECK(xs[3] == doctest::Approx(0.75));
        CHECK(xs[4] == doctest::Approx(1.0));
    }
    SUBCASE("beta = 1 equals the uniform mesh") {
        Mesh g = graded_mesh(GeometrySpec::flat_screen(), 4, 1.0);
        Mesh u = build_mesh(GeometrySpec::flat_screen(), 8);
        REQUIRE(g.size() == u.size());
        for (std::size_t j = 0; j < g.size(); ++j) {
            CHECK(dist(g.element(j).a, u.element(j).a) < 1e-14);
            CHECK(dist(g.element(j).b, u.element(j).b) < 1e-14);
        }
    }
    SUBCASE("minimum element size formula") {
        for (double beta : {2.0, 3.0}) {
            int n = 8;
            Mesh m = graded_mesh(GeometrySpec::flat_screen(), n, beta);
            CHECK(m.min_h() == doctest::Approx(std::pow(1.0 / n, beta)).epsilon(1e-14));
        }
    }
    SUBCASE("rejects beta < 1") { CHECK_THROWS(graded_mesh(GeometrySpec::flat_screen(), 2, 0.5)); }
}

TEST_CASE("mesh connectivity bookkeeping") {
    Mesh m = build_mesh(GeometrySpec::wedge(), 3);
    REQUIRE(m.size() == 6);
    CHECK(m.component_of(0) == 0);
    CHECK(m.component_of(5) == 1);
    auto [f0, l0] = m.component_range(0);
    CHECK(f0 == 0);
    CHECK(l0 == 3);
    CHECK(m.num_vertices() == 6 + 2);
    auto [va, vb] = m.element_vertices(0);
    CHECK(vb == va + 1);
    auto [vc, vd] = m.element_vertices(3);
    CHECK(vc == 4);  // second component starts a fresh vertex chain
    CHECK(vd == 5);
}

TEST_CASE("mesh serialization lists vertices then elements") {
    Mesh m = build_mesh(GeometrySpec::flat_screen(), 2);
    std::ostringstream os;
    m.write(os);
    std::istringstream is(os.str());
    double x, y;
    REQUIRE(static_cast<bool>(is >> x >> y));
    CHECK(x == doctest::Approx(-1.0));
    int count = 1;
    std::string rest;
    std::string line;
    std::getline(is, line);
    while (std::getline(is, line))
        if (!line.empty()) ++count;
    CHECK(count == 3 + 2);  // three vertices, two elements
}

TEST_CASE("distance to the mesh") {
    Mesh m = build_mesh(GeometrySpec::flat_screen(), 4);
    CHECK(m.distance({0.0, 0.5}) == doctest::Approx(0.5));
    CHECK(m.distance({2.0, 0.0}) == doctest::Approx(1.0));
    CHECK(m.distance({0.25, 0.0}) == doctest::Approx(0.0));
}
