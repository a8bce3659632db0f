#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "tdbem/adaptive.hpp"

using namespace tdbem;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> vals) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(vals.size()));
    Eigen::Index i = 0;
    for (double x : vals) v(i++) = x;
    return v;
}

ScatteringProblem flat_problem(int N, double T = 10.0) {
    ScatteringProblem p;
    p.geometry = GeometrySpec::flat_screen();
    p.T = T;
    p.scheme = make_radau_scheme(2, T / N, N);
    return p;
}

}  // namespace

TEST_CASE("maximum-criterion marking") {
    CHECK(mark(vec({1.0, 0.5, 0.2}), 0.5) == std::set<std::size_t>{0});
    CHECK(mark(vec({0.7, 0.7, 0.7}), 0.9) == std::set<std::size_t>{0, 1, 2});
    CHECK(mark(vec({0.0, 0.0}), 0.5).empty());
    CHECK_THROWS(mark(vec({1.0}), 0.0));
    CHECK_THROWS(mark(vec({1.0}), 1.0));
}

TEST_CASE("marking is scale invariant and monotone in theta") {
    Eigen::VectorXd ind = vec({0.9, 0.15, 0.55, 0.3, 0.72, 0.05});
    auto m = mark(ind, 0.5);
    CHECK(m == mark(7.25 * ind, 0.5));
    auto loose = mark(ind, 0.2);
    auto tight = mark(ind, 0.8);
    for (std::size_t j : tight) CHECK(m.count(j) == 1);
    for (std::size_t j : m) CHECK(loose.count(j) == 1);
    // the argmax element is always marked
    CHECK(mark(ind, 0.99).count(0) == 1);
}

TEST_CASE("Dorfler bulk chasing") {
    Eigen::VectorXd ind = vec({3.0, 4.0, 0.1});
    // theta^2 * 25.01 with theta = 0.7 -> 12.25; {1} gives 16 >= 12.25
    CHECK(mark_dorfler(ind, 0.7) == std::set<std::size_t>{1});
    // theta = 0.9 -> 20.26; needs {0, 1} (16 + 9 = 25)
    CHECK(mark_dorfler(ind, 0.9) == std::set<std::size_t>{0, 1});
    CHECK(mark_dorfler(vec({0.0, 0.0}), 0.5).empty());
}

TEST_CASE("adaptive_loop stopping conditions") {
    ScatteringProblem p = flat_problem(20);
    Mesh initial = build_mesh(p.geometry, 4);

    SUBCASE("huge target stops after one iteration") {
        AdaptiveConfig cfg;
        cfg.target_estimate = 1e30;
        AdaptiveTrace trace = adaptive_loop(p, initial, cfg);
        REQUIRE(trace.iterations.size() == 1);
        CHECK(trace.iterations[0].marked == 0);
        CHECK(trace.iterations[0].dofs == initial.size());
    }
    SUBCASE("quiet wave terminates with empty marking") {
        ScatteringProblem quiet = p;
        quiet.wave.t_lag = 1e6;
        AdaptiveTrace trace = adaptive_loop(quiet, initial, AdaptiveConfig{});
        REQUIRE(trace.iterations.size() == 1);
        CHECK(trace.iterations[0].estimate == 0.0);
        CHECK(trace.iterations[0].marked == 0);
    }
    SUBCASE("max_iterations bounds the trace and dofs increase") {
        AdaptiveConfig cfg;
        cfg.max_iterations = 4;
        AdaptiveTrace trace = adaptive_loop(p, initial, cfg);
        REQUIRE(trace.iterations.size() == 4);
        for (std::size_t i = 0; i + 1 < trace.iterations.size(); ++i) {
            CHECK(trace.iterations[i].dofs < trace.iterations[i + 1].dofs);
            CHECK(trace.iterations[i].marked > 0);
            CHECK(trace.iterations[i].marked ==
                  trace.iterations[i + 1].dofs - trace.iterations[i].dofs);
        }
        CHECK(trace.iterations.back().marked == 0);
        CHECK(trace.final_mesh().size() == trace.iterations.back().dofs);
        for (const AdaptiveIteration& it : trace.iterations) {
            CHECK(it.estimate > 0.0);
            CHECK(it.energy > 0.0);
        }
    }
}

TEST_CASE("adaptive refinement concentrates at the screen tips") {
    ScatteringProblem p = flat_problem(30);
    AdaptiveConfig cfg;
    cfg.max_iterations = 8;
    AdaptiveTrace trace = adaptive_loop(p, build_mesh(p.geometry, 8), cfg);
    const Mesh& final = trace.final_mesh();
    CHECK(final.size() > 8);

    // the two smallest elements sit next to the tips (+-1, 0)
    std::vector<std::size_t> order(final.size());
    for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return final.h(a) < final.h(b); });
    for (int k = 0; k < 2; ++k) {
        const Segment& e = final.element(order[k]);
        double tip = std::min(std::min(std::abs(e.a.x - 1.0), std::abs(e.a.x + 1.0)),
                              std::min(std::abs(e.b.x - 1.0), std::abs(e.b.x + 1.0)));
        CHECK(tip <= 1.5 * final.h(order[k]));
    }
    CHECK(final.min_h() < 0.2 * final.max_h());
}

TEST_CASE("trace and indicator CSV serialization") {
    ScatteringProblem p = flat_problem(15);
    AdaptiveConfig cfg;
    cfg.max_iterations = 2;
    AdaptiveTrace trace = adaptive_loop(p, build_mesh(p.geometry, 4), cfg);

    std::ostringstream os;
    write_trace_csv(os, trace);
    std::istringstream is(os.str());
    std::string line;
    REQUIRE(std::getline(is, line));
    CHECK(line == "iteration,dofs,estimate,marked");
    int rows = 0;
    while (std::getline(is, line))
        if (!line.empty()) ++rows;
    CHECK(rows == static_cast<int>(trace.iterations.size()));

    std::ostringstream oi;
    write_indicators_csv(oi, vec({0.25, 1.5}));
    std::istringstream ii(oi.str());
    REQUIRE(std::getline(ii, line));
    CHECK(line == "element_index,eta");
    REQUIRE(std::getline(ii, line));
    CHECK(line.substr(0, 2) == "0,");
}
