#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tdbem/experiments.hpp"

using namespace tdbem;

namespace {

std::string write_temp(const std::string& body) {
    std::string path =
        (std::filesystem::temp_directory_path() / "experiments_test_config.toml").string();
    std::ofstream out(path);
    out << body;
    return path;
}

ExperimentConfig tiny_time_config() {
    ExperimentConfig cfg;
    cfg.initial_n = 4;
    cfg.time_mesh_iterations = 2;
    cfg.tau = 0.5;
    cfg.taus = "0.4,0.2";
    cfg.benchmark_tau = 0.1;
    return cfg;
}

}  // namespace

TEST_CASE("defaults reproduce the reference parameter block") {
    ExperimentConfig cfg;
    CHECK(cfg.geometry == "flat-screen");
    CHECK(cfg.omega == 2.0);
    CHECK(cfg.L == 2.0);
    CHECK(cfg.beta == 5.0);
    CHECK(cfg.t_lag == 4.0);
    CHECK(cfg.T == 10.0);
    CHECK(cfg.tau == 0.1);
    CHECK(cfg.method == "radau");
    CHECK(cfg.order == 2);
    CHECK(cfg.strategy == "adaptive");
    IncidentWave w = cfg.wave();
    CHECK(w.d.x == doctest::Approx(-std::sqrt(3.0) / 2.0).epsilon(1e-15));
    CHECK(w.d.y == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(std::hypot(w.d.x, w.d.y) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("apply_config_entry handles every key and names bad ones") {
    ExperimentConfig cfg;
    apply_config_entry(cfg, "geometry", "wedge");
    apply_config_entry(cfg, "omega", "3.5");
    apply_config_entry(cfg, "strategy", "graded2");
    apply_config_entry(cfg, "order", "3");
    apply_config_entry(cfg, "dorfler", "true");
    apply_config_entry(cfg, "taus", "0.2,0.1");
    apply_config_entry(cfg, "out_dir", "/tmp/somewhere");
    CHECK(cfg.geometry == "wedge");
    CHECK(cfg.omega == 3.5);
    CHECK(cfg.order == 3);
    CHECK(cfg.dorfler);

    CHECK_THROWS_WITH_AS(apply_config_entry(cfg, "bogus_key", "1"),
                         doctest::Contains("bogus_key"), std::runtime_error);
    CHECK_THROWS_WITH_AS(apply_config_entry(cfg, "omega", "fast"), doctest::Contains("omega"),
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(apply_config_entry(cfg, "levels", "2.5"), doctest::Contains("levels"),
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(apply_config_entry(cfg, "dorfler", "yes"), doctest::Contains("dorfler"),
                         std::runtime_error);
}

TEST_CASE("load_config parses comments and quoted strings") {
    std::string path = write_temp(
        "# full line comment\n"
        "geometry = \"trapping\"   # trailing comment\n"
        "\n"
        "omega = 4.0\n"
        "taus = \"0.4, 0.2 # not a comment\"\n"
        "levels = 3\n");
    ExperimentConfig cfg = load_config(path);
    CHECK(cfg.geometry == "trapping");
    CHECK(cfg.omega == 4.0);
    CHECK(cfg.taus == "0.4, 0.2 # not a comment");
    CHECK(cfg.levels == 3);
    std::remove(path.c_str());

    CHECK_THROWS(load_config("/nonexistent/config.toml"));
    std::string bad = write_temp("omega 4.0\n");
    CHECK_THROWS_WITH_AS(load_config(bad), doctest::Contains("'='"), std::runtime_error);
    std::remove(bad.c_str());
}

TEST_CASE("tau_list and scheme construction") {
    ExperimentConfig cfg;
    cfg.taus = " 0.4 , 0.2 ,0.1 ";
    std::vector<double> taus = cfg.tau_list();
    REQUIRE(taus.size() == 3);
    CHECK(taus[1] == 0.2);

    CQScheme sch = cfg.scheme_for(0.1);
    CHECK(sch.N == 100);
    CHECK(sch.stages() == 2);
    CHECK_THROWS_WITH_AS(cfg.scheme_for(0.3), doctest::Contains("tau"), std::runtime_error);

    cfg.method = "leapfrog";
    CHECK_THROWS_WITH_AS(cfg.scheme_for(0.1), doctest::Contains("method"), std::runtime_error);

    cfg.taus = " , ";
    CHECK_THROWS(cfg.tau_list());

    ExperimentConfig dir;
    dir.direction_x = 0.0;
    dir.direction_y = 0.0;
    CHECK_THROWS(dir.wave());
}

TEST_CASE("convergence_rate recovers exact geometric orders") {
    for (double q : {0.5, 1.0, 1.5, 2.8}) {
        double c = 0.731;
        for (int k = 1; k < 4; ++k) {
            double e_prev = c * std::pow(2.0, -(k - 1) * q);
            double e_cur = c * std::pow(2.0, -k * q);
            CHECK(convergence_rate(e_prev, e_cur) == doctest::Approx(q).epsilon(1e-12));
        }
    }
}

TEST_CASE("observation points are the four corners") {
    std::vector<Point2> pts = observation_points();
    REQUIRE(pts.size() == 4);
    CHECK(pts[0].x == 2.0);
    CHECK(pts[0].y == 2.0);
    CHECK(pts[2].x == -2.0);
    CHECK(pts[2].y == -2.0);
}

TEST_CASE("CSV writers emit the pinned schemas") {
    std::ostringstream sp;
    write_spatial_csv(sp, {{0, 8, 0.5, 0.25, 0.1, std::nullopt}, {1, 16, 0.25, 0.1, 0.05, 1.0}});
    std::istringstream spi(sp.str());
    std::string line;
    REQUIRE(std::getline(spi, line));
    CHECK(line == "level,dofs,energy_error,point_error,estimate,rate_energy");
    REQUIRE(std::getline(spi, line));
    CHECK(line.substr(0, 4) == "0,8,");
    CHECK(line.back() == ',');  // blank rate on the first level

    std::ostringstream tm;
    write_time_csv(tm, {{0.4, 0.1, 0.01, std::nullopt, std::nullopt}});
    std::istringstream tmi(tm.str());
    REQUIRE(std::getline(tmi, line));
    CHECK(line == "tau,density_error,point_error,rate_density,rate_point");

    std::ostringstream ef;
    write_efficiency_csv(ef, {{12, 0.2, 0.3, 0.1, 2.0}});
    std::istringstream efi(ef.str());
    REQUIRE(std::getline(efi, line));
    CHECK(line == "dofs,tau,error,estimate,ratio");
}

TEST_CASE("small spatial study produces sensible rows") {
    ExperimentConfig cfg;
    cfg.strategy = "uniform";
    cfg.levels = 2;
    cfg.initial_n = 4;
    cfg.tau = 0.5;
    std::vector<SpatialRow> rows = run_spatial_study(cfg);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].dofs == 4);
    CHECK(rows[1].dofs == 8);
    CHECK(!rows[0].rate_energy.has_value());
    CHECK(rows[1].rate_energy.has_value());
    for (const SpatialRow& r : rows) {
        CHECK(r.energy_error > 0.0);
        CHECK(r.point_error > 0.0);
        CHECK(r.estimate > 0.0);
    }
    CHECK(rows[1].energy_error < rows[0].energy_error);
}

TEST_CASE("small time study is deterministic byte-for-byte") {
    ExperimentConfig cfg = tiny_time_config();
    std::ostringstream a, b;
    write_time_csv(a, run_time_study(cfg));
    write_time_csv(b, run_time_study(cfg));
    CHECK(a.str() == b.str());
    CHECK(a.str().find("tau,density_error") == 0);

    std::istringstream is(a.str());
    std::string line;
    std::getline(is, line);
    int rows = 0;
    while (std::getline(is, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 2);
}

TEST_CASE("efficiency study conventions") {
    ExperimentConfig cfg = tiny_time_config();
    cfg.levels = 1;
    cfg.adaptive_per_level = 1;
    cfg.taus = "0.5";
    cfg.benchmark_tau = 0.25;

    SUBCASE("rejects bad constants") {
        CHECK_THROWS(run_efficiency_study(cfg, -1.0, 2.0));
        CHECK_THROWS(run_efficiency_study(cfg, 5.0, 0.0));
    }
    SUBCASE("zero data gives zero ratios") {
        ExperimentConfig quiet = cfg;
        quiet.t_lag = 1e6;
        std::vector<EfficiencyRow> rows = run_efficiency_study(quiet, 5.0, 2.0);
        REQUIRE(!rows.empty());
        for (const EfficiencyRow& r : rows) {
            CHECK(r.error == 0.0);
            CHECK(r.estimate == 0.0);
            CHECK(r.ratio == 0.0);
        }
    }
    SUBCASE("live data gives positive bounded ratios") {
        std::vector<EfficiencyRow> rows = run_efficiency_study(cfg, 5.0, 2.0);
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].error > 0.0);
        CHECK(rows[0].estimate > 0.0);
        CHECK(rows[0].ratio > 0.0);
        CHECK(rows[0].ratio < rows[0].error / (5.0 * std::pow(0.5, 2.0)) + 1.0);
    }
}

TEST_CASE("emit_snapshots") {
    ExperimentConfig cfg = tiny_time_config();
    cfg.time_mesh_iterations = 1;
    cfg.snapshot_grid = 9;
    cfg.out_dir = (std::filesystem::temp_directory_path() / "experiments_test_snaps").string();
    std::filesystem::remove_all(cfg.out_dir);

    SUBCASE("empty time list writes nothing") {
        emit_snapshots(cfg, {});
        CHECK(!std::filesystem::exists(cfg.out_dir + "/density_t2.csv"));
    }
    SUBCASE("out-of-range times are rejected") {
        CHECK_THROWS(emit_snapshots(cfg, {11.0}));
        CHECK_THROWS(emit_snapshots(cfg, {-1.0}));
    }
    SUBCASE("files carry the documented headers") {
        emit_snapshots(cfg, {2.0});
        std::ifstream dens(cfg.out_dir + "/density_t2.csv");
        REQUIRE(dens.good());
        std::string line;
        REQUIRE(std::getline(dens, line));
        CHECK(line == "s_arclength,phi");
        int rows = 0;
        while (std::getline(dens, line))
            if (!line.empty()) ++rows;
        CHECK(rows >= 4);  // one per element of the snapshot mesh

        std::ifstream fld(cfg.out_dir + "/field_t2.csv");
        REQUIRE(fld.good());
        REQUIRE(std::getline(fld, line));
        CHECK(line == "x,y,u");
        rows = 0;
        while (std::getline(fld, line))
            if (!line.empty()) ++rows;
        CHECK(rows > 9 * 9 / 2);  // most of the 9x9 grid is off the screen
        CHECK(rows < 9 * 9);      // ... but the on-screen points are excluded
    }
    std::filesystem::remove_all(cfg.out_dir);
}
