#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tdbem.h"

namespace {

struct ConfigDeleter {
    void operator()(tdbem_config* cfg) const { tdbem_config_destroy(cfg); }
};
using ConfigPtr = std::unique_ptr<tdbem_config, ConfigDeleter>;

int check(tdbem_status st) {
    if (st == TDBEM_OK) return 0;
    std::fprintf(stderr, "error: %s\n", tdbem_last_error());
    return static_cast<int>(st);
}

int set_key(tdbem_config* cfg, const char* key, const std::string& value) {
    return check(tdbem_config_set(cfg, key, value.c_str()));
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"time-domain boundary element scattering studies"};
    app.require_subcommand(1);

    std::string config_path, geometry, strategy, out_dir = ".";
    double tau = -1.0, eta = -1.0, theta = -1.0;
    int levels = -1;
    app.add_option("--config", config_path, "configuration file");
    app.add_option("--geometry", geometry, "flat-screen | wedge | trapping");
    app.add_option("--strategy", strategy, "uniform | adaptive | graded2 | graded3");
    app.add_option("--tau", tau, "time step");
    app.add_option("--eta", eta, "temporal shift (0 = standard formulation)");
    app.add_option("--theta", theta, "marking parameter");
    app.add_option("--levels", levels, "refinement levels");
    app.add_option("--out", out_dir, "output directory");

    CLI::App* sp_spatial = app.add_subcommand("spatial", "spatial convergence study");
    CLI::App* sp_time = app.add_subcommand("time", "temporal convergence study");
    CLI::App* sp_eff = app.add_subcommand("efficiency", "estimator efficiency ratios");
    CLI::App* sp_snap = app.add_subcommand("snapshots", "density and field snapshots");

    double eff_C = 5.0, eff_p = 2.0;
    sp_eff->add_option("--C", eff_C, "constant in e/(estimate + C tau^p)");
    sp_eff->add_option("--p", eff_p, "exponent in e/(estimate + C tau^p)");
    std::vector<double> times{2.0, 4.0, 6.0, 8.0};
    sp_snap->add_option("--times", times, "snapshot times");

    CLI11_PARSE(app, argc, argv);

    ConfigPtr cfg(tdbem_config_create());
    if (!cfg) {
        std::fprintf(stderr, "error: out of memory\n");
        return 1;
    }
    if (!config_path.empty())
        if (int rc = check(tdbem_config_load(cfg.get(), config_path.c_str()))) return rc;
    if (!geometry.empty())
        if (int rc = set_key(cfg.get(), "geometry", geometry)) return rc;
    if (!strategy.empty())
        if (int rc = set_key(cfg.get(), "strategy", strategy)) return rc;
    if (tau >= 0.0)
        if (int rc = set_key(cfg.get(), "tau", num(tau))) return rc;
    if (eta >= 0.0)
        if (int rc = set_key(cfg.get(), "shift_eta", num(eta))) return rc;
    if (theta >= 0.0)
        if (int rc = set_key(cfg.get(), "theta", num(theta))) return rc;
    if (levels >= 0)
        if (int rc = set_key(cfg.get(), "levels", std::to_string(levels))) return rc;
    if (int rc = set_key(cfg.get(), "out_dir", out_dir)) return rc;

    if (sp_spatial->parsed())
        return check(tdbem_run_spatial(cfg.get(), (out_dir + "/spatial.csv").c_str()));
    if (sp_time->parsed()) return check(tdbem_run_time(cfg.get(), (out_dir + "/time.csv").c_str()));
    if (sp_eff->parsed())
        return check(
            tdbem_run_efficiency(cfg.get(), eff_C, eff_p, (out_dir + "/efficiency.csv").c_str()));
    if (sp_snap->parsed())
        return check(tdbem_emit_snapshots(cfg.get(), times.data(), static_cast<int>(times.size())));
    return 1;
}
