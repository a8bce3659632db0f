#include "tdbem.h"

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include "tdbem/experiments.hpp"

struct tdbem_config {
    tdbem::ExperimentConfig cfg;
};

namespace {

thread_local std::string g_last_error;

tdbem_status fail(tdbem_status code, const std::string& msg) {
    g_last_error = msg;
    return code;
}

template <typename Fn>
tdbem_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return TDBEM_OK;
    } catch (const std::invalid_argument& e) {
        return fail(TDBEM_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::ios_base::failure& e) {
        return fail(TDBEM_ERR_IO, e.what());
    } catch (const std::exception& e) {
        std::string msg = e.what();
        if (msg.rfind("config:", 0) == 0) return fail(TDBEM_ERR_INVALID_ARGUMENT, msg);
        return fail(TDBEM_ERR_SOLVER, msg);
    }
}

std::ofstream open_csv(const char* path) {
    if (!path) throw std::invalid_argument("output path is null");
    std::filesystem::path parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream os(path);
    if (!os) throw std::ios_base::failure(std::string("cannot open ") + path);
    return os;
}

}  // namespace

extern "C" {

tdbem_config* tdbem_config_create(void) { return new (std::nothrow) tdbem_config(); }

void tdbem_config_destroy(tdbem_config* cfg) { delete cfg; }

tdbem_status tdbem_config_load(tdbem_config* cfg, const char* path) {
    if (!cfg || !path) return fail(TDBEM_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { cfg->cfg = tdbem::load_config(path); });
}

tdbem_status tdbem_config_set(tdbem_config* cfg, const char* key, const char* value) {
    if (!cfg || !key || !value) return fail(TDBEM_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { tdbem::apply_config_entry(cfg->cfg, key, value); });
}

tdbem_status tdbem_run_spatial(const tdbem_config* cfg, const char* out_csv) {
    if (!cfg || !out_csv) return fail(TDBEM_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        auto rows = tdbem::run_spatial_study(cfg->cfg);
        auto os = open_csv(out_csv);
        tdbem::write_spatial_csv(os, rows);
    });
}

tdbem_status tdbem_run_time(const tdbem_config* cfg, const char* out_csv) {
    if (!cfg || !out_csv) return fail(TDBEM_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        auto rows = tdbem::run_time_study(cfg->cfg);
        auto os = open_csv(out_csv);
        tdbem::write_time_csv(os, rows);
    });
}

tdbem_status tdbem_run_efficiency(const tdbem_config* cfg, double C, double p,
                                  const char* out_csv) {
    if (!cfg || !out_csv) return fail(TDBEM_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        auto rows = tdbem::run_efficiency_study(cfg->cfg, C, p);
        auto os = open_csv(out_csv);
        tdbem::write_efficiency_csv(os, rows);
    });
}

tdbem_status tdbem_emit_snapshots(const tdbem_config* cfg, const double* times, int n_times) {
    if (!cfg || (n_times > 0 && !times))
        return fail(TDBEM_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        std::vector<double> ts(times, times + (n_times > 0 ? n_times : 0));
        tdbem::emit_snapshots(cfg->cfg, ts);
    });
}

const char* tdbem_last_error(void) { return g_last_error.c_str(); }

}  // extern "C"
