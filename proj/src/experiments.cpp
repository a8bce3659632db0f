#include "tdbem/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace tdbem {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12e", v);
    return buf;
}

double parse_number(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("config: invalid number for '" + key + "': " + value);
    }
}

int parse_int(const std::string& key, const std::string& value) {
    double v = parse_number(key, value);
    int i = static_cast<int>(std::llround(v));
    if (std::abs(v - i) > 1e-12) throw std::runtime_error("config: '" + key + "' must be an integer");
    return i;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true") return true;
    if (value == "false") return false;
    throw std::runtime_error("config: '" + key + "' must be true or false");
}

std::string strip(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// Sequence of meshes for a refinement strategy. The adaptive strategy pays
// one solve per level to drive the marking.
std::vector<Mesh> strategy_meshes(const ExperimentConfig& cfg) {
    GeometrySpec spec = cfg.geometry_spec();
    std::vector<Mesh> out;
    if (cfg.strategy == "uniform") {
        for (int k = 0; k < cfg.levels; ++k) out.push_back(build_mesh(spec, cfg.initial_n << k));
    } else if (cfg.strategy == "graded2" || cfg.strategy == "graded3") {
        double beta = cfg.strategy == "graded2" ? 2.0 : 3.0;
        int n0 = std::max(1, cfg.initial_n / 2);
        for (int k = 0; k < cfg.levels; ++k) out.push_back(graded_mesh(spec, n0 << k, beta));
    } else if (cfg.strategy == "adaptive") {
        ScatteringProblem prob = cfg.problem_for(cfg.tau, cfg.shift_eta);
        Mesh mesh = build_mesh(spec, cfg.initial_n);
        for (int k = 0; k < cfg.levels; ++k) {
            out.push_back(mesh);
            if (k + 1 == cfg.levels) break;
            for (int pass = 0; pass < cfg.adaptive_per_level; ++pass) {
                DensityHistory hist = solve_density(prob, mesh);
                Eigen::VectorXd ind = indicators(compute_residual(hist, prob));
                std::set<std::size_t> marked =
                    cfg.dorfler ? mark_dorfler(ind, cfg.theta) : mark(ind, cfg.theta);
                if (marked.empty()) break;
                mesh = refine(mesh, marked);
            }
        }
    } else {
        throw std::runtime_error("config: unknown strategy '" + cfg.strategy + "'");
    }
    return out;
}

struct ReferenceSolution {
    Mesh mesh;
    DensityHistory history;
    Eigen::MatrixXcd field;  // observation points x time
};

// Spatial reference: 3-graded mesh one level beyond the study's finest, at
// the study's tau. Cached so the strategies of one geometry share it.
std::shared_ptr<const ReferenceSolution> spatial_reference(const ExperimentConfig& cfg) {
    static std::map<std::string, std::shared_ptr<const ReferenceSolution>> cache;
    static std::mutex mtx;
    std::ostringstream key;
    key << cfg.geometry << "|" << cfg.tau << "|" << cfg.levels << "|" << cfg.initial_n << "|"
        << cfg.shift_eta << "|" << cfg.omega << "|" << cfg.L << "|" << cfg.beta << "|" << cfg.t_lag
        << "|" << cfg.direction_x << "|" << cfg.direction_y << "|" << cfg.T;
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(key.str());
        if (it != cache.end()) return it->second;
    }
    int n_ref = std::max(1, cfg.initial_n / 2) << cfg.levels;
    Mesh mesh = graded_mesh(cfg.geometry_spec(), n_ref, 3.0);
    ScatteringProblem prob = cfg.problem_for(cfg.tau, cfg.shift_eta);
    auto ref = std::make_shared<ReferenceSolution>(
        ReferenceSolution{mesh, solve_density(prob, mesh), {}});
    ref->field = evaluate_field(ref->history, observation_points());
    std::lock_guard<std::mutex> lock(mtx);
    cache.emplace(key.str(), ref);
    return ref;
}

// sqrt(tau sum_i sum_k |u - u_ref|^2) on the coarser of the two time grids.
double point_error(const Eigen::MatrixXcd& u, double tau_u, const Eigen::MatrixXcd& uref,
                   double tau_ref) {
    double ratio = tau_u / tau_ref;
    int r = static_cast<int>(std::llround(ratio));
    if (r < 1 || std::abs(ratio - r) > 1e-9 * ratio)
        throw std::runtime_error("point_error: time grids are not nested");
    double acc = 0.0;
    for (Eigen::Index i = 1; i < u.cols(); ++i)
        acc += (u.col(i) - uref.col(i * r)).squaredNorm();
    return std::sqrt(tau_u * acc);
}

// Adaptive mesh held fixed for the temporal studies.
Mesh fixed_adaptive_mesh(const ExperimentConfig& cfg) {
    ScatteringProblem prob = cfg.problem_for(cfg.tau, cfg.shift_eta);
    AdaptiveConfig acfg;
    acfg.theta = cfg.theta;
    acfg.dorfler = cfg.dorfler;
    acfg.max_iterations = cfg.time_mesh_iterations;
    AdaptiveTrace trace = adaptive_loop(prob, build_mesh(cfg.geometry_spec(), cfg.initial_n), acfg);
    return trace.final_mesh();
}

}  // namespace

IncidentWave ExperimentConfig::wave() const {
    double nrm = std::hypot(direction_x, direction_y);
    if (!(nrm > 0.0)) throw std::runtime_error("config: direction must be nonzero");
    return {omega, L, beta, t_lag, {direction_x / nrm, direction_y / nrm}};
}

GeometrySpec ExperimentConfig::geometry_spec() const { return parse_geometry(geometry); }

CQScheme ExperimentConfig::scheme_for(double tau_value) const {
    double steps = T / tau_value;
    int N = static_cast<int>(std::llround(steps));
    if (N < 1 || std::abs(steps - N) > 1e-9 * steps)
        throw std::runtime_error("config: tau must divide T");
    if (method == "radau") return make_radau_scheme(order, tau_value, N, lambda);
    if (method == "bdf") return make_bdf_scheme(order, tau_value, N, lambda);
    throw std::runtime_error("config: unknown method '" + method + "'");
}

ScatteringProblem ExperimentConfig::problem_for(double tau_value, double eta) const {
    return {geometry_spec(), wave(), T, scheme_for(tau_value), eta};
}

std::vector<double> ExperimentConfig::tau_list() const {
    std::vector<double> out;
    std::stringstream ss(taus);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = strip(item);
        if (!item.empty()) out.push_back(parse_number("taus", item));
    }
    if (out.empty()) throw std::runtime_error("config: taus must contain at least one value");
    return out;
}

void apply_config_entry(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "geometry") cfg.geometry = value;
    else if (key == "omega") cfg.omega = parse_number(key, value);
    else if (key == "L") cfg.L = parse_number(key, value);
    else if (key == "beta") cfg.beta = parse_number(key, value);
    else if (key == "t_lag") cfg.t_lag = parse_number(key, value);
    else if (key == "direction_x") cfg.direction_x = parse_number(key, value);
    else if (key == "direction_y") cfg.direction_y = parse_number(key, value);
    else if (key == "T") cfg.T = parse_number(key, value);
    else if (key == "tau") cfg.tau = parse_number(key, value);
    else if (key == "method") cfg.method = value;
    else if (key == "order") cfg.order = parse_int(key, value);
    else if (key == "shift_eta") cfg.shift_eta = parse_number(key, value);
    else if (key == "lambda") cfg.lambda = parse_number(key, value);
    else if (key == "strategy") cfg.strategy = value;
    else if (key == "theta") cfg.theta = parse_number(key, value);
    else if (key == "dorfler") cfg.dorfler = parse_bool(key, value);
    else if (key == "levels") cfg.levels = parse_int(key, value);
    else if (key == "initial_n") cfg.initial_n = parse_int(key, value);
    else if (key == "adaptive_per_level") cfg.adaptive_per_level = parse_int(key, value);
    else if (key == "time_mesh_iterations") cfg.time_mesh_iterations = parse_int(key, value);
    else if (key == "taus") cfg.taus = value;
    else if (key == "benchmark_tau") cfg.benchmark_tau = parse_number(key, value);
    else if (key == "snapshot_grid") cfg.snapshot_grid = parse_int(key, value);
    else if (key == "out_dir") cfg.out_dir = value;
    else throw std::runtime_error("config: unknown key '" + key + "'");
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    ExperimentConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        // strip comments outside quotes
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') quoted = !quoted;
            else if (line[i] == '#' && !quoted) {
                line = line.substr(0, i);
                break;
            }
        }
        line = strip(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config: line " + std::to_string(lineno) + " has no '='");
        std::string key = strip(line.substr(0, eq));
        std::string value = strip(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
            value = value.substr(1, value.size() - 2);
        apply_config_entry(cfg, key, value);
    }
    return cfg;
}

std::vector<Point2> observation_points() {
    return {{2.0, 2.0}, {-2.0, 2.0}, {-2.0, -2.0}, {2.0, -2.0}};
}

double convergence_rate(double e_prev, double e_cur) { return std::log2(e_prev / e_cur); }

std::vector<SpatialRow> run_spatial_study(const ExperimentConfig& cfg) {
    std::vector<Mesh> meshes = strategy_meshes(cfg);
    std::shared_ptr<const ReferenceSolution> ref = spatial_reference(cfg);
    ScatteringProblem prob = cfg.problem_for(cfg.tau, cfg.shift_eta);
    std::vector<Point2> pts = observation_points();

    std::vector<SpatialRow> rows;
    for (std::size_t k = 0; k < meshes.size(); ++k) {
        DensityHistory hist = solve_density(prob, meshes[k]);
        double e = energy_error(hist, ref->history);
        double pe = point_error(evaluate_field(hist, pts), cfg.tau, ref->field, cfg.tau);
        double est = global_estimate(indicators(compute_residual(hist, prob)));
        SpatialRow row{static_cast<int>(k), meshes[k].size(), e, pe, est, std::nullopt};
        if (k > 0 && row.dofs == 2 * rows.back().dofs && rows.back().energy_error > 0.0 &&
            e > 0.0)
            row.rate_energy = convergence_rate(rows.back().energy_error, e);
        rows.push_back(row);
    }
    return rows;
}

std::vector<TimeRow> run_time_study(const ExperimentConfig& cfg) {
    Mesh mesh = fixed_adaptive_mesh(cfg);
    std::vector<Point2> pts = observation_points();

    ScatteringProblem bench_prob = cfg.problem_for(cfg.benchmark_tau, cfg.shift_eta);
    DensityHistory bench = solve_density(bench_prob, mesh);
    Eigen::MatrixXcd bench_field = evaluate_field(bench, pts);

    std::vector<TimeRow> rows;
    for (double tau : cfg.tau_list()) {
        ScatteringProblem prob = cfg.problem_for(tau, cfg.shift_eta);
        DensityHistory hist = solve_density(prob, mesh);
        double de = energy_error(hist, bench);
        double pe = point_error(evaluate_field(hist, pts), tau, bench_field, cfg.benchmark_tau);
        TimeRow row{tau, de, pe, std::nullopt, std::nullopt};
        if (!rows.empty() && std::abs(rows.back().tau / tau - 2.0) < 1e-9) {
            if (rows.back().density_error > 0.0 && de > 0.0)
                row.rate_density = convergence_rate(rows.back().density_error, de);
            if (rows.back().point_error > 0.0 && pe > 0.0)
                row.rate_point = convergence_rate(rows.back().point_error, pe);
        }
        rows.push_back(row);
    }
    return rows;
}

std::vector<EfficiencyRow> run_efficiency_study(const ExperimentConfig& cfg, double C, double p) {
    if (!(C > 0.0) || !(p > 0.0))
        throw std::runtime_error("run_efficiency_study: C and p must be positive");
    // adaptive mesh hierarchy; the reference lives two refinement passes
    // beyond the last level, at benchmark_tau
    ExperimentConfig mesh_cfg = cfg;
    mesh_cfg.strategy = "adaptive";
    mesh_cfg.levels = cfg.levels + 1;
    std::vector<Mesh> meshes = strategy_meshes(mesh_cfg);
    Mesh ref_mesh = meshes.back();
    meshes.pop_back();

    ScatteringProblem ref_prob = cfg.problem_for(cfg.benchmark_tau, cfg.shift_eta);
    DensityHistory ref = solve_density(ref_prob, ref_mesh);

    std::vector<EfficiencyRow> rows;
    for (const Mesh& mesh : meshes)
        for (double tau : cfg.tau_list()) {
            ScatteringProblem prob = cfg.problem_for(tau, cfg.shift_eta);
            DensityHistory hist = solve_density(prob, mesh);
            double e = energy_error(hist, ref);
            double est = global_estimate(indicators(compute_residual(hist, prob)));
            double denom = est + C * std::pow(tau, p);
            double ratio = (e == 0.0 && est == 0.0) ? 0.0 : e / denom;
            rows.push_back({mesh.size(), tau, e, est, ratio});
        }
    return rows;
}

void emit_snapshots(const ExperimentConfig& cfg, const std::vector<double>& times) {
    for (double t : times)
        if (t < 0.0 || t > cfg.T) throw std::runtime_error("emit_snapshots: time outside [0, T]");
    if (times.empty()) return;

    std::filesystem::create_directories(cfg.out_dir);
    Mesh mesh = fixed_adaptive_mesh(cfg);
    ScatteringProblem prob = cfg.problem_for(cfg.tau, cfg.shift_eta);
    DensityHistory hist = solve_density(prob, mesh);

    // grid points off the boundary
    std::vector<Point2> grid;
    std::vector<std::pair<int, int>> grid_idx;
    int n = cfg.snapshot_grid;
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) {
            Point2 pt{-3.0 + 6.0 * ix / (n - 1), -3.0 + 6.0 * iy / (n - 1)};
            if (mesh.distance(pt) < 1e-3) continue;
            grid.push_back(pt);
            grid_idx.emplace_back(ix, iy);
        }
    Eigen::MatrixXcd field = evaluate_field(hist, grid);

    // arclength of element midpoints, cumulative across components
    std::vector<double> arc(mesh.size());
    double s = 0.0;
    for (std::size_t j = 0; j < mesh.size(); ++j) {
        arc[j] = s + 0.5 * mesh.h(j);
        s += mesh.h(j);
    }

    for (double t : times) {
        int i = static_cast<int>(std::llround(t / cfg.tau));
        i = std::max(0, std::min(i, prob.scheme.N));
        char suffix[32];
        std::snprintf(suffix, sizeof(suffix), "%g", t);

        std::ofstream dens(cfg.out_dir + "/density_t" + suffix + ".csv");
        dens << "s_arclength,phi\n";
        Eigen::VectorXcd phi = hist.at_step(i);
        for (std::size_t j = 0; j < mesh.size(); ++j)
            dens << fmt(arc[j]) << "," << fmt(phi(static_cast<Eigen::Index>(j)).real()) << "\n";

        std::ofstream fld(cfg.out_dir + "/field_t" + suffix + ".csv");
        fld << "x,y,u\n";
        for (std::size_t g = 0; g < grid.size(); ++g)
            fld << fmt(grid[g].x) << "," << fmt(grid[g].y) << ","
                << fmt(field(static_cast<Eigen::Index>(g), i).real()) << "\n";
    }
}

void write_spatial_csv(std::ostream& os, const std::vector<SpatialRow>& rows) {
    os << "level,dofs,energy_error,point_error,estimate,rate_energy\n";
    for (const SpatialRow& r : rows) {
        os << r.level << "," << r.dofs << "," << fmt(r.energy_error) << "," << fmt(r.point_error)
           << "," << fmt(r.estimate) << ",";
        if (r.rate_energy) os << fmt(*r.rate_energy);
        os << "\n";
    }
}

void write_time_csv(std::ostream& os, const std::vector<TimeRow>& rows) {
    os << "tau,density_error,point_error,rate_density,rate_point\n";
    for (const TimeRow& r : rows) {
        os << fmt(r.tau) << "," << fmt(r.density_error) << "," << fmt(r.point_error) << ",";
        if (r.rate_density) os << fmt(*r.rate_density);
        os << ",";
        if (r.rate_point) os << fmt(*r.rate_point);
        os << "\n";
    }
}

void write_efficiency_csv(std::ostream& os, const std::vector<EfficiencyRow>& rows) {
    os << "dofs,tau,error,estimate,ratio\n";
    for (const EfficiencyRow& r : rows)
        os << r.dofs << "," << fmt(r.tau) << "," << fmt(r.error) << "," << fmt(r.estimate) << ","
           << fmt(r.ratio) << "\n";
}

}  // namespace tdbem
