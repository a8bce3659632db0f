#ifndef TDBEM_EXPERIMENTS_HPP
#define TDBEM_EXPERIMENTS_HPP

#include <iosfwd>
#include <optional>
#include <string>

#include "tdbem/adaptive.hpp"

namespace tdbem {

/// Flat key-value experiment configuration; defaults reproduce the paper's
/// parameter block.
struct ExperimentConfig {
    std::string geometry = "flat-screen";  // flat-screen | wedge | trapping
    double omega = 2.0;
    double L = 2.0;
    double beta = 5.0;  // Heaviside smoothing
    double t_lag = 4.0;
    double direction_x = -std::sqrt(3.0) / 2.0;
    double direction_y = 0.5;
    double T = 10.0;
    double tau = 0.1;
    std::string method = "radau";  // radau | bdf
    int order = 2;                 // stages (radau) or BDF order
    double shift_eta = 0.0;
    double lambda = 0.0;  // contour radius override; 0 = default
    std::string strategy = "adaptive";  // uniform | adaptive | graded2 | graded3
    double theta = 0.5;
    bool dorfler = false;
    int levels = 5;
    int initial_n = 8;       // elements per component on the coarsest mesh
    int adaptive_per_level = 2;  // refinement loop passes per recorded level
    int time_mesh_iterations = 8;  // adaptive passes fixing the temporal-study mesh
    std::string taus = "0.4,0.2,0.1,0.05,0.025";
    double benchmark_tau = 10.0 / 1600.0;
    int snapshot_grid = 101;
    std::string out_dir = ".";

    IncidentWave wave() const;
    GeometrySpec geometry_spec() const;
    CQScheme scheme_for(double tau_value) const;
    ScatteringProblem problem_for(double tau_value, double eta) const;
    std::vector<double> tau_list() const;
};

/// Applies one key-value pair; unknown key or malformed value throws with
/// the key named.
void apply_config_entry(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Parses a flat TOML-style file: key = value lines, # comments, quoted
/// strings.
ExperimentConfig load_config(const std::string& path);

struct SpatialRow {
    int level;
    std::size_t dofs;
    double energy_error;
    double point_error;
    double estimate;
    std::optional<double> rate_energy;  // blank unless DOFs doubled
};

struct TimeRow {
    double tau;
    double density_error;
    double point_error;
    std::optional<double> rate_density;
    std::optional<double> rate_point;
};

struct EfficiencyRow {
    std::size_t dofs;
    double tau;
    double error;
    double estimate;
    double ratio;  // e / (estimate + C tau^p)
};

/// Energy-error and point-evaluation convergence under the configured
/// refinement strategy at fixed tau, against a one-extra-level 3-graded
/// reference.
std::vector<SpatialRow> run_spatial_study(const ExperimentConfig& cfg);

/// Temporal convergence on a fixed adaptive mesh against the benchmark_tau
/// solution; shift_eta selects the formulation.
std::vector<TimeRow> run_time_study(const ExperimentConfig& cfg);

/// Ratios e_M/(eta_M + C tau^p) over the (mesh level, tau) grid.
std::vector<EfficiencyRow> run_efficiency_study(const ExperimentConfig& cfg, double C, double p);

/// Density and field snapshot CSV files at the given times.
void emit_snapshots(const ExperimentConfig& cfg, const std::vector<double>& times);

/// The paper's observation points (+-2, +-2).
std::vector<Point2> observation_points();

/// Observed order log2(e_prev / e_cur) for a halving sequence.
double convergence_rate(double e_prev, double e_cur);

void write_spatial_csv(std::ostream& os, const std::vector<SpatialRow>& rows);
void write_time_csv(std::ostream& os, const std::vector<TimeRow>& rows);
void write_efficiency_csv(std::ostream& os, const std::vector<EfficiencyRow>& rows);

}  // namespace tdbem

#endif
