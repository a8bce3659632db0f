#ifndef TDBEM_SOLVER_HPP
#define TDBEM_SOLVER_HPP

#include <vector>

#include "tdbem/assembly.hpp"
#include "tdbem/cq.hpp"
#include "tdbem/geometry.hpp"

namespace tdbem {

/// Windowed sinusoidal incident pulse travelling along direction d.
struct IncidentWave {
    double omega = 2.0;
    double L = 2.0;
    double beta = 5.0;
    double t_lag = 4.0;
    Point2 d = {-std::sqrt(3.0) / 2.0, 0.5};
};

/// Smoothed Heaviside H(t) = 1 - 1/(1 + e^{beta t}).
double smoothed_heaviside(double beta, double t);

/// Signal profile f(t) = sin(omega (t - t_lag)) H(t) H(L - t).
double window_profile(const IncidentWave& wave, double t);

/// Incident trace u^inc(x, t): the windowed pulse delayed so that it is
/// causal, u^inc = sin(omega t') H(t') H(L - t') with t' = t - t_lag - x.d.
double incident_trace(const IncidentWave& wave, Point2 x, double t);

struct ScatteringProblem {
    GeometrySpec geometry;
    IncidentWave wave;
    double T = 10.0;
    CQScheme scheme;
    double shift_eta = 0.0;  // 0: standard formulation
};

/// Boundary density stage history phi_h^tau on a fixed mesh.
struct DensityHistory {
    StageSeries stages;  // dim = element count
    Mesh mesh;
    CQScheme scheme;

    /// Density at t_i = i tau (last c = 1 stage of block i-1; zero at i = 0).
    Eigen::VectorXcd at_step(int i) const;
};

/// -<v_h, u^inc(., t)> at every stage time t_n + c_l tau, sampled at t + eta
/// when eta > 0 (the exact realization of the continuous advance J_{-eta}).
StageSeries incident_rhs(const ScatteringProblem& problem, const Mesh& mesh, int steps,
                         double eta);

/// Solves V(d_t^tau) phi = rhs all-at-once. With shift_eta > 0 the rhs is
/// advanced by eta, each frequency solve carries the multiplier e^{-s eta},
/// the horizon is extended by ceil(eta/tau) steps and the tail discarded.
DensityHistory solve_density(const ScatteringProblem& problem, const Mesh& mesh);

/// Scattered field u(x_k, t_i) at the last-stage time grid, one row per
/// point, columns i = 0..N.
Eigen::MatrixXcd evaluate_field(const DensityHistory& history, const std::vector<Point2>& points);

}  // namespace tdbem

#endif
