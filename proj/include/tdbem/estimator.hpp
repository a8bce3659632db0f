#ifndef TDBEM_ESTIMATOR_HPP
#define TDBEM_ESTIMATOR_HPP

#include <set>

#include "tdbem/solver.hpp"

namespace tdbem {

/// P1 residual R_h^tau(t_i) = P_h(t_i) - f_h(t_i), kept as a full stage
/// series so discrete time derivatives can be applied to it.
struct ResidualHistory {
    StageSeries stages;  // dim = vertex count
    Mesh mesh;
    CQScheme scheme;

    /// Residual nodal values at t_i = i tau (zero at i = 0).
    Eigen::VectorXcd at_step(int i) const;
};

/// Projects the boundary trace of V(d_t^tau) phi and the problem data to P1
/// and returns the difference. With shift_eta > 0 the data term carries the
/// discrete J_eta applied to the exactly advanced samples.
ResidualHistory compute_residual(const DensityHistory& history, const ScatteringProblem& problem);

/// eta(E_j)^2 = tau h_j sum_{k in k_set} sum_{t_i} int_{E_j} |grad_G (d_t^tau)^k R(t_i)|^2;
/// k_set subset of {0, 2}; the k = 2 term applies the scalar symbol s^2
/// nodewise to the residual series.
Eigen::VectorXd indicators(const ResidualHistory& residual, const std::set<int>& k_set = {0});

/// sqrt of the sum of squared indicators.
double global_estimate(const Eigen::VectorXd& ind);

/// Discrete energy norm sqrt(tau sum_i <phi(t_i), V(1) phi(t_i)>).
double energy_norm(const DensityHistory& history);

/// Energy norm of the difference of two densities, possibly on different
/// meshes over the same geometry (cross Galerkin terms at s = 1).
double energy_error(const DensityHistory& a, const DensityHistory& b);

}  // namespace tdbem

#endif
