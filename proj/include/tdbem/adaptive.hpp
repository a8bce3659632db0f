#ifndef TDBEM_ADAPTIVE_HPP
#define TDBEM_ADAPTIVE_HPP

#include <iosfwd>
#include <set>

#include "tdbem/estimator.hpp"

namespace tdbem {

struct AdaptiveConfig {
    double theta = 0.5;
    int max_iterations = 10;
    double target_estimate = 0.0;
    std::set<int> k_set = {0};
    bool dorfler = false;  // true: bulk-chasing instead of the maximum criterion
};

/// Maximum criterion: { j : eta_j > theta * max eta }. Empty for all-zero
/// indicators.
std::set<std::size_t> mark(const Eigen::VectorXd& ind, double theta);

/// Bulk chasing: smallest set with sum eta^2 >= theta^2 sum eta^2.
std::set<std::size_t> mark_dorfler(const Eigen::VectorXd& ind, double theta);

struct AdaptiveIteration {
    Mesh mesh;
    std::size_t dofs;
    double estimate;
    double energy;       // energy norm of the density on this mesh
    std::size_t marked;  // elements marked on this mesh (0 on the final one)
};

struct AdaptiveTrace {
    std::vector<AdaptiveIteration> iterations;
    const Mesh& final_mesh() const { return iterations.back().mesh; }
};

/// Solve -> estimate -> mark -> refine until the estimate reaches the
/// target, nothing is marked, or max_iterations is exhausted.
AdaptiveTrace adaptive_loop(const ScatteringProblem& problem, const Mesh& initial,
                            const AdaptiveConfig& cfg);

/// CSV rows "iteration,dofs,estimate,marked".
void write_trace_csv(std::ostream& os, const AdaptiveTrace& trace);

/// CSV rows "element_index,eta".
void write_indicators_csv(std::ostream& os, const Eigen::VectorXd& ind);

}  // namespace tdbem

#endif
