#include "tdbem/adaptive.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace tdbem {

std::set<std::size_t> mark(const Eigen::VectorXd& ind, double theta) {
    if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("mark: theta must be in (0,1)");
    std::set<std::size_t> out;
    if (ind.size() == 0) return out;
    double mx = ind.maxCoeff();
    if (mx <= 0.0) return out;
    for (Eigen::Index j = 0; j < ind.size(); ++j)
        if (ind(j) > theta * mx) out.insert(static_cast<std::size_t>(j));
    return out;
}

std::set<std::size_t> mark_dorfler(const Eigen::VectorXd& ind, double theta) {
    if (!(theta > 0.0 && theta < 1.0))
        throw std::invalid_argument("mark_dorfler: theta must be in (0,1)");
    std::set<std::size_t> out;
    double total = ind.squaredNorm();
    if (total <= 0.0) return out;
    std::vector<Eigen::Index> order(ind.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return ind(a) > ind(b); });
    double acc = 0.0;
    for (Eigen::Index j : order) {
        out.insert(static_cast<std::size_t>(j));
        acc += ind(j) * ind(j);
        if (acc >= theta * theta * total) break;
    }
    return out;
}

AdaptiveTrace adaptive_loop(const ScatteringProblem& problem, const Mesh& initial,
                            const AdaptiveConfig& cfg) {
    AdaptiveTrace trace;
    Mesh mesh = initial;
    for (int it = 0; it < cfg.max_iterations; ++it) {
        DensityHistory history = solve_density(problem, mesh);
        ResidualHistory residual = compute_residual(history, problem);
        Eigen::VectorXd ind = indicators(residual, cfg.k_set);
        double estimate = global_estimate(ind);
        double energy = energy_norm(history);
        std::set<std::size_t> marked =
            cfg.dorfler ? mark_dorfler(ind, cfg.theta) : mark(ind, cfg.theta);

        bool stop = estimate <= cfg.target_estimate || marked.empty() ||
                    it + 1 == cfg.max_iterations;
        trace.iterations.push_back(
            {mesh, mesh.size(), estimate, energy, stop ? 0 : marked.size()});
        if (stop) break;
        mesh = refine(mesh, marked);
    }
    return trace;
}

void write_trace_csv(std::ostream& os, const AdaptiveTrace& trace) {
    os << "iteration,dofs,estimate,marked\n";
    char buf[64];
    for (std::size_t i = 0; i < trace.iterations.size(); ++i) {
        const AdaptiveIteration& it = trace.iterations[i];
        std::snprintf(buf, sizeof(buf), "%.12e", it.estimate);
        os << i << "," << it.dofs << "," << buf << "," << it.marked << "\n";
    }
}

void write_indicators_csv(std::ostream& os, const Eigen::VectorXd& ind) {
    os << "element_index,eta\n";
    char buf[64];
    for (Eigen::Index j = 0; j < ind.size(); ++j) {
        std::snprintf(buf, sizeof(buf), "%.12e", ind(j));
        os << j << "," << buf << "\n";
    }
}

}  // namespace tdbem
