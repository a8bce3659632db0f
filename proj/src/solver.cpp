#include "tdbem/solver.hpp"

#include <atomic>
#include <cmath>
#include <iostream>
#include <stdexcept>

#include "tdbem/quadrature.hpp"

namespace tdbem {

namespace {

constexpr double kRhsDropTol = 1e-14;  // relative spectral floor for dead frequencies

double stage_abscissa(const CQScheme& scheme, int l) {
    return scheme.method == CQMethod::RadauIIA ? scheme.tab.c(l) : 1.0;
}

}  // namespace

double smoothed_heaviside(double beta, double t) { return 1.0 / (1.0 + std::exp(-beta * t)); }

double window_profile(const IncidentWave& wave, double t) {
    return std::sin(wave.omega * (t - wave.t_lag)) * smoothed_heaviside(wave.beta, t) *
           smoothed_heaviside(wave.beta, wave.L - t);
}

double incident_trace(const IncidentWave& wave, Point2 x, double t) {
    double tp = t - wave.t_lag - dot(x, wave.d);
    return std::sin(wave.omega * tp) * smoothed_heaviside(wave.beta, tp) *
           smoothed_heaviside(wave.beta, wave.L - tp);
}

Eigen::VectorXcd DensityHistory::at_step(int i) const {
    const int M = stages.dim;
    if (i == 0) return Eigen::VectorXcd::Zero(M);
    return stages.stage(i - 1, stages.m - 1);
}

StageSeries incident_rhs(const ScatteringProblem& problem, const Mesh& mesh, int steps,
                         double eta) {
    const CQScheme& scheme = problem.scheme;
    const int m = scheme.stages();
    const int M = static_cast<int>(mesh.size());
    StageSeries rhs(M, m, steps);
    for (int n = 0; n < steps; ++n)
        for (int l = 0; l < m; ++l) {
            double t = n * scheme.tau + stage_abscissa(scheme, l) * scheme.tau + eta;
            rhs.data.col(n * m + l) = test_against_p0(
                mesh, [&](Point2 x) { return Complex(-incident_trace(problem.wave, x, t)); });
        }
    return rhs;
}

DensityHistory solve_density(const ScatteringProblem& problem, const Mesh& mesh) {
    const CQScheme& scheme = problem.scheme;
    const double eta = problem.shift_eta;
    if (eta < 0.0) throw std::invalid_argument("solve_density: shift_eta must be >= 0");
    const int extra = eta > 0.0 ? static_cast<int>(std::ceil(eta / scheme.tau)) : 0;

    CQScheme ext = scheme;
    ext.N = scheme.N + extra;
    if (scheme.lambda == 0.0) ext.lambda = scheme.contour_radius();

    StageSeries rhs = incident_rhs(problem, mesh, ext.N + 1, eta);

    std::atomic<bool> warned{false};
    auto resolvent = [&](Complex s, const Eigen::VectorXcd& f) -> Eigen::VectorXcd {
        GalerkinMatrix V = assemble_single_layer(mesh, LaplaceFrequency(s));
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(V.entries);
        double rc = lu.rcond();
        if (rc > 0.0 && 1.0 / rc > 1e12 && !warned.exchange(true))
            std::cerr << "warning: Galerkin matrix condition estimate " << 1.0 / rc << " at s = " << s
                      << "\n";
        if (eta > 0.0) return lu.solve((shift_multiplier(eta, s) * f).eval());
        return lu.solve(f);
    };

    StageSeries full = solve_cq(ext, resolvent, rhs, static_cast<int>(mesh.size()), kRhsDropTol);

    DensityHistory history{StageSeries(full.dim, full.m, scheme.N + 1), mesh, scheme};
    // the density is real; dropping the round-off imaginary part keeps the
    // conjugate-symmetric fast path available downstream
    history.stages.data =
        full.data.leftCols(full.m * (scheme.N + 1)).real().cast<Complex>();
    return history;
}

Eigen::MatrixXcd evaluate_field(const DensityHistory& history, const std::vector<Point2>& points) {
    for (const Point2& p : points)
        if (history.mesh.distance(p) <= 1e-10)
            throw std::invalid_argument("evaluate_field: point on the boundary");
    const int P = static_cast<int>(points.size());
    auto symbol = [&](Complex s, const Eigen::VectorXcd& density) -> Eigen::VectorXcd {
        return evaluate_potential(history.mesh, LaplaceFrequency(s), density, points);
    };
    StageSeries u = forward_cq_apply(history.scheme, symbol, history.stages, P);
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(P, history.scheme.N + 1);
    for (int i = 1; i <= history.scheme.N; ++i) out.col(i) = u.stage(i - 1, u.m - 1);
    return out;
}

}  // namespace tdbem
