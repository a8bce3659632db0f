#include "tdbem/estimator.hpp"

#include <cmath>
#include <stdexcept>

#include "tdbem/quadrature.hpp"

namespace tdbem {

namespace {

double stage_abscissa(const CQScheme& scheme, int l) {
    return scheme.method == CQMethod::RadauIIA ? scheme.tab.c(l) : 1.0;
}

// P1 nodal projection of -u^inc(., t) from its per-element Gauss samples.
Eigen::VectorXcd project_data(const Mesh& mesh, const IncidentWave& wave, double t) {
    const GaussRule& rule = gauss_rule(kTraceQuadPts);
    Eigen::MatrixXcd samples(mesh.size(), kTraceQuadPts);
    for (std::size_t j = 0; j < mesh.size(); ++j)
        for (int q = 0; q < kTraceQuadPts; ++q) {
            Point2 x = mesh.element(j).at(0.5 * (1.0 + rule.x[q]));
            samples(static_cast<Eigen::Index>(j), q) = -incident_trace(wave, x, t);
        }
    return p1_l2_projection(mesh, samples);
}

bool same_mesh(const Mesh& a, const Mesh& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const Segment &e = a.element(j), &f = b.element(j);
        if (e.a.x != f.a.x || e.a.y != f.a.y || e.b.x != f.b.x || e.b.y != f.b.y) return false;
    }
    return true;
}

}  // namespace

Eigen::VectorXcd ResidualHistory::at_step(int i) const {
    if (i == 0) return Eigen::VectorXcd::Zero(stages.dim);
    return stages.stage(i - 1, stages.m - 1);
}

ResidualHistory compute_residual(const DensityHistory& history, const ScatteringProblem& problem) {
    const CQScheme& scheme = history.scheme;
    const Mesh& mesh = history.mesh;
    const int nv = static_cast<int>(mesh.num_vertices());
    const int m = scheme.stages();
    const int steps = scheme.N + 1;
    const double eta = problem.shift_eta;

    // P_h: trace of the discrete single-layer convolution, projected to P1
    auto trace_symbol = [&](Complex s, const Eigen::VectorXcd& density) -> Eigen::VectorXcd {
        return boundary_trace_single_layer(mesh, LaplaceFrequency(s), density);
    };
    StageSeries P = forward_cq_apply(scheme, trace_symbol, history.stages, nv);

    // f_h: projected data, advanced by eta and pulled back by the discrete
    // J_eta in the shifted formulation
    StageSeries data(nv, m, steps);
    for (int n = 0; n < steps; ++n)
        for (int l = 0; l < m; ++l) {
            double t = n * scheme.tau + stage_abscissa(scheme, l) * scheme.tau + eta;
            data.data.col(n * m + l) = project_data(mesh, problem.wave, t);
        }
    if (eta > 0.0) {
        auto shift_symbol = [&](Complex s, const Eigen::VectorXcd& v) -> Eigen::VectorXcd {
            return shift_multiplier(eta, s) * v;
        };
        data = forward_cq_apply(scheme, shift_symbol, data, nv);
    }

    ResidualHistory residual{StageSeries(nv, m, steps), mesh, scheme};
    residual.stages.data = P.data - data.data;
    return residual;
}

Eigen::VectorXd indicators(const ResidualHistory& residual, const std::set<int>& k_set) {
    if (k_set.empty()) throw std::invalid_argument("indicators: k_set must be nonempty");
    const Mesh& mesh = residual.mesh;
    const CQScheme& scheme = residual.scheme;
    const int nv = residual.stages.dim;
    const double tau = scheme.tau;
    Eigen::VectorXd eta2 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.size()));

    for (int k : k_set) {
        if (k != 0 && k != 2) throw std::invalid_argument("indicators: k_set must be within {0, 2}");
        StageSeries series = residual.stages;
        if (k == 2) {
            auto d2 = [](Complex s, const Eigen::VectorXcd& v) -> Eigen::VectorXcd {
                return (s * s) * v;
            };
            series = forward_cq_apply(scheme, d2, residual.stages, nv);
        }
        for (int i = 1; i <= scheme.N; ++i) {
            Eigen::VectorXcd R = series.stage(i - 1, series.m - 1);
            for (std::size_t j = 0; j < mesh.size(); ++j) {
                auto [l, r] = mesh.element_vertices(j);
                double hj = mesh.h(j);
                // grad_G R is constant on E_j; the 5-point Gauss rule of |.|^2
                // integrates it exactly to h_j |dR/h_j|^2
                double grad2 = std::norm((R(static_cast<Eigen::Index>(r)) -
                                          R(static_cast<Eigen::Index>(l))) / hj);
                eta2(static_cast<Eigen::Index>(j)) += tau * hj * (hj * grad2);
            }
        }
    }
    return eta2.cwiseSqrt();
}

double global_estimate(const Eigen::VectorXd& ind) { return ind.norm(); }

double energy_norm(const DensityHistory& history) {
    GalerkinMatrix V = assemble_single_layer(history.mesh, LaplaceFrequency(Complex(1.0)));
    double acc = 0.0;
    for (int i = 1; i <= history.scheme.N; ++i) {
        Eigen::VectorXcd phi = history.at_step(i);
        acc += (phi.adjoint() * V.entries * phi)(0).real();
    }
    return std::sqrt(std::max(0.0, history.scheme.tau * acc));
}

double energy_error(const DensityHistory& a, const DensityHistory& b) {
    const DensityHistory& coarse = a.scheme.tau >= b.scheme.tau ? a : b;
    const DensityHistory& fine = a.scheme.tau >= b.scheme.tau ? b : a;
    double ratio = coarse.scheme.tau / fine.scheme.tau;
    int r = static_cast<int>(std::llround(ratio));
    if (std::abs(ratio - r) > 1e-9 * ratio)
        throw std::invalid_argument("energy_error: time steps are not nested");

    LaplaceFrequency one{Complex(1.0)};
    double acc = 0.0;
    if (same_mesh(coarse.mesh, fine.mesh)) {
        GalerkinMatrix V = assemble_single_layer(coarse.mesh, one);
        for (int i = 1; i <= coarse.scheme.N; ++i) {
            Eigen::VectorXcd e = coarse.at_step(i) - fine.at_step(i * r);
            acc += (e.adjoint() * V.entries * e)(0).real();
        }
    } else {
        GalerkinMatrix Vcc = assemble_single_layer(coarse.mesh, one);
        GalerkinMatrix Vff = assemble_single_layer(fine.mesh, one);
        Eigen::MatrixXcd Vcf = assemble_cross(coarse.mesh, fine.mesh, one);
        for (int i = 1; i <= coarse.scheme.N; ++i) {
            Eigen::VectorXcd c = coarse.at_step(i), f = fine.at_step(i * r);
            double q = (c.adjoint() * Vcc.entries * c)(0).real() -
                       2.0 * (c.adjoint() * Vcf * f)(0).real() +
                       (f.adjoint() * Vff.entries * f)(0).real();
            acc += std::max(0.0, q);
        }
    }
    return std::sqrt(std::max(0.0, coarse.scheme.tau * acc));
}

}  // namespace tdbem
