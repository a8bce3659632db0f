#include "tdbem/assembly.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

#include "tdbem/parallel.hpp"
#include "tdbem/quadrature.hpp"

namespace tdbem {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

// Gauss points of element e in global coordinates, kTraceQuadPts per element.
Point2 trace_point(const Segment& e, int q) {
    const GaussRule& g = gauss_rule(kTraceQuadPts);
    return e.at(0.5 * (1.0 + g.x[q]));
}

}  // namespace

GalerkinMatrix assemble_single_layer(const Mesh& mesh, const LaplaceFrequency& s) {
    const int M = static_cast<int>(mesh.size());
    GalerkinMatrix V;
    V.s = s.s;
    V.entries.resize(M, M);
    // upper triangle (including diagonal) by anti-diagonal blocks of rows
    parallel_for(M, [&](int i) {
        for (int j = i; j < M; ++j)
            V.entries(i, j) = k0_pair_integral(s.s, mesh.element(i), mesh.element(j)) / kTwoPi;
    });
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < i; ++j) V.entries(i, j) = V.entries(j, i);
    return V;
}

Eigen::MatrixXcd assemble_cross(const Mesh& rows, const Mesh& cols, const LaplaceFrequency& s) {
    const int R = static_cast<int>(rows.size());
    const int C = static_cast<int>(cols.size());
    Eigen::MatrixXcd A(R, C);
    parallel_for(R, [&](int i) {
        for (int j = 0; j < C; ++j)
            A(i, j) = k0_pair_integral(s.s, rows.element(i), cols.element(j)) / kTwoPi;
    });
    return A;
}

Eigen::VectorXcd test_against_p0(const Mesh& mesh, const std::function<Complex(Point2)>& g) {
    const int M = static_cast<int>(mesh.size());
    const GaussRule& rule = gauss_rule(8);
    Eigen::VectorXcd out(M);
    for (int j = 0; j < M; ++j) {
        const Segment& e = mesh.element(j);
        double h = e.length();
        int panels = std::max(1, static_cast<int>(std::ceil(h / 0.25)));
        Complex acc = 0.0;
        for (int p = 0; p < panels; ++p) {
            double t0 = static_cast<double>(p) / panels, t1 = static_cast<double>(p + 1) / panels;
            double half = 0.5 * (t1 - t0), mid = 0.5 * (t0 + t1);
            for (std::size_t q = 0; q < rule.x.size(); ++q)
                acc += half * rule.w[q] * g(e.at(mid + half * rule.x[q]));
        }
        out(j) = h * acc;
    }
    return out;
}

Eigen::MatrixXcd trace_samples_single_layer(const Mesh& mesh, const LaplaceFrequency& s,
                                            const Eigen::VectorXcd& density) {
    const int M = static_cast<int>(mesh.size());
    if (density.size() != M)
        throw std::invalid_argument("trace_samples_single_layer: density length mismatch");
    Eigen::MatrixXcd out(M, kTraceQuadPts);
    parallel_for(M, [&](int e) {
        for (int q = 0; q < kTraceQuadPts; ++q) {
            Point2 x = trace_point(mesh.element(e), q);
            Complex acc = 0.0;
            for (int j = 0; j < M; ++j) {
                if (density(j) == Complex(0.0)) continue;
                acc += density(j) * k0_arc_integral(s.s, mesh.element(j), x);
            }
            out(e, q) = acc / kTwoPi;
        }
    });
    return out;
}

Eigen::VectorXcd p1_l2_projection(const Mesh& mesh, const Eigen::MatrixXcd& samples) {
    const int M = static_cast<int>(mesh.size());
    if (samples.rows() != M || samples.cols() != kTraceQuadPts)
        throw std::invalid_argument("p1_l2_projection: sample shape mismatch");
    const GaussRule& rule = gauss_rule(kTraceQuadPts);
    Eigen::VectorXcd nodal(mesh.num_vertices());

    for (std::size_t k = 0; k < mesh.num_components(); ++k) {
        auto [first, last] = mesh.component_range(k);
        int nv = static_cast<int>(last - first) + 1;
        std::size_t base = mesh.element_vertices(first).first;
        Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(nv, nv);
        Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(nv);
        for (std::size_t j = first; j < last; ++j) {
            double h = mesh.h(j);
            int i0 = static_cast<int>(j - first);
            mass(i0, i0) += h / 3.0;
            mass(i0, i0 + 1) += h / 6.0;
            mass(i0 + 1, i0) += h / 6.0;
            mass(i0 + 1, i0 + 1) += h / 3.0;
            for (int q = 0; q < kTraceQuadPts; ++q) {
                double t = 0.5 * (1.0 + rule.x[q]);
                double w = 0.5 * rule.w[q] * h;
                rhs(i0) += w * (1.0 - t) * samples(static_cast<int>(j), q);
                rhs(i0 + 1) += w * t * samples(static_cast<int>(j), q);
            }
        }
        Eigen::VectorXcd sol = mass.ldlt().solve(rhs);
        nodal.segment(static_cast<Eigen::Index>(base), nv) = sol;
    }
    return nodal;
}

Eigen::VectorXcd boundary_trace_single_layer(const Mesh& mesh, const LaplaceFrequency& s,
                                             const Eigen::VectorXcd& density) {
    return p1_l2_projection(mesh, trace_samples_single_layer(mesh, s, density));
}

Eigen::VectorXcd evaluate_potential(const Mesh& mesh, const LaplaceFrequency& s,
                                    const Eigen::VectorXcd& density,
                                    const std::vector<Point2>& points) {
    const int M = static_cast<int>(mesh.size());
    if (density.size() != M) throw std::invalid_argument("evaluate_potential: density length mismatch");
    for (const Point2& p : points)
        if (mesh.distance(p) <= 1e-10)
            throw std::invalid_argument("evaluate_potential: point on the boundary");
    Eigen::VectorXcd out(static_cast<Eigen::Index>(points.size()));
    for (std::size_t k = 0; k < points.size(); ++k) {
        Complex acc = 0.0;
        for (int j = 0; j < M; ++j) {
            if (density(j) == Complex(0.0)) continue;
            acc += density(j) * k0_arc_integral(s.s, mesh.element(j), points[k]);
        }
        out(static_cast<Eigen::Index>(k)) = acc / kTwoPi;
    }
    return out;
}

Eigen::VectorXcd galerkin_solve(const GalerkinMatrix& V, const Eigen::VectorXcd& rhs) {
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(V.entries);
    double rc = lu.rcond();
    if (rc > 0.0 && 1.0 / rc > 1e12)
        std::cerr << "warning: Galerkin matrix condition estimate " << 1.0 / rc
                  << " at s = " << V.s << "\n";
    return lu.solve(rhs);
}

}  // namespace tdbem
