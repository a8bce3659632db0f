#ifndef TDBEM_ASSEMBLY_HPP
#define TDBEM_ASSEMBLY_HPP

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "tdbem/geometry.hpp"
#include "tdbem/kernels.hpp"

namespace tdbem {

/// Number of Gauss points per element used for boundary traces and the P1
/// projection.
inline constexpr int kTraceQuadPts = 5;

/// Dense Galerkin matrix of the single-layer operator V(s) on P0 elements.
struct GalerkinMatrix {
    Eigen::MatrixXcd entries;  // M x M, symmetric (not conjugate-symmetric)
    Complex s;
};

/// Entry (i, j) = int_{E_i} int_{E_j} K0(s|x-y|)/(2 pi).
GalerkinMatrix assemble_single_layer(const Mesh& mesh, const LaplaceFrequency& s);

/// Cross-mesh Galerkin block: rows over `rows`, columns over `cols`
/// (for energy-norm differences of densities living on different meshes).
Eigen::MatrixXcd assemble_cross(const Mesh& rows, const Mesh& cols, const LaplaceFrequency& s);

/// Component j = int_{E_j} g(x) ds(x); composite Gauss, order >= 5.
Eigen::VectorXcd test_against_p0(const Mesh& mesh,
                                 const std::function<Complex(Point2)>& g);

/// Trace values of the single-layer potential at the kTraceQuadPts Gauss
/// points of every element: row e, column q = (V(s) density)(x_{e,q}).
Eigen::MatrixXcd trace_samples_single_layer(const Mesh& mesh, const LaplaceFrequency& s,
                                            const Eigen::VectorXcd& density);

/// L2(Gamma) projection of per-element Gauss-point samples onto P1 nodal
/// values (per component, free endpoint values).
Eigen::VectorXcd p1_l2_projection(const Mesh& mesh, const Eigen::MatrixXcd& samples);

/// Trace of the single-layer potential projected to P1 nodal values.
Eigen::VectorXcd boundary_trace_single_layer(const Mesh& mesh, const LaplaceFrequency& s,
                                             const Eigen::VectorXcd& density);

/// S(s) density at exterior points; rejects points within 1e-10 of Gamma.
Eigen::VectorXcd evaluate_potential(const Mesh& mesh, const LaplaceFrequency& s,
                                    const Eigen::VectorXcd& density,
                                    const std::vector<Point2>& points);

/// LU-backed Galerkin solve V_h(s) phi = rhs with a condition-number
/// warning (stderr, once per matrix) above 1e12.
Eigen::VectorXcd galerkin_solve(const GalerkinMatrix& V, const Eigen::VectorXcd& rhs);

}  // namespace tdbem

#endif
