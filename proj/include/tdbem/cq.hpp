#ifndef TDBEM_CQ_HPP
#define TDBEM_CQ_HPP

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "tdbem/kernels.hpp"

namespace tdbem {

/// Butcher tableau of a stiffly accurate implicit RK method.
struct ButcherTableau {
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    Eigen::VectorXd c;
    int m = 0;
    double r_inf = 0.0;  // R(infinity) = 1 - b^T A^{-1} 1
};

/// Hard-coded Radau IIA tableau, m in {1, 2, 3}.
ButcherTableau radau_iia(int m);

/// BDF generating polynomial delta(zeta) = sum_{l=1}^p (1/l)(1-zeta)^l, p <= 2.
Complex bdf_symbol(int p, Complex zeta);

/// RK differentiation symbol
///   Delta(zeta) = A^{-1} - zeta/(1 - R(inf) zeta) A^{-1} 1 b^T A^{-1}.
Eigen::MatrixXcd rk_delta(const ButcherTableau& tab, Complex zeta);

enum class CQMethod { RadauIIA, BDF };

/// Time discretization descriptor. T = N*tau; lambda is the contour radius
/// of the scaled-roots-of-unity transform.
struct CQScheme {
    CQMethod method = CQMethod::RadauIIA;
    int order = 2;  // stage count m (RK) or BDF order p
    double tau = 0.0;
    int N = 0;
    double lambda = 0.0;  // 0: pick the default for N
    ButcherTableau tab;   // populated for RK

    int stages() const { return method == CQMethod::RadauIIA ? tab.m : 1; }
    double contour_radius() const;
};

CQScheme make_radau_scheme(int m, double tau, int N, double lambda = 0.0);
CQScheme make_bdf_scheme(int p, double tau, int N, double lambda = 0.0);

/// Stage-indexed time series: column n*m + l holds stage l of step n.
/// Payloads are dim-vectors; dim = 1 for scalar series.
struct StageSeries {
    int dim = 0;
    int m = 1;
    int steps = 0;  // N + 1
    Eigen::MatrixXcd data;

    StageSeries() = default;
    StageSeries(int dim_, int m_, int steps_)
        : dim(dim_), m(m_), steps(steps_), data(Eigen::MatrixXcd::Zero(dim_, m_ * steps_)) {}
    Eigen::MatrixXcd::ColXpr stage(int n, int l) { return data.col(n * m + l); }
    Eigen::MatrixXcd::ConstColXpr stage(int n, int l) const { return data.col(n * m + l); }
};

/// One contour node: zeta_l and the eigendecomposition of Delta(zeta_l)/tau
/// (trivial 1x1 for BDF). The frequencies are the eigenvalues.
struct FrequencyNode {
    Complex zeta;
    Eigen::VectorXcd freq;  // m eigenvalues of Delta(zeta)/tau, Re > 0
    Eigen::MatrixXcd Q;     // eigenvectors, Delta/tau = Q diag(freq) Q^{-1}
    Eigen::MatrixXcd Qinv;
};

/// Nodes l = 0..N with zeta_l = lambda e^{2 pi i l/(N+1)}. Eigenvector
/// condition above 1e8 triggers one retry with lambda perturbed by 1%;
/// a second failure is an error naming the offending node.
std::vector<FrequencyNode> contour_frequencies(const CQScheme& scheme);

/// Operator symbol: maps a dim-vector at frequency s to a (possibly
/// different-dimension) vector. Must be safe to call concurrently at
/// distinct frequencies.
using SymbolFn = std::function<Eigen::VectorXcd(Complex s, const Eigen::VectorXcd&)>;

/// Discrete forward convolution (K(d_t^tau) g)^n = sum_j W_{n-j} g^j via the
/// scaled-DFT route. out_dim is the payload dimension of the result.
StageSeries forward_cq_apply(const CQScheme& scheme, const SymbolFn& symbol, const StageSeries& g,
                             int out_dim);

/// All-at-once solve of K(d_t^tau) phi = rhs: per-frequency resolvent
/// applications through the eigendecomposition. Transformed rhs columns with
/// norm below drop_tol * (global max) are skipped (their solution is zero);
/// this suppresses round-off noise amplified by stiff resolvents.
StageSeries solve_cq(const CQScheme& scheme, const SymbolFn& resolvent, const StageSeries& rhs,
                     int out_dim, double drop_tol = 0.0);

/// First `count` convolution weights W_n of a scalar symbol; m x m matrices
/// (1 x 1 for BDF).
std::vector<Eigen::MatrixXcd> scalar_cq_weights(const CQScheme& scheme,
                                                const std::function<Complex(Complex)>& symbol,
                                                int count);

/// J_eta(s) = e^{-s eta}.
Complex shift_multiplier(double eta, Complex s);

}  // namespace tdbem

#endif
