#include "tdbem/cq.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>

#include "tdbem/parallel.hpp"

namespace tdbem {

namespace {

constexpr double kDefaultAliasing = 1e-8;  // lambda^{N+1} target
constexpr double kMaxEigCond = 1e8;

Eigen::MatrixXcd dft_matrix(int n) {
    // F(j, l) = omega^{j l}, omega = e^{2 pi i / n}
    Eigen::MatrixXcd F(n, n);
    for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
            double ang = 2.0 * M_PI * ((static_cast<long long>(j) * l) % n) / n;
            F(j, l) = Complex(std::cos(ang), std::sin(ang));
        }
    return F;
}

// hat_l = sum_n lambda^n omega^{l n} g^n, per stage column.
Eigen::MatrixXcd to_frequency(const StageSeries& g, double lambda, const Eigen::MatrixXcd& F) {
    const int steps = g.steps, m = g.m, dim = g.dim;
    Eigen::MatrixXcd hat(dim, m * steps);
    Eigen::MatrixXcd tmp(dim, steps);
    for (int j = 0; j < m; ++j) {
        double scale = 1.0;
        for (int n = 0; n < steps; ++n) {
            tmp.col(n) = scale * g.data.col(n * m + j);
            scale *= lambda;
        }
        Eigen::MatrixXcd ft = tmp * F;
        for (int l = 0; l < steps; ++l) hat.col(l * m + j) = ft.col(l);
    }
    return hat;
}

// g^n = lambda^{-n}/steps * sum_l omega^{-l n} hat_l, per stage column.
StageSeries from_frequency(const Eigen::MatrixXcd& hat, int dim, int m, int steps, double lambda,
                           const Eigen::MatrixXcd& F) {
    StageSeries out(dim, m, steps);
    Eigen::MatrixXcd tmp(dim, steps);
    for (int j = 0; j < m; ++j) {
        for (int l = 0; l < steps; ++l) tmp.col(l) = hat.col(l * m + j);
        Eigen::MatrixXcd ft = tmp * F.conjugate();
        double scale = 1.0 / steps;
        for (int n = 0; n < steps; ++n) {
            out.data.col(n * m + j) = scale * ft.col(n);
            scale /= lambda;
        }
    }
    return out;
}

bool exactly_real(const StageSeries& g) {
    return g.data.imag().cwiseAbs().maxCoeff() == 0.0;
}

// Shared engine for forward application and solving: per-frequency symbol
// action through the stage eigenbasis. When the input series is real the
// symbol is assumed conjugate-symmetric (K(conj s) = conj K(s), true for
// every real-kernel operator here) and only half the contour is visited.
StageSeries contour_apply(const CQScheme& scheme, const SymbolFn& symbol, const StageSeries& g,
                          int out_dim, double drop_tol) {
    if (g.steps != scheme.N + 1)
        throw std::invalid_argument("cq: series length does not match scheme");
    if (g.m != scheme.stages()) throw std::invalid_argument("cq: stage count mismatch");

    const int steps = g.steps, m = g.m;
    const double lambda = scheme.contour_radius();
    const std::vector<FrequencyNode> nodes = contour_frequencies(scheme);
    const Eigen::MatrixXcd F = dft_matrix(steps);
    const Eigen::MatrixXcd hat = to_frequency(g, lambda, F);

    const bool half = exactly_real(g);
    const int l_top = half ? steps / 2 : steps - 1;  // mirror l > l_top if half

    double drop_floor = 0.0;
    if (drop_tol > 0.0) {
        double mx = 0.0;
        for (int l = 0; l < steps; ++l)
            for (int j = 0; j < m; ++j) mx = std::max(mx, hat.col(l * m + j).norm());
        drop_floor = drop_tol * mx;
    }

    Eigen::MatrixXcd out_hat(out_dim, m * steps);
    std::exception_ptr failure;
    std::mutex failure_mtx;
    parallel_for(l_top + 1, [&](int l) {
        try {
            const FrequencyNode& node = nodes[l];
            Eigen::MatrixXcd U = hat.block(0, l * m, hat.rows(), m);
            Eigen::MatrixXcd Z = U * node.Qinv.transpose();
            Eigen::MatrixXcd Zout(out_dim, m);
            for (int j = 0; j < m; ++j) {
                if (drop_tol > 0.0 && Z.col(j).norm() <= drop_floor)
                    Zout.col(j).setZero();
                else
                    Zout.col(j) = symbol(node.freq(j), Z.col(j));
            }
            out_hat.block(0, l * m, out_dim, m) = Zout * node.Q.transpose();
        } catch (const std::exception& e) {
            std::lock_guard<std::mutex> lock(failure_mtx);
            if (!failure)
                failure = std::make_exception_ptr(std::runtime_error(
                    "cq: symbol failed at frequency node l=" + std::to_string(l) + ": " + e.what()));
        }
    });
    if (failure) std::rethrow_exception(failure);
    if (half)
        for (int l = l_top + 1; l < steps; ++l)
            out_hat.block(0, l * m, out_dim, m) =
                out_hat.block(0, (steps - l) * m, out_dim, m).conjugate();

    return from_frequency(out_hat, out_dim, m, steps, lambda, F);
}

}  // namespace

ButcherTableau radau_iia(int m) {
    ButcherTableau tab;
    tab.m = m;
    tab.A.resize(m, m);
    tab.b.resize(m);
    tab.c.resize(m);
    if (m == 1) {
        tab.A << 1.0;
        tab.b << 1.0;
        tab.c << 1.0;
    } else if (m == 2) {
        tab.A << 5.0 / 12.0, -1.0 / 12.0, 3.0 / 4.0, 1.0 / 4.0;
        tab.b << 3.0 / 4.0, 1.0 / 4.0;
        tab.c << 1.0 / 3.0, 1.0;
    } else if (m == 3) {
        const double r6 = std::sqrt(6.0);
        tab.A << (88.0 - 7.0 * r6) / 360.0, (296.0 - 169.0 * r6) / 1800.0, (-2.0 + 3.0 * r6) / 225.0,
            (296.0 + 169.0 * r6) / 1800.0, (88.0 + 7.0 * r6) / 360.0, (-2.0 - 3.0 * r6) / 225.0,
            (16.0 - r6) / 36.0, (16.0 + r6) / 36.0, 1.0 / 9.0;
        tab.b << (16.0 - r6) / 36.0, (16.0 + r6) / 36.0, 1.0 / 9.0;
        tab.c << (4.0 - r6) / 10.0, (4.0 + r6) / 10.0, 1.0;
    } else {
        throw std::invalid_argument("radau_iia: m must be 1, 2 or 3");
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(tab.A);
    if (!lu.isInvertible()) throw std::invalid_argument("radau_iia: singular A");
    tab.r_inf = 1.0 - tab.b.dot(lu.solve(Eigen::VectorXd::Ones(m)));
    return tab;
}

Complex bdf_symbol(int p, Complex zeta) {
    if (p < 1 || p > 2) throw std::invalid_argument("bdf_symbol: p must be 1 or 2 (A-stability)");
    Complex u = 1.0 - zeta;
    Complex d = u;
    if (p == 2) d += 0.5 * u * u;
    return d;
}

Eigen::MatrixXcd rk_delta(const ButcherTableau& tab, Complex zeta) {
    Eigen::MatrixXd Ainv = tab.A.fullPivLu().inverse();
    Eigen::VectorXd Ainv1 = Ainv * Eigen::VectorXd::Ones(tab.m);
    Eigen::RowVectorXd btAinv = tab.b.transpose() * Ainv;
    Complex factor = zeta / (1.0 - tab.r_inf * zeta);
    return Ainv.cast<Complex>() - factor * (Ainv1 * btAinv).cast<Complex>();
}

double CQScheme::contour_radius() const {
    if (lambda > 0.0) return lambda;
    return std::pow(kDefaultAliasing, 1.0 / (N + 1));
}

CQScheme make_radau_scheme(int m, double tau, int N, double lambda) {
    if (!(tau > 0.0) || N < 0) throw std::invalid_argument("make_radau_scheme: need tau > 0, N >= 0");
    if (lambda < 0.0 || lambda >= 1.0) throw std::invalid_argument("contour radius must be in (0,1)");
    CQScheme s;
    s.method = CQMethod::RadauIIA;
    s.order = m;
    s.tau = tau;
    s.N = N;
    s.lambda = lambda;
    s.tab = radau_iia(m);
    return s;
}

CQScheme make_bdf_scheme(int p, double tau, int N, double lambda) {
    if (p < 1 || p > 2) throw std::invalid_argument("make_bdf_scheme: p must be 1 or 2");
    if (!(tau > 0.0) || N < 0) throw std::invalid_argument("make_bdf_scheme: need tau > 0, N >= 0");
    if (lambda < 0.0 || lambda >= 1.0) throw std::invalid_argument("contour radius must be in (0,1)");
    CQScheme s;
    s.method = CQMethod::BDF;
    s.order = p;
    s.tau = tau;
    s.N = N;
    s.lambda = lambda;
    return s;
}

namespace {

std::vector<FrequencyNode> contour_frequencies_at(const CQScheme& scheme, double lambda,
                                                  int* bad_l) {
    const int steps = scheme.N + 1;
    const int m = scheme.stages();
    std::vector<FrequencyNode> nodes(steps);
    *bad_l = -1;
    for (int l = 0; l < steps; ++l) {
        double ang = 2.0 * M_PI * l / steps;
        Complex zeta = lambda * Complex(std::cos(ang), std::sin(ang));
        FrequencyNode& node = nodes[l];
        node.zeta = zeta;
        if (scheme.method == CQMethod::BDF) {
            node.freq.resize(1);
            node.freq(0) = bdf_symbol(scheme.order, zeta) / scheme.tau;
            node.Q = Eigen::MatrixXcd::Identity(1, 1);
            node.Qinv = node.Q;
        } else {
            Eigen::MatrixXcd delta = rk_delta(scheme.tab, zeta) / scheme.tau;
            Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(delta);
            if (eig.info() != Eigen::Success) {
                *bad_l = l;
                return nodes;
            }
            node.freq = eig.eigenvalues();
            node.Q = eig.eigenvectors();
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(node.Q);
            double smin = svd.singularValues()(m - 1);
            if (smin <= 0.0 || svd.singularValues()(0) / smin > kMaxEigCond) {
                *bad_l = l;
                return nodes;
            }
            node.Qinv = node.Q.fullPivLu().inverse();
        }
        for (int j = 0; j < m; ++j)
            if (!(node.freq(j).real() > 0.0)) {
                *bad_l = l;
                return nodes;
            }
    }
    return nodes;
}

}  // namespace

std::vector<FrequencyNode> contour_frequencies(const CQScheme& scheme) {
    double lambda = scheme.contour_radius();
    int bad = -1;
    std::vector<FrequencyNode> nodes = contour_frequencies_at(scheme, lambda, &bad);
    if (bad < 0) return nodes;
    // retry once with a slightly perturbed radius
    double retry = std::min(lambda * 1.01, 0.5 * (1.0 + lambda));
    nodes = contour_frequencies_at(scheme, retry, &bad);
    if (bad < 0) return nodes;
    throw std::runtime_error("contour_frequencies: ill-conditioned stage eigendecomposition at node l=" +
                             std::to_string(bad));
}

StageSeries forward_cq_apply(const CQScheme& scheme, const SymbolFn& symbol, const StageSeries& g,
                             int out_dim) {
    return contour_apply(scheme, symbol, g, out_dim, 0.0);
}

StageSeries solve_cq(const CQScheme& scheme, const SymbolFn& resolvent, const StageSeries& rhs,
                     int out_dim, double drop_tol) {
    return contour_apply(scheme, resolvent, rhs, out_dim, drop_tol);
}

std::vector<Eigen::MatrixXcd> scalar_cq_weights(const CQScheme& scheme,
                                                const std::function<Complex(Complex)>& symbol,
                                                int count) {
    const int steps = scheme.N + 1;
    if (count > steps) throw std::invalid_argument("scalar_cq_weights: count exceeds N+1");
    const int m = scheme.stages();
    const double lambda = scheme.contour_radius();
    const std::vector<FrequencyNode> nodes = contour_frequencies(scheme);

    std::vector<Eigen::MatrixXcd> khat(steps);
    for (int l = 0; l < steps; ++l) {
        Eigen::VectorXcd kf(m);
        for (int j = 0; j < m; ++j) kf(j) = symbol(nodes[l].freq(j));
        khat[l] = nodes[l].Q * kf.asDiagonal() * nodes[l].Qinv;
    }
    std::vector<Eigen::MatrixXcd> weights(count);
    double scale = 1.0 / steps;
    for (int n = 0; n < count; ++n) {
        Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(m, m);
        for (int l = 0; l < steps; ++l) {
            double ang = -2.0 * M_PI * ((static_cast<long long>(l) * n) % steps) / steps;
            w += Complex(std::cos(ang), std::sin(ang)) * khat[l];
        }
        weights[n] = scale * w;
        scale /= lambda;
    }
    return weights;
}

Complex shift_multiplier(double eta, Complex s) {
    if (eta < 0.0) throw std::invalid_argument("shift_multiplier: eta must be >= 0");
    return std::exp(-s * eta);
}

}  // namespace tdbem
