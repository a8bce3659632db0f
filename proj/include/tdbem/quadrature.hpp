#ifndef TDBEM_QUADRATURE_HPP
#define TDBEM_QUADRATURE_HPP

#include <vector>

#include "tdbem/geometry.hpp"
#include "tdbem/kernels.hpp"

namespace tdbem {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
};

/// Cached n-point Gauss-Legendre rule.
const GaussRule& gauss_rule(int n);

/// Nodes/weights of the n-point rule mapped to [a, b].
void gauss_on_interval(int n, double a, double b, std::vector<double>& x, std::vector<double>& w);

/// Line integral of the kernel over a segment:
///   int_F K0(s |x0 - y|) ds(y).
/// Robust for x0 anywhere, including on F itself (log singularity) and
/// close to F (near singularity). Oscillation-adaptive for large |s|.
Complex k0_arc_integral(Complex s, const Segment& f, Point2 x0);

/// Double integral of the kernel over an element pair:
///   int_E int_F K0(s |x - y|) ds(y) ds(x).
/// Collinear pairs (including identical, touching and overlapping ones)
/// reduce to a 1D correlation integral; general pairs use graded outer
/// panels with the line integral above on the inside.
Complex k0_pair_integral(Complex s, const Segment& e, const Segment& f);

/// int_0^eps K0(s u) u^j du for j in {0, 1}, by the ascending series.
/// Requires |s| * eps <= 1.
Complex k0_moment_small(Complex s, double eps, int j);

}  // namespace tdbem

#endif
