#ifndef TDBEM_KERNELS_HPP
#define TDBEM_KERNELS_HPP

#include <complex>

namespace tdbem {

using Complex = std::complex<double>;

/// Laplace frequency with positive real part.
struct LaplaceFrequency {
    Complex s;
    explicit LaplaceFrequency(Complex value);
};

/// Modified Bessel function K_0(z) for Re z > 0. Underflows gracefully
/// to zero for very large |z|.
Complex bessel_k0(Complex z);

/// Modified Bessel function I_0(z) (entire; used by the kernel splitting).
Complex bessel_i0(Complex z);

/// 2D Laplace-domain fundamental solution of the wave equation at distance
/// r > 0: K_0(s r) / (2 pi), equal to (i/4) H_0^(1)(i s r) for Re s > 0.
Complex green2d(const LaplaceFrequency& s, double r);

}  // namespace tdbem

#endif
