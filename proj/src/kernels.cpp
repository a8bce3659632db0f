#include "tdbem/kernels.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace tdbem {

namespace {

constexpr double kGamma = 0.57721566490153286060651209008240243;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Ascending series, adequate for |z| <= 2 where the cancellation between the
// log term and the correction sum stays below a few ulps.
Complex k0_series(Complex z) {
    Complex lz = std::log(2.0 / z) - kGamma;
    Complex q = 0.25 * z * z;
    Complex term = 1.0;        // (z^2/4)^k / (k!)^2
    double harmonic = 0.0;     // H_k
    Complex sum = lz;
    for (int k = 1; k < 60; ++k) {
        term *= q / static_cast<double>(k * k);
        harmonic += 1.0 / k;
        Complex add = term * (lz + harmonic);
        sum += add;
        if (std::abs(add) < kEps * std::abs(sum)) break;
    }
    return sum;
}

// Backward (Miller-type) recurrence with normalization sum, valid for
// Re z >= 0, |z| > 2. Starting index follows the empirical bound used by
// complex-Bessel codes for full double accuracy.
Complex k0_recurrence(Complex z) {
    double r = std::abs(z);
    double theta = std::arg(z);
    double a = 3.0 / (1.0 + r);
    double b = 14.7 / (28.0 + r);
    double c = 2.0 * M_2_SQRTPI / (kEps * std::pow(2.0 * r, 0.25));
    double m = std::ceil(
        0.485 / r * std::pow((std::log(c) + r * std::cos(a * theta) / (1.0 + 0.008 * r)) /
                                 (2.0 * std::cos(b * theta)),
                             2.0) +
        1.5);
    Complex k0 = 0.0, k1 = kEps, sum = 0.0;
    for (double n = m; n >= 1.0; n -= 1.0) {
        sum += k1;
        Complex next = (n * (2.0 * (z + n) * k1 - (n + 1.0) * k0)) / ((n - 0.5) * (n - 0.5));
        k0 = k1;
        k1 = next;
    }
    return std::exp(-z) * std::sqrt(M_PI / (2.0 * z)) * k1 / (sum + k1);
}

}  // namespace

LaplaceFrequency::LaplaceFrequency(Complex value) : s(value) {
    if (!(s.real() > 0.0)) throw std::invalid_argument("LaplaceFrequency: Re s must be positive");
}

Complex bessel_i0(Complex z) {
    Complex q = 0.25 * z * z;
    Complex term = 1.0, sum = 1.0;
    for (int k = 1; k < 80; ++k) {
        term *= q / static_cast<double>(k * k);
        sum += term;
        if (std::abs(term) < kEps * std::abs(sum)) break;
    }
    return sum;
}

Complex bessel_k0(Complex z) {
    if (!(z.real() > 0.0) || z == Complex(0.0))
        throw std::invalid_argument("bessel_k0: Re z must be positive");
    if (z.real() > 746.0) return 0.0;  // exp(-z) underflows
    if (std::abs(z) <= 2.0) return k0_series(z);
    return k0_recurrence(z);
}

Complex green2d(const LaplaceFrequency& s, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("green2d: r must be positive");
    return bessel_k0(s.s * r) / (2.0 * M_PI);
}

}  // namespace tdbem
