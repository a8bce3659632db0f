#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tdbem/kernels.hpp"

using namespace tdbem;

TEST_CASE("bessel_k0 pinned real values") {
    CHECK(std::abs(bessel_k0(1.0) - Complex(0.42102443824070833334)) < 1e-15);
    CHECK(std::abs(bessel_k0(0.01) - Complex(4.7212447301610949651)) < 1e-14);
    CHECK(bessel_k0(10.0).real() == doctest::Approx(1.7780062316167651811e-5).epsilon(1e-12));
    CHECK(bessel_k0(8.0).real() == doctest::Approx(1.464707052228153871e-4).epsilon(1e-12));
}

TEST_CASE("bessel_k0 pinned complex values") {
    Complex a = bessel_k0({2.0, 40.0});
    CHECK(std::abs(a - Complex(-0.026703819367320547192, -0.0022322189419143735282)) < 1e-15);
    Complex b = bessel_k0({0.5, -3.0});
    CHECK(std::abs(b - Complex(-0.37300490366737712534, -0.21559888402468485635)) < 1e-14);
    Complex c = bessel_k0({3.0, 100.0});
    CHECK(std::abs(c - Complex(0.0060620832655487619778, -0.0014718642637706216246)) < 1e-16);
}

TEST_CASE("bessel_k0 matches the integral oracle on a grid") {
    // spans both the series branch (|z| <= 2) and the recurrence branch
    const double res[] = {0.05, 0.3, 1.0, 2.5, 7.0};
    const double ims[] = {-30.0, -1.0, 0.0, 2.0, 55.0};
    for (double re : res)
        for (double im : ims) {
            Complex z(re, im);
            Complex ref = oracles::k0_reference(z);
            double scale = std::max(std::abs(ref), 1e-300);
            CHECK(std::abs(bessel_k0(z) - ref) / scale < 5e-13);
        }
}

TEST_CASE("bessel_k0 conjugation symmetry") {
    for (Complex z : {Complex(1.0, 2.0), Complex(0.2, 17.0), Complex(5.0, 90.0)}) {
        Complex p = bessel_k0(z);
        Complex q = bessel_k0(std::conj(z));
        CHECK(std::abs(q - std::conj(p)) <= 1e-16 * std::abs(p));
    }
}

TEST_CASE("bessel_k0 satisfies the modified Bessel equation") {
    // z^2 K'' + z K' - z^2 K = 0, centered differences
    for (Complex z : {Complex(1.5, 0.0), Complex(2.0, 5.0), Complex(0.7, -0.9)}) {
        const double d = 1e-4;
        Complex km = bessel_k0(z - d), k0 = bessel_k0(z), kp = bessel_k0(z + d);
        Complex d1 = (kp - km) / (2 * d);
        Complex d2 = (kp - 2.0 * k0 + km) / (d * d);
        Complex resid = z * z * d2 + z * d1 - z * z * k0;
        CHECK(std::abs(resid) < 1e-6 * std::abs(z * z * k0));
    }
}

TEST_CASE("bessel_k0 decays smoothly to zero for huge arguments") {
    CHECK(bessel_k0({800.0, 0.0}) == Complex(0.0, 0.0));
    CHECK(std::abs(bessel_k0({700.0, 0.0})) > 0.0);
    CHECK(std::isfinite(bessel_k0({746.0, 1e4}).real()));
}

TEST_CASE("bessel_i0 pinned values") {
    CHECK(bessel_i0(1.0).real() == doctest::Approx(1.2660658777520083356).epsilon(1e-14));
    CHECK(bessel_i0(2.5).real() == doctest::Approx(3.2898391440501230357).epsilon(1e-14));
    CHECK(bessel_i0(0.0) == Complex(1.0, 0.0));
}

TEST_CASE("green2d is K0(sr)/(2 pi)") {
    LaplaceFrequency s{Complex(1.2, 3.4)};
    double r = 0.75;
    Complex want = bessel_k0(s.s * r) / (2.0 * M_PI);
    CHECK(std::abs(green2d(s, r) - want) == 0.0);
}

TEST_CASE("domain guards") {
    CHECK_THROWS(LaplaceFrequency(Complex(0.0, 1.0)));
    CHECK_THROWS(LaplaceFrequency(Complex(-1.0, 0.0)));
    CHECK_THROWS(bessel_k0(Complex(-0.5, 2.0)));
    LaplaceFrequency s{Complex(1.0, 0.0)};
    CHECK_THROWS(green2d(s, 0.0));
    CHECK_THROWS(green2d(s, -1.0));
}
