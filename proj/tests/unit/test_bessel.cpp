#include "adiacross/bessel.hpp"

#include "doctest.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

using adiacross::bessel_j;

namespace {

// J_n(x) = (1/2pi) int_0^{2pi} cos(n t - x sin t) dt; the periodic trapezoid
// rule converges geometrically.
double quadrature_j(int n, double x) {
    const int m = 512;
    double sum = 0.0;
    for (int i = 0; i < m; ++i) {
        const double t = 2.0 * std::numbers::pi * i / m;
        sum += std::cos(n * t - x * std::sin(t));
    }
    return sum / m;
}

}  // namespace

TEST_CASE("bessel_j matches tabulated values") {
    CHECK(bessel_j(0, 1.0) == doctest::Approx(0.7651976865579666).epsilon(1e-14));
    CHECK(bessel_j(1, 1.0) == doctest::Approx(0.4400505857449335).epsilon(1e-14));
    CHECK(bessel_j(2, 1.0) == doctest::Approx(0.1149034849319005).epsilon(1e-14));
    CHECK(bessel_j(0, 0.0) == 1.0);
    CHECK(bessel_j(3, 0.0) == 0.0);
}

TEST_CASE("bessel_j agrees with trapezoid quadrature") {
    for (int n = 0; n <= 30; ++n) {
        for (double x : {0.1, 0.5, 1.0, 2.5, 7.0, 20.0}) {
            const double ref = quadrature_j(n, x);
            CHECK(std::abs(bessel_j(n, x) - ref) <= 1e-13);
        }
    }
}

TEST_CASE("bessel_j agrees with the standard library") {
    for (int n = 0; n <= 64; n += 3) {
        for (double x : {0.3, 1.0, 4.0, 15.0, 49.0}) {
            const double ref = std::cyl_bessel_j(static_cast<double>(n), x);
            CHECK(std::abs(bessel_j(n, x) - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
        }
    }
}

TEST_CASE("bessel_j parity and sum rule") {
    for (int n = 0; n <= 10; ++n) {
        CHECK(bessel_j(n, -1.7) == doctest::Approx((n % 2 ? -1.0 : 1.0) * bessel_j(n, 1.7)));
    }
    // sum_n J_n(x)^2 over all integers n equals 1.
    double sum = bessel_j(0, 3.0) * bessel_j(0, 3.0);
    for (int n = 1; n <= 40; ++n) {
        sum += 2.0 * bessel_j(n, 3.0) * bessel_j(n, 3.0);
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("bessel_j rejects arguments outside its domain") {
    CHECK_THROWS_AS(bessel_j(-1, 1.0), std::domain_error);
    CHECK_THROWS_AS(bessel_j(65, 1.0), std::domain_error);
    CHECK_THROWS_AS(bessel_j(2, 51.0), std::domain_error);
}
