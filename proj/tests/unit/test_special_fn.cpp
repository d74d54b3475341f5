#include <cdlab/special_fn.hpp>

#include <doctest.h>

#include <boost/math/special_functions/bessel.hpp>

#include <cmath>
#include <numbers>

using namespace cdlab;
using namespace cdlab::special;

TEST_SUITE("special_fn") {

TEST_CASE("gamma examples") {
    CHECK(std::abs(gamma_cx(1.0) - 1.0) < 1e-14);
    CHECK(std::abs(gamma_cx(0.5) - 1.7724538509055159) < 1e-14);
    // recurrence self-consistency off the real axis
    const cplx z(1.0, std::log(2.0) / (2 * pi));
    CHECK(std::abs(gamma_cx(z + 1.0) - z * gamma_cx(z)) < 1e-13 * std::abs(gamma_cx(z + 1.0)));
    for (double x : {0.3, 1.7, 4.5, 11.25}) CHECK(gamma_real(x) == doctest::Approx(std::tgamma(x)).epsilon(1e-13));
    CHECK_THROWS_AS(gamma_cx(-2.0), DomainError);
}

TEST_CASE("kummer examples") {
    const double z = 0.7;
    CHECK(std::abs(kummer_m(1.0, 2.0, z) - (std::exp(z) - 1.0) / z) < 1e-14);
    CHECK(std::abs(kummer_m(0.0, 1.5, cplx(3.0, -4.0)) - 1.0) == 0.0);
    SeriesPolicy doubled;
    doubled.max_terms = 4000;
    const cplx a(0.25, 0.11), w(0.0, -2.0);
    CHECK(std::abs(kummer_m(a, 1.5, w) - kummer_m(a, 1.5, w, doubled)) < 1e-13);
    // large negative argument goes through the Kummer transformation; M(1,1,z) = e^z
    CHECK(std::abs(kummer_m(1.0, 1.0, -60.0) - std::exp(-60.0)) < 1e-12 * std::exp(-60.0));
}

TEST_CASE("0F1 and F_nu against an independent Bessel implementation") {
    CHECK(std::abs(hyp0f1(1.0, 0.0) - 1.0) < 1e-15);
    CHECK(std::abs(bessel_f(0.0, 0.0) - 1.0) < 1e-15);
    for (double nu : {0.0, 0.5, 1.0, 1.25, 2.0, 3.5})
        for (double x : {0.1, 1.0, 2.3, 7.0, 15.0}) {
            const double j = std::cyl_bessel_j(nu, x);
            const double f = j / std::pow(x / 2.0, nu);
            CHECK(std::abs(bessel_f(nu, x).real() - f) < 1e-12 * (1.0 + std::abs(f)));
            CHECK(std::abs(hyp0f1(nu + 1.0, -x * x / 4.0) - std::tgamma(nu + 1.0) * bessel_f(nu, x)) < 1e-12);
        }
    CHECK(std::abs(bessel_f(0.5, pi)) < 1e-12);
}

TEST_CASE("bessel zeros") {
    for (int k = 1; k <= 3; ++k) {
        CHECK(bessel_zero(0.5, k) == doctest::Approx(k * pi).epsilon(1e-12));
        CHECK(bessel_zero(-0.5, k) == doctest::Approx((k - 0.5) * pi).epsilon(1e-12));
    }
    CHECK(std::abs(bessel_zero(0.0, 1) - 2.404825557695773) < 1e-10);
    for (double nu : {0.25, 1.0, 2.5})
        for (int k = 1; k <= 5; ++k)
            CHECK(bessel_zero(nu, k) == doctest::Approx(boost::math::cyl_bessel_j_zero(nu, k)).epsilon(1e-11));
    const auto zs = bessel_zeros(1.5, 6);
    for (std::size_t i = 1; i < zs.size(); ++i) CHECK(zs[i] > zs[i - 1]);
}

TEST_CASE("rising factorial cache") {
    RisingFactorialCache c(cplx(0.5, 0.0));
    CHECK(std::abs(c(0) - 1.0) == 0.0);
    CHECK(std::abs(c(3) - 0.5 * 1.5 * 2.5) < 1e-15);
    CHECK(c.values().size() >= 4);
}

TEST_CASE("invalid series policy") {
    SeriesPolicy p;
    p.max_terms = 0;
    CHECK_THROWS(p.validate());
}
}
