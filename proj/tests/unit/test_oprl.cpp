#include <cdlab/measures.hpp>
#include <cdlab/oprl.hpp>

#include <doctest.h>

#include <cmath>
#include <random>

using namespace cdlab;
using namespace cdlab::oprl;

namespace {
const RecurrenceCoeffs& cheb() {
    static const auto r = stieltjes_coeffs(measures::gallery("chebyshev"), 120);
    return r;
}
const RecurrenceCoeffs& leg() {
    static const auto r = stieltjes_coeffs(measures::gallery("legendre"), 120);
    return r;
}
}  // namespace

TEST_SUITE("oprl") {

TEST_CASE("classical recurrence coefficients") {
    CHECK(std::abs(cheb().a[0] - 1 / std::sqrt(2.0)) < 1e-10);
    for (int n = 2; n <= 120; ++n) CHECK(std::abs(cheb().a[n - 1] - 0.5) < 1e-10);
    for (int n = 1; n <= 120; ++n) {
        CHECK(cheb().b[n - 1] == 0.0);
        CHECK(leg().b[n - 1] == 0.0);
        CHECK(std::abs(leg().a[n - 1] - n / std::sqrt(4.0 * n * n - 1)) < 1e-9);
    }
    // non-even measure: power weight on [0,1] is the Jacobi weight (0, beta-1) shifted
    const auto p = stieltjes_coeffs(measures::gallery("power_hard_edge", {{"beta", 2.0}}), 10);
    CHECK(p.b[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(p.a[0] == doctest::Approx(std::sqrt(1.0 / 2.0 - 4.0 / 9.0)).epsilon(1e-12));
}

TEST_CASE("too small support") {
    const measures::Measure atom({{0.3, 1.0}}, {});
    CHECK_THROWS_AS(stieltjes_coeffs(atom, 1), DomainError);
    CHECK_THROWS(make_coeffs({1.0, -0.5}, {0.0, 0.0}, "bad"));
}

TEST_CASE("polynomial values") {
    const auto v = eval_polys(cheb(), 20, 0.0);
    CHECK(v.values[0] == cplx(1.0));
    for (int m = 1; m <= 10; ++m) {
        CHECK(std::abs(v.values[2 * m] - cplx(m % 2 ? -std::sqrt(2.0) : std::sqrt(2.0))) < 1e-12);
        CHECK(std::abs(v.values[2 * m - 1]) < 1e-12);
    }
    const cplx z(0.3, -0.4);
    CHECK(std::abs(eval_polys(leg(), 1, z).values[1] - std::sqrt(3.0) * z) < 1e-10);
    // orthonormality by Gauss quadrature on the truncated Jacobi matrix: checked through K
    const auto q = eval_second_kind(cheb(), 3, 0.0);
    CHECK(q.values[0] == cplx(0.0));
    CHECK(std::abs(q.values[1] - std::sqrt(2.0)) < 1e-10);
}

TEST_CASE("CD kernel") {
    CHECK(std::abs(cd_kernel(leg(), 1, cplx(0.3, 1), cplx(-2, 0.5)) - 1.0) < 1e-15);
    CHECK(std::abs(cd_kernel(cheb(), 5, 0.0, 0.0) - 5.0) < 1e-10);
    const cplx z(0.3, 0.1), w(-0.2);
    const cplx s = cd_kernel(leg(), 40, z, w, CdMethod::sum), f = cd_kernel(leg(), 40, z, w, CdMethod::cd_formula);
    CHECK(std::abs(s - f) < 1e-10 * std::abs(s));
    // Hermitian, positive diagonal
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int k = 0; k < 20; ++k) {
        const cplx a(u(rng), u(rng)), b(u(rng), u(rng));
        CHECK(std::abs(cd_kernel(leg(), 30, a, b) - std::conj(cd_kernel(leg(), 30, b, a))) < 1e-9 * std::abs(cd_kernel(leg(), 30, a, b)));
        CHECK(cd_kernel(leg(), 30, a, a).real() > 0.0);
    }
}

TEST_CASE("interpolated kernel") {
    for (int n : {1, 7, 30}) CHECK(std::abs(interp_kernel(leg(), n, 0.2, 0.1) - cd_kernel(leg(), n, 0.2, 0.1)) < 1e-12);
    CHECK(std::abs(interp_kernel(leg(), 0.5, 0.7, -0.1) - 0.5) < 1e-15);
    CHECK(std::abs(interp_kernel(cheb(), 4.25, 0.0, 0.0) - 3.5) < 1e-10);
}

TEST_CASE("rescaled kernel") {
    const ScaleFn h = [](double y) { return y / 2.0; };
    const auto one = rescaled_cd(leg(), 0.0, h, 50, {{0.0, 0.0}});
    CHECK(std::abs(one[0].value - 1.0) < 1e-14);
    const auto big = stieltjes_coeffs(measures::gallery("legendre"), 220);
    const auto s = rescaled_cd(big, 0.0, h, 200, {{1.0, 0.0}, {cplx(0.4, 0.3), cplx(-1.1, 0.2)}, {cplx(-1.1, 0.2), cplx(0.4, 0.3)}});
    CHECK(std::abs(s[0].value) <= 0.05);
    CHECK(std::abs(s[1].value - std::conj(s[2].value)) < 1e-12);
}

TEST_CASE("Nevai ratio") {
    CHECK(nevai_ratio(cheb(), 0.0, 100) <= 1.05);
    for (int n : {1, 2, 10, 55}) {
        CHECK(nevai_ratio(leg(), 0.3, n) >= 1.0 - 1e-14);
        CHECK(nevai_ratio(cheb(), 0.0, n) >= 1.0 - 1e-14);
    }
    // an atom at xi keeps K bounded below by 1/mass of the atom: the ratio tends to 1 and matches direct sums
    measures::Measure mu({{0.0, 0.5}}, {measures::AcPiece{-1.0, 1.0, [](double) { return 0.25; }}});
    const auto r = stieltjes_coeffs(mu, 60);
    for (int n : {5, 20, 50}) {
        const double direct = cd_kernel(r, n + 1, 0.0, 0.0, CdMethod::sum).real() / cd_kernel(r, n, 0.0, 0.0, CdMethod::sum).real();
        CHECK(nevai_ratio(r, 0.0, n) == doctest::Approx(direct).epsilon(1e-12));
        CHECK(cd_kernel(r, n, 0.0, 0.0).real() <= 1.0 / 0.5 + 1e-9);
    }
}

TEST_CASE("zeros") {
    CHECK(poly_zeros(leg(), 1)[0] == doctest::Approx(leg().b[0]));
    const auto z = poly_zeros(cheb(), 3);
    CHECK(z[0] == doctest::Approx(-std::sqrt(3.0) / 2).epsilon(1e-12));
    CHECK(std::abs(z[1]) < 1e-12);
    CHECK(z[2] == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-12));
    for (int n : {5, 17, 60}) {
        const auto a = poly_zeros(leg(), n), b = poly_zeros(leg(), n + 1);
        for (int i = 0; i < n; ++i) {
            CHECK(b[i] < a[i]);
            CHECK(a[i] < b[i + 1]);
        }
    }
}
}
