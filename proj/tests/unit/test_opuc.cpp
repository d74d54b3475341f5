#include <cdlab/measures.hpp>
#include <cdlab/opuc.hpp>

#include <doctest.h>

#include <cmath>
#include <random>

using namespace cdlab;
using namespace cdlab::opuc;

namespace {
VerblunskyCoeffs random_alpha(int n, double r, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<cplx> a;
    while (static_cast<int>(a.size()) < n) {
        const cplx x(u(rng), u(rng));
        if (std::abs(x) < 1) a.push_back(r * x);
    }
    return make_verblunsky(a, "random");
}
}  // namespace

TEST_SUITE("opuc") {

TEST_CASE("Lebesgue polynomials") {
    const auto v = lebesgue(10);
    const cplx zeta(0.4, 0.3);
    const auto s = szego_eval(v, 9, zeta);
    for (int n = 0; n <= 9; ++n) {
        CHECK(std::abs(s.phi[n] - std::pow(zeta, n)) < 1e-14);
        CHECK(std::abs(s.phi_star[n] - 1.0) < 1e-14);
    }
    CHECK_THROWS(make_verblunsky({cplx(1.0, 0.0)}, "bad"));
}

TEST_CASE("reflection and modulus identities") {
    const auto v = random_alpha(12, 0.8, 11);
    const cplx zeta(0.4, 0.3);
    const auto s = szego_eval(v, 7, zeta);
    const auto r = szego_eval(v, 7, 1.0 / std::conj(zeta));
    CHECK(std::abs(s.phi_star[7] - std::pow(zeta, 7) * std::conj(r.phi[7])) < 1e-12);
    for (double th : {0.0, 0.7, 2.9}) {
        const auto u = szego_eval(v, 10, std::polar(1.0, th));
        CHECK(std::abs(std::norm(u.phi_star[10]) - std::norm(u.phi[10])) < 1e-11);
    }
}

TEST_CASE("circle CD kernel") {
    const auto v = lebesgue(50);
    CHECK(std::abs(cd_kernel_circle(v, 20, 1.0, 1.0) - 20.0) < 1e-12);
    const cplx z = std::polar(1.0, 0.1), w = std::polar(1.0, -0.2), q = z * std::conj(w);
    CHECK(std::abs(cd_kernel_circle(v, 20, z, w) - (1.0 - std::pow(q, 20)) / (1.0 - q)) < 1e-12);
    const auto r = random_alpha(45, 0.5, 5);
    const cplx a(0.3, 0.9), b = std::polar(1.0, 2.0);
    const cplx s = cd_kernel_circle(r, 40, a, b, CdMethod::sum), f = cd_kernel_circle(r, 40, a, b, CdMethod::cd_formula);
    CHECK(std::abs(s - f) < 1e-10 * std::abs(s));
}

TEST_CASE("rescaled circle kernel") {
    const auto v = lebesgue(10001);
    const ScaleFn h = [](double y) { return y / (2 * pi); };
    const auto s = rescaled_cd_circle(v, 0.0, h, 10000, {{0.0, 0.0}, {0.5, 0.0}, {cplx(0.3, 0.2), -0.4}, {-0.4, cplx(0.3, 0.2)}});
    CHECK(std::abs(s[0].value - 1.0) < 1e-14);
    CHECK(std::abs(s[1].value - std::sin(pi * 0.5) / (pi * 0.5)) < 1e-3);
    CHECK(std::abs(s[2].value - std::conj(s[3].value)) < 1e-12);
}

TEST_CASE("canonical kernels of the OPUC chain") {
    const auto v = random_alpha(25, 0.6, 9);
    const cplx z(0.3, 0.4), w(-0.5, 0.2);
    // level n at s -> 1 meets level n+1 at s = 0
    for (int n = 0; n < 20; ++n) {
        const cplx right = opuc_canonical_kernel(v, n + 1.0, z, w);
        CHECK(std::abs(right - opuc_canonical_kernel(v, n + 1.0 - 1e-12, z, w)) < 1e-9 * std::abs(right));
    }
    for (double t : {3.37, 10.37, 0.37})
        CHECK(std::abs(opuc_canonical_kernel(v, t, z, w) - opuc_canonical_interp(v, t, z, w)) < 1e-10 * std::abs(opuc_canonical_kernel(v, t, z, w)));
    const auto leb = lebesgue(20);
    for (double t : {0.5, 3.0, 7.25}) {
        const cplx d = opuc_canonical_kernel(leb, t, 0.4, 0.4);
        CHECK(std::abs(d.imag()) < 1e-12);
        CHECK(d.real() > 0.0);
    }
}

TEST_CASE("Verblunsky coefficients from a measure") {
    const auto v = verblunsky_from_measure(measures::gallery("circle_lebesgue"), 10);
    for (const auto& a : v.alpha) CHECK(std::abs(a) < 1e-12);
    const auto p = verblunsky_from_measure(measures::gallery("circle_power"), 15);
    for (const auto& a : p.alpha) CHECK(std::abs(a) < 1.0);
}
}
