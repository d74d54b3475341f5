#include <cdlab/limit_kernels.hpp>

#include <doctest.h>

#include <cmath>
#include <random>

using namespace cdlab;
using namespace cdlab::kernels;

namespace {
std::vector<KernelSample> sample(const KernelFn& f, double half, int m) {
    std::vector<KernelSample> out;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            const cplx z = -half + 2 * half * i / (m - 1), w = -half + 2 * half * j / (m - 1);
            out.push_back({z, w, f(z, w)});
        }
    return out;
}
}  // namespace

TEST_SUITE("limit_kernels") {

TEST_CASE("K_{1,1,1} is the sine kernel in unscaled form") {
    const auto s = LimitKernelSpec::build(1, 1, 1);
    CHECK(std::abs(s.alpha()) < 1e-14);
    CHECK(s.kappa() == doctest::Approx(1.0).epsilon(1e-12));
    for (cplx z : {cplx(0.3), cplx(-1.2, 0.4), cplx(2.0, -0.1)}) {
        CHECK(std::abs(s.A(z) - std::cos(z)) < 1e-12);
        CHECK(std::abs(s.B(z) - std::sin(z)) < 1e-12);
    }
    CHECK(std::abs(eval_limit_kernel(s, 0.0, 0.0) - 1.0) < 1e-12);
    const cplx z = 0.3, w(0.1, -0.2), d = z - std::conj(w);
    CHECK(std::abs(eval_limit_kernel(s, z, w) - std::sin(d) / d) < 1e-12);
}

TEST_CASE("one-sided specs") {
    const auto s = LimitKernelSpec::build(0, 1, 1);
    CHECK(s.kernel_case() == KernelCase::one_sided);
    CHECK(std::abs(s.sigma()) == doctest::Approx(1.0 / pi).epsilon(1e-12));
    const double beta = 2.0;
    const auto s2 = LimitKernelSpec::build(0, 1, beta);
    CHECK(std::abs(s2.sigma()) == doctest::Approx(std::pow(std::tgamma(beta + 1) * std::tgamma(beta + 1) / pi, 1 / beta)).epsilon(1e-12));
    CHECK(std::abs(eval_limit_kernel(s2, 0.0, 0.0) - 1.0) < 1e-12);
    CHECK_THROWS_AS(LimitKernelSpec::build(0, 0, 1), DomainError);
    CHECK_THROWS_AS(LimitKernelSpec::build(1, 1, -1), DomainError);
}

TEST_CASE("even kappa duplication") {
    CHECK(fh_kappa_duplication(1.0) == doctest::Approx(1.0).epsilon(1e-12));
    for (double beta : {1.5, 2.0, 3.0})
        CHECK(LimitKernelSpec::build(1, 1, beta).kappa() == doctest::Approx(fh_kappa_duplication(beta)).epsilon(1e-10));
}

TEST_CASE("sine kernel values") {
    CHECK(std::abs(sine_kernel(0.0, 0.0) - 1.0) < 1e-15);
    CHECK(std::abs(sine_kernel(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(sine_kernel(0.5, 0.0) - 2.0 / pi) < 1e-15);
}

TEST_CASE("Bessel form matches the general evaluator") {
    for (double beta : {1.0, 2.0, 3.0}) {
        const auto s = LimitKernelSpec::build(1, 1, beta);
        CHECK(std::abs(fh_bessel_kernel(beta, 0.0, 0.0) - 1.0) < 1e-10);
        for (int i = -3; i <= 3; ++i)
            for (int j = -3; j <= 3; ++j) {
                const cplx z(i, 0.3 * j), w(0.5 * j, -0.2 * i);
                CHECK(std::abs(fh_bessel_kernel(beta, z, w) - eval_limit_kernel(s, z, w)) < 1e-10);
            }
    }
}

TEST_CASE("scaled kernel") {
    const auto s = LimitKernelSpec::build(1, 3, 1.5);
    const cplx z(0.4, 0.1), w(-0.3, 0.2);
    CHECK(std::abs(scaled_kernel(s, 1.0, z, w) - eval_limit_kernel(s, z, w)) < 1e-14);
    CHECK(std::abs(scaled_kernel(s, 0.0, z, w)) == 0.0);
    CHECK(std::abs(scaled_kernel(LimitKernelSpec::build(1, 1, 1), 2.0, 0.0, 0.0) - 2.0) < 1e-12);
}

TEST_CASE("Hermitian symmetry and positive diagonal") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2, 2);
    for (auto [sm, sp, b] : {std::tuple{1.0, 1.0, 1.0}, {1.0, 3.0, 1.0}, {0.0, 1.0, 1.5}, {2.0, 0.5, 2.5}}) {
        const auto s = LimitKernelSpec::build(sm, sp, b);
        for (int k = 0; k < 20; ++k) {
            const cplx z(u(rng), u(rng)), w(u(rng), u(rng));
            const cplx a = eval_limit_kernel(s, z, w), c = eval_limit_kernel(s, w, z);
            CHECK(std::abs(a - std::conj(c)) < 1e-10 * (1 + std::abs(a)));
            const cplx d = eval_limit_kernel(s, z, z);
            CHECK(std::abs(d.imag()) < 1e-10 * (1 + std::abs(d)));
            CHECK(d.real() > 0.0);
        }
    }
}

TEST_CASE("internal scale fit") {
    const auto s = LimitKernelSpec::build(1, 1, 1);
    const auto samples = sample(sine_kernel, 2.0, 9);
    const auto fit = fit_internal_scale(samples, s);
    CHECK(std::abs(fit.scale - pi) < 1e-6);
    CHECK(fit.residual <= 1e-10);
    const auto spec = LimitKernelSpec::build(1, 3, 1.5);
    const auto own = sample([&](cplx z, cplx w) { return eval_limit_kernel(spec, z, w); }, 1.5, 7);
    CHECK(fit_internal_scale(own, spec).scale == doctest::Approx(1.0).epsilon(1e-6));
    const auto scaled = sample([&](cplx z, cplx w) { return scaled_kernel(spec, 2.0, z, w) / std::pow(2.0, 1.5); }, 1.5, 7);
    CHECK(fit_internal_scale(scaled, spec).scale == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(sup_error(samples, sine_kernel) == 0.0);
}

TEST_CASE("scale candidates") {
    const auto c = scale_candidates(2.0);
    REQUIRE(c.size() == 3);
    CHECK(c[0].second == 1.0);
    CHECK(c[1].second == doctest::Approx(std::sqrt(pi)));
    CHECK(c[2].second == doctest::Approx(1 / std::sqrt(2.0)));
}
}
