#include <cdlab/limit_kernels.hpp>
#include <cdlab/measures.hpp>
#include <cdlab/oprl.hpp>
#include <cdlab/special_fn.hpp>
#include <cdlab/universality.hpp>

#include <doctest.h>

#include <cmath>

using namespace cdlab;
using namespace cdlab::universality;

namespace {
const oprl::RecurrenceCoeffs& leg() {
    static const auto r = oprl::stieltjes_coeffs(measures::gallery("legendre"), 260);
    return r;
}
const oprl::RecurrenceCoeffs& cheb() {
    static const auto r = oprl::stieltjes_coeffs(measures::gallery("chebyshev"), 260);
    return r;
}
const ScaleFn half = [](double y) { return y / 2.0; };
}  // namespace

TEST_SUITE("universality") {

TEST_CASE("grid") {
    const Grid g{2.0, 5, 0.0};
    const auto p = g.points();
    REQUIRE(p.size() == 5);
    CHECK(p[2] == cplx(0.0));
    CHECK(p[0] == -p[4]);
    const auto pairs = g.pairs();
    CHECK(pairs.size() == 25);
    CHECK(std::count(pairs.begin(), pairs.end(), std::pair<cplx, cplx>(0.0, 0.0)) == 1);
    CHECK(Grid{1.0, 3, 0.5}.points().size() == 9);
    CHECK_THROWS(Grid{-1.0, 5, 0.0}.validate());
    CHECK_THROWS(Grid{1.0, 2, 0.0}.validate());
}

TEST_CASE("bulk convergence for legendre") {
    const auto rep = convergence_study(oprl_source(leg(), 0.0, half), kernels::sine_kernel, "sine", {50, 100, 200}, Grid{});
    CHECK(rep.passed);
    for (std::size_t i = 1; i < rep.raw_errors.size(); ++i) CHECK(rep.raw_errors[i] < rep.raw_errors[i - 1]);
    CHECK(rep.raw_errors.back() <= 0.05);
    CHECK(rep.fitted_scale == doctest::Approx(1.0).epsilon(1e-2));
    CHECK(rep.samples.size() == 3);
}

TEST_CASE("target equal to the source gives zero error") {
    const auto src = oprl_source(leg(), 0.0, half);
    const KernelFn own = [&](cplx z, cplx w) { return src(80, {{z, w}})[0].value; };
    const auto rep = convergence_study(src, own, "self", {80}, Grid{1.0, 5, 0.0});
    CHECK(rep.raw_errors[0] == 0.0);
}

TEST_CASE("grid density robustness") {
    const auto src = oprl_source(leg(), 0.0, half);
    const auto a = convergence_study(src, kernels::sine_kernel, "sine", {60, 120}, Grid{2.0, 21, 0.0});
    const auto b = convergence_study(src, kernels::sine_kernel, "sine", {60, 120}, Grid{2.0, 41, 0.0});
    for (std::size_t i = 0; i < 2; ++i) CHECK(std::abs(b.raw_errors[i] / a.raw_errors[i] - 1.0) < 0.1);
}

TEST_CASE("parallel evaluation is deterministic") {
    const auto src = oprl_source(leg(), 0.0, half);
    ConvergenceOptions one{0.05, 1, {}}, four{0.05, 4, {}};
    const auto a = convergence_study(src, kernels::sine_kernel, "sine", {30, 60, 90}, Grid{2.0, 9, 0.0}, one);
    const auto b = convergence_study(src, kernels::sine_kernel, "sine", {30, 60, 90}, Grid{2.0, 9, 0.0}, four);
    CHECK(a.raw_errors == b.raw_errors);
    CHECK(a.sup_errors == b.sup_errors);
}

TEST_CASE("convergence study input checks") {
    const auto src = oprl_source(leg(), 0.0, half);
    CHECK_THROWS_AS(convergence_study(src, kernels::sine_kernel, "sine", {100, 50}, Grid{}), DomainError);
    CHECK_THROWS_AS(convergence_study(src, kernels::sine_kernel, "sine", {50}, Grid{2.0, 4, 0.0}), DomainError);
}

TEST_CASE("clock behavior for chebyshev") {
    ZeroStudyOptions o;
    o.mode = ZeroMode::clock;
    o.h = [](double y) { return y / pi; };
    const auto z = zero_study(cheb(), {100, 200}, o);
    CHECK(z.max_rel_error_ratios <= 0.05);
    // zeros of T_n at cos((2k-1) pi / (2n))
    for (const auto& [key, x] : z.zeros) {
        const int n = key.first;
        const double t = std::acos(x) * 2.0 * n / pi;
        CHECK(std::abs((t + 1.0) / 2.0 - std::round((t + 1.0) / 2.0)) < 1e-8);
    }
}

TEST_CASE("hard-edge ratios") {
    const auto rec = oprl::stieltjes_coeffs(measures::gallery("power_hard_edge", {{"beta", 1.5}}), 310);
    ZeroStudyOptions o;
    o.mode = ZeroMode::hard_edge;
    o.beta = 1.5;
    o.h = [](double y) { return std::pow(y, 1 / 1.5); };
    const auto z = zero_study(rec, {100, 200, 300}, o);
    CHECK(z.ratios.at({300, 2}) == doctest::Approx(4.0).epsilon(0.02));
    CHECK(z.max_rel_error_ratios <= 0.02);
    // ratio laws do not see the scale function
    auto o3 = o;
    o3.h = [](double y) { return 3.0 * std::pow(y, 1 / 1.5); };
    const auto z3 = zero_study(rec, {100, 200, 300}, o3);
    CHECK(z.ratios == z3.ratios);
    CHECK(z.max_rel_error_ratios == z3.max_rel_error_ratios);
}

TEST_CASE("even measure zeros") {
    const auto rec = oprl::stieltjes_coeffs(measures::gallery("even_fh", {{"beta", 2.0}}), 130);
    for (int n : {1, 2, 10, 31, 64}) {
        const auto zs = oprl::poly_zeros(rec, 2 * n + 1);
        CHECK(std::abs(zs[n]) < 1e-50);
        CHECK(oprl::eval_polys(rec, 2 * n + 1, 0.0).values[2 * n + 1] == cplx(0.0));
    }
    ZeroStudyOptions o;
    o.mode = ZeroMode::even_fh;
    o.beta = 2.0;
    o.h = [](double y) { return std::sqrt(y); };
    const auto z = zero_study(rec, {32, 64}, o);
    CHECK(z.max_rel_error_ratios <= 0.02);
    const auto jump = oprl::stieltjes_coeffs(measures::gallery("jump", {{"sigma_minus", 1}, {"sigma_plus", 3}}), 50);
    CHECK_THROWS_AS(zero_study(jump, {20}, ZeroStudyOptions{ZeroMode::even_fh, 0.0, half}), DomainError);
}

TEST_CASE("limit kernel zeros") {
    const auto s = kernels::LimitKernelSpec::build(1, 1, 1);
    const auto z = limit_kernel_zeros(s, 1.0, 0.0, 0.5, 10.0);
    REQUIRE(z.size() == 3);
    for (int k = 0; k < 3; ++k) CHECK(z[k] == doctest::Approx((k + 1) * pi).epsilon(1e-10));
    // zeros move continuously with the anchor: consecutive anchors give strictly interlacing zeros
    const auto j = kernels::LimitKernelSpec::build(1, 3, 1.0);
    const auto a = limit_kernel_zeros(j, 1.0, 0.4, -8.0, 8.0);
    const auto b = limit_kernel_zeros(j, 1.0, 0.6, -8.0, 8.0);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i] < b[i]);
        if (i + 1 < a.size()) CHECK(b[i] < a[i + 1]);
    }
}

TEST_CASE("Freud-Levin zeros for a jump") {
    const auto rec = oprl::stieltjes_coeffs(measures::gallery("jump", {{"sigma_minus", 1}, {"sigma_plus", 3}}), 210);
    ZeroStudyOptions o;
    o.mode = ZeroMode::freud_levin;
    o.sigma_minus = 1;
    o.sigma_plus = 3;
    o.h = [](double y) { return y; };
    o.internal_scale = pi;
    const auto z = zero_study(rec, {50, 100, 200}, o);
    CHECK(z.max_rel_error_ratios <= 0.02);
    bool spread = false;
    for (const auto& [k, v] : z.diagnostics) spread = spread || k == "kappa1_spread";
    CHECK(spread);
}

TEST_CASE("sparse Jacobi: free case") {
    const int n_max = 600;
    const auto sj = sparse_jacobi({0.0, 0.0, 0.0, 0.0}, {{}, 4.0}, n_max, 0.0);
    for (int n : {10, 101, 400}) {
        cplx direct = 0.0;
        const auto p = oprl::eval_polys(sj.rec, n, 0.0);
        for (int j = 0; j < n; ++j) direct += p.values[j] * std::conj(p.values[j]);
        CHECK(std::abs(oprl::cd_kernel(sj.rec, n, 0.0, 0.0) - direct) < 1e-10 * std::abs(direct));
        CHECK(direct.real() == doctest::Approx(std::ceil(n / 2.0)));
        CHECK(sj.diagnostics.predicted_kernel(n) == doctest::Approx(n / 2.0).epsilon(1e-12));
    }
    for (double x : sj.diagnostics.norm_sq) CHECK(x == doctest::Approx(0.5).epsilon(1e-12));
    // g and its inverse
    CHECK(sj.diagnostics.g_inverse(sj.diagnostics.g(123.4)) == doctest::Approx(123.4).epsilon(1e-12));
}

TEST_CASE("sparse Jacobi: sites and blocks") {
    std::vector<double> v;
    for (int j = 1; j <= 8; ++j) v.push_back(std::pow(j, -0.5));
    const auto sj = sparse_jacobi(v, {{}, 4.0}, 20000, 0.3);
    const auto& d = sj.diagnostics;
    REQUIRE(d.sites.size() >= 6);
    CHECK(d.sites[0] == 4);
    CHECK(d.sites[1] == 16);
    for (std::size_t j = 0; j < d.sites.size(); ++j) CHECK(sj.rec.b[d.sites[j] - 1] == v[j]);
    for (std::size_t j = 0; j + 1 < d.sites.size(); ++j)
        for (long n = d.sites[j]; n < d.sites[j + 1]; ++n)
            CHECK(std::abs(d.norm_sq[n] / d.norm_sq[d.sites[j]] - 1.0) < 1e-12);
    CHECK_THROWS_AS(sparse_jacobi(v, {{10, 5}, 0.0}, 100, 0.0), DomainError);
    CHECK_THROWS_AS(sparse_jacobi({1.0}, {{}, 4.0}, 100, 0.0), DomainError);
}
}
