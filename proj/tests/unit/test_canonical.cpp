#include <cdlab/canonical.hpp>
#include <cdlab/measures.hpp>
#include <cdlab/oprl.hpp>
#include <cdlab/opuc.hpp>

#include <doctest.h>

#include <cmath>
#include <random>

using namespace cdlab;
using namespace cdlab::canonical;

namespace {
const Hamiltonian half_identity(double len) { return Hamiltonian(std::vector<Piece>{{len, {0.5, 0.5, 0.0}}}); }

double mat_diff(const Mat2& a, const Mat2& b) {
    return std::max({std::abs(a.m11 - b.m11), std::abs(a.m12 - b.m12), std::abs(a.m21 - b.m21), std::abs(a.m22 - b.m22)});
}
}  // namespace

TEST_SUITE("canonical") {

TEST_CASE("indivisible piece of type 0") {
    const Hamiltonian H(std::vector<Piece>{{1.0, {1.0, 0.0, 0.0}}});
    const cplx z(0.7, -0.3);
    CHECK(mat_diff(transfer_matrix(H, 1.0, z).w, Mat2{1.0, z, 0.0, 1.0}) < 1e-15);
}

TEST_CASE("H = I/2 closed form and fine-step oracle") {
    const double t = 3.0;
    const cplx z(1.1, 0.4);
    const Mat2 expect{std::cos(t * z / 2.0), std::sin(t * z / 2.0), -std::sin(t * z / 2.0), std::cos(t * z / 2.0)};
    CHECK(mat_diff(transfer_matrix(half_identity(5.0), t, z).w, expect) < 1e-12);
    // product of 2000 short pieces, each exact, agrees too
    std::vector<Piece> fine(2000, Piece{t / 2000, {0.5, 0.5, 0.0}});
    CHECK(mat_diff(transfer_matrix(Hamiltonian(fine), t, z).w, expect) < 1e-11);
    CHECK(mat_diff(transfer_matrix(half_identity(5.0), 2.0, 0.0).w, Mat2{}) == 0.0);
}

TEST_CASE("kernel of H = I/2") {
    const auto H = half_identity(10.0);
    const cplx z(0.4, 0.2), w(-1.0, 0.5), d = z - std::conj(w);
    CHECK(std::abs(kernel_kh(H, 4.0, z, w) - std::sin(4.0 * d / 2.0) / d) < 1e-12);
    CHECK(std::abs(kernel_kh(H, 4.0, 0.0, 0.0) - 2.0) < 1e-12);
    CHECK(std::abs(kernel_kh(H, 0.0, z, w)) == 0.0);
    CHECK(std::abs(kernel_kh(H, 4.0, z, w) - std::conj(kernel_kh(H, 4.0, w, z))) < 1e-13);
}

TEST_CASE("Weyl coefficient") {
    const Hamiltonian H({}, std::vector<Piece>{{1.0, {0.5, 0.5, 0.0}}});
    const auto q = weyl(H, cplx(0.3, 1.0), 50.0, 1e-12);
    CHECK(std::abs(q.q - cplx(0, 1)) < 1e-12);
    // rank-one diag(0,1): W * tau -> 0 as the length grows
    const Hamiltonian R(std::vector<Piece>{{1e8, {0.0, 1.0, 0.0}}});
    CHECK(std::abs(mobius(transfer_matrix(R, 1e8, cplx(0, 1)).w, cplx(0, 1))) < 1e-7);
    // Jacobi embedding of chebyshev reproduces its Cauchy transform
    const auto rec = oprl::stieltjes_coeffs(measures::gallery("chebyshev"), 220);
    const auto J = jacobi_hamiltonian(rec, 200);
    const auto m = weyl(J, cplx(0, 1), 200.0, 1e-6);
    CHECK(std::abs(m.q - measures::cauchy_transform(measures::gallery("chebyshev"), cplx(0, 1))) < 1e-6);
}

TEST_CASE("weighted rescaling") {
    const Hamiltonian H(std::vector<Piece>{{1.0, {0.8, 0.3, 0.2}}, {2.0, {0.1, 0.5, -0.1}}});
    const auto same = rescale_h(H, [](double r) { return r; }, 1.0);
    for (std::size_t i = 0; i < H.pieces().size(); ++i) {
        CHECK(same.pieces()[i].length == H.pieces()[i].length);
        CHECK(same.pieces()[i].h.h1 == H.pieces()[i].h.h1);
    }
    const auto I = rescale_h(half_identity(4.0), [](double r) { return r; }, 3.0);
    CHECK(I.pieces()[0].length == doctest::Approx(4.0 / 3.0));
    CHECK(I.pieces()[0].h.h1 == doctest::Approx(0.5));
    const auto G = rescale_h(H, [](double r) { return r * r * std::log(2.0 + r); }, 7.0);
    for (std::size_t i = 0; i < H.pieces().size(); ++i)
        CHECK(G.pieces()[i].h.det() == doctest::Approx(H.pieces()[i].h.det()).epsilon(1e-12));
}

TEST_CASE("Jacobi Hamiltonian") {
    const auto rec = oprl::stieltjes_coeffs(measures::gallery("chebyshev"), 40);
    const auto J = jacobi_hamiltonian(rec, 30);
    CHECK(J.pieces()[0].h.h1 == doctest::Approx(0.0));
    CHECK(J.pieces()[0].h.h2 == doctest::Approx(1.0));
    CHECK(J.pieces()[1].h.h1 == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(std::abs(J.pieces()[1].h.h2) < 1e-12);
    const auto leg = oprl::stieltjes_coeffs(measures::gallery("legendre"), 40);
    const auto L = jacobi_hamiltonian(leg, 30);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1, 1), tt(0, 30);
    for (int k = 0; k < 20; ++k) {
        const cplx z(u(rng), u(rng)), w(u(rng), u(rng));
        const double t = tt(rng);
        const cplx a = kernel_kh(L, t, z, w), b = oprl::interp_kernel(leg, t, z, w);
        CHECK(std::abs(a - b) < 1e-8 * (1 + std::abs(b)));
    }
}

TEST_CASE("OPUC Hamiltonian") {
    const auto leb = opuc_hamiltonian(opuc::lebesgue(10), 8);
    for (const auto& p : leb.pieces()) {
        CHECK(p.h.h1 == doctest::Approx(p.h.h2));
        CHECK(std::abs(p.h.h3) < 1e-15);
        CHECK(p.h.det() >= -1e-15);
    }
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-0.6, 0.6);
    std::vector<cplx> a;
    for (int i = 0; i < 16; ++i) a.push_back({u(rng), u(rng)});
    const auto v = opuc::make_verblunsky(a, "random");
    const auto H = opuc_hamiltonian(v, 15);
    for (const auto& p : H.pieces()) CHECK(p.h.det() >= -1e-12);
    const cplx z(0.3, 0.2), w(-0.4, 0.1);
    for (int n = 1; n <= 15; ++n) {
        const cplx ref = opuc::opuc_canonical_kernel(v, n, z, w);
        CHECK(std::abs(kernel_kh(H, n, z, w) - ref) < 1e-8 * std::abs(ref));
    }
}

TEST_CASE("free Schrodinger") {
    const auto V = [](double) { return 0.0; };
    const cplx z(1.0, 0.2), w(2.0, 0.0);
    const auto k = schrodinger_kernel(V, 0.0, 5.0, z, w);
    const cplx exact = free_dirichlet_kernel(5.0, z, w);
    CHECK(std::abs(k.quadrature - exact) < 1e-8 * std::abs(exact));
    CHECK(std::abs(k.wronskian - exact) < 1e-8 * std::abs(exact));
    const cplx s = std::sqrt(z);
    CHECK(std::abs(free_dirichlet_solution(2.0, z) + std::sin(2.0 * s) / s) < 1e-12);
    const auto d = schrodinger_kernel(V, 0.0, 3.0, 1.5, 1.5);
    CHECK(std::abs(d.quadrature.imag()) < 1e-12);
    CHECK(d.quadrature.real() > 0.0);
}

TEST_CASE("convention switch inverts a unimodular matrix") {
    const Mat2 t{cplx(2, 1), cplx(1, 0), cplx(3, 0), cplx(0.8, 0.4)};
    const cplx f = 1.0 / std::sqrt(t.det());
    const Mat2 s = t * Mat2{f, 0.0, 0.0, f};
    const Mat2 p = convention_switch(s) * s;
    CHECK(mat_diff(p, Mat2{}) < 1e-12);
}
}
