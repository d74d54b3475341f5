#include <cdlab/identities.hpp>

#include <cdlab/canonical.hpp>
#include <cdlab/limit_kernels.hpp>
#include <cdlab/measures.hpp>
#include <cdlab/oprl.hpp>
#include <cdlab/opuc.hpp>
#include <cdlab/quadrature.hpp>
#include <cdlab/special_fn.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

namespace cdlab::identities {

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

cplx random_point(Rng& rng, double re, double im) { return {uniform(rng, -re, re), uniform(rng, -im, im)}; }

// Square lattice of complex points with |Re|, |Im| <= half.
std::vector<cplx> lattice(double half, int m) {
    std::vector<cplx> out;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            out.emplace_back(half * (2.0 * i - (m - 1)) / (m - 1), half * (2.0 * j - (m - 1)) / (m - 1));
    return out;
}

struct Suite {
    std::string module;
    std::vector<IdentityCheck>* out;

    void add(std::string name, double error, double tol) const {
        out->push_back({module, std::move(name), error, tol, error <= tol});
    }
};

double rel(cplx a, cplx b, double scale) { return std::abs(a - b) / scale; }

void special_suite(const Suite& s) {
    const auto pts = lattice(7.0, 11);
    double e1 = 0.0, e2 = 0.0;
    for (double nu : {0.0, 0.25, 1.0, 2.5}) {
        const double g = std::tgamma(nu + 1.0);
        for (const auto& x : pts) {
            const cplx f = g * special::bessel_f(nu, x);
            e1 = std::max(e1, rel(special::hyp0f1(nu + 1.0, -x * x / 4.0), f, 1.0 + std::abs(f)));
            const cplx lhs = std::exp(cplx(0.0, 1.0) * x) * special::kummer_m(nu + 0.5, 2.0 * nu + 1.0, cplx(0.0, -2.0) * x);
            e2 = std::max(e2, rel(lhs, f, 1.0 + std::abs(f)));
        }
    }
    s.add("0F1(nu+1, -x^2/4) = Gamma(nu+1) F_nu(x)", e1, 1e-12);
    s.add("Kummer-Bessel: e^{iz} M(nu+1/2, 2nu+1, -2iz) = Gamma(nu+1) F_nu(z)", e2, 1e-10);

    double e3 = 0.0;
    for (double a : {0.25, 0.75, 1.5, 2.0}) {
        for (const auto& z : pts) {
            const cplx avg = 0.5 * (special::kummer_m(a, 2.0 * a + 1.0, z) + special::kummer_m(a + 1.0, 2.0 * a + 1.0, z));
            const cplx m = special::kummer_m(a, 2.0 * a, z);
            e3 = std::max(e3, rel(avg, m, 1.0 + std::abs(m)));
        }
    }
    s.add("averaging: (M(a,2a+1,z) + M(a+1,2a+1,z))/2 = M(a,2a,z)", e3, 1e-10);
}

void kernel_suite(const Suite& s, Rng& rng) {
    const auto pts = lattice(2.1, 7);
    const auto spec = kernels::LimitKernelSpec::build(1.0, 1.0, 1.0);
    double e1 = 0.0;
    for (const auto& z : pts)
        for (const auto& w : pts) {
            const cplx d = z - std::conj(w);
            const cplx ref = std::abs(d) < 1e-12 ? cplx(1.0) : std::sin(d) / d;
            e1 = std::max(e1, rel(kernels::eval_limit_kernel(spec, z, w), ref, 1.0 + std::abs(ref)));
        }
    s.add("K_{1,1,1}(z,w) = sin(z - conj w)/(z - conj w)", e1, 1e-10);

    double e2 = 0.0;
    for (double beta : {1.0, 2.0, 3.0}) {
        const auto sp = kernels::LimitKernelSpec::build(1.0, 1.0, beta);
        for (const auto& z : pts)
            for (const auto& w : pts) {
                const cplx ref = kernels::eval_limit_kernel(sp, z, w);
                e2 = std::max(e2, rel(kernels::fh_bessel_kernel(beta, z, w), ref, 1.0 + std::abs(ref)));
            }
    }
    s.add("Bessel form of K_{1,1,beta} = limit kernel, beta in {1,2,3}", e2, 1e-10);

    double e3 = 0.0, e4 = 0.0;
    for (const auto& [sm, sp, b] : {std::tuple{0.5, 2.0, 1.5}, {0.0, 1.0, 2.0}, {1.0, 1.0, 0.5}, {2.0, 0.0, 1.0}}) {
        const auto k = kernels::LimitKernelSpec::build(sm, sp, b);
        e4 = std::max(e4, std::abs(kernels::eval_limit_kernel(k, 0.0, 0.0) - 1.0));
        for (int i = 0; i < 20; ++i) {
            const cplx z = random_point(rng, 3.0, 1.0), w = random_point(rng, 3.0, 1.0);
            const cplx a = kernels::eval_limit_kernel(k, z, w), c = std::conj(kernels::eval_limit_kernel(k, w, z));
            e3 = std::max(e3, rel(a, c, 1.0 + std::abs(a)));
        }
    }
    s.add("limit kernel Hermitian symmetry", e3, 1e-12);
    s.add("limit kernel K(0,0) = 1", e4, 1e-12);
}

oprl::RecurrenceCoeffs random_jacobi(Rng& rng, int n) {
    std::vector<double> a(n), b(n);
    for (int i = 0; i < n; ++i) {
        a[i] = uniform(rng, 0.5, 1.5);
        b[i] = uniform(rng, -0.5, 0.5);
    }
    return oprl::make_coeffs(a, b, "random");
}

void oprl_suite(const Suite& s, Rng& rng) {
    std::vector<oprl::RecurrenceCoeffs> recs{oprl::stieltjes_coeffs(measures::gallery("legendre"), 61),
                                            oprl::stieltjes_coeffs(measures::gallery("chebyshev"), 61),
                                            random_jacobi(rng, 61)};
    double e1 = 0.0;
    for (const auto& rec : recs) {
        for (int n : {1, 2, 5, 17, 40, 60}) {
            for (int i = 0; i < 12; ++i) {
                const cplx z = random_point(rng, 1.5, 0.5);
                const cplx w = i % 4 == 0 ? std::conj(z) : random_point(rng, 1.5, 0.5);
                const double scale = std::sqrt(oprl::cd_kernel(rec, n, z, z, oprl::CdMethod::sum).real() *
                                               oprl::cd_kernel(rec, n, w, w, oprl::CdMethod::sum).real());
                const cplx a = oprl::cd_kernel(rec, n, z, w, oprl::CdMethod::sum);
                const cplx b = oprl::cd_kernel(rec, n, z, w, oprl::CdMethod::cd_formula);
                e1 = std::max(e1, rel(a, b, scale));
            }
        }
    }
    s.add("CD sum = CD formula on the line, n <= 60", e1, 1e-10);

    const auto& leg = recs[0];
    const auto H = canonical::jacobi_hamiltonian(leg, 40);
    double e2 = 0.0;
    for (int i = 0; i < 30; ++i) {
        const double t = i < 5 ? double(3 * i + 1) : uniform(rng, 0.1, 30.0);
        const cplx z = random_point(rng, 1.0, 0.5), w = random_point(rng, 1.0, 0.5);
        const double scale = std::sqrt(oprl::interp_kernel(leg, t, z, z).real() * oprl::interp_kernel(leg, t, w, w).real());
        e2 = std::max(e2, rel(canonical::kernel_kh(H, t, z, w), oprl::interp_kernel(leg, t, z, w), scale));
    }
    s.add("Jacobi Hamiltonian kernel = piecewise-linear CD kernel", e2, 1e-8);
}

opuc::VerblunskyCoeffs random_verblunsky(Rng& rng, int n) {
    std::vector<cplx> a(n);
    for (auto& x : a) x = std::polar(uniform(rng, 0.0, 0.8), uniform(rng, -pi, pi));
    return opuc::make_verblunsky(a, "random");
}

void opuc_suite(const Suite& s, Rng& rng) {
    const auto v = random_verblunsky(rng, 61);
    double e1 = 0.0;
    for (int n : {1, 2, 7, 30, 60}) {
        for (int i = 0; i < 12; ++i) {
            const cplx zeta = std::exp(cplx(0.0, 1.0) * random_point(rng, pi, 0.3));
            const cplx omega = i % 4 == 0 ? 1.0 / std::conj(zeta) : std::exp(cplx(0.0, 1.0) * random_point(rng, pi, 0.3));
            const double scale = std::sqrt(opuc::cd_kernel_circle(v, n, zeta, zeta, oprl::CdMethod::sum).real() *
                                           opuc::cd_kernel_circle(v, n, omega, omega, oprl::CdMethod::sum).real());
            e1 = std::max(e1, rel(opuc::cd_kernel_circle(v, n, zeta, omega, oprl::CdMethod::sum),
                                  opuc::cd_kernel_circle(v, n, zeta, omega, oprl::CdMethod::cd_formula), scale));
        }
    }
    s.add("CD sum = CD formula on the circle, n <= 60", e1, 1e-10);

    const auto H = canonical::opuc_hamiltonian(v, 16);
    double e2 = 0.0, e3 = 0.0;
    for (int i = 0; i < 30; ++i) {
        const double t = i < 8 ? double(2 * i) : uniform(rng, 0.05, 15.0);
        const cplx z = random_point(rng, 2.0, 0.4), w = random_point(rng, 2.0, 0.4);
        const double scale = std::sqrt(std::abs(opuc::opuc_canonical_kernel(v, t, z, z)) *
                                       std::abs(opuc::opuc_canonical_kernel(v, t, w, w))) + 1e-300;
        const cplx k = opuc::opuc_canonical_kernel(v, t, z, w);
        if (t > 0.0) e2 = std::max(e2, rel(opuc::opuc_canonical_interp(v, t, z, w), k, scale));
        if (t > 0.0) e3 = std::max(e3, rel(canonical::kernel_kh(H, t, z, w), k, scale));
    }
    s.add("OPUC trigonometric interpolation of K(n+s)", e2, 1e-10);
    s.add("OPUC Hamiltonian kernel = K(n+s)", e3, 1e-8);
}

canonical::Hamiltonian random_hamiltonian(Rng& rng, int pieces, bool with_tail) {
    auto piece = [&](bool rank_one) {
        const double h1 = uniform(rng, 0.1, 1.0), h2 = uniform(rng, 0.1, 1.0);
        const double h3 = rank_one ? std::sqrt(h1 * h2) : uniform(rng, -0.9, 0.9) * std::sqrt(h1 * h2);
        return canonical::Piece{uniform(rng, 0.2, 1.0), {h1, h2, h3}};
    };
    std::vector<canonical::Piece> ps;
    for (int i = 0; i < pieces; ++i) ps.push_back(piece(i == 2));
    std::optional<std::vector<canonical::Piece>> tail;
    if (with_tail) tail = std::vector<canonical::Piece>{piece(false), piece(true)};
    return canonical::Hamiltonian(ps, tail);
}

double mat_err(const canonical::Mat2& a, const canonical::Mat2& b) {
    const double d = std::max({std::abs(a.m11 - b.m11), std::abs(a.m12 - b.m12), std::abs(a.m21 - b.m21),
                               std::abs(a.m22 - b.m22)});
    const double s = std::max({std::abs(b.m11), std::abs(b.m12), std::abs(b.m21), std::abs(b.m22), 1.0});
    return d / s;
}

canonical::Mat2 adjoint(const canonical::Mat2& m) {
    return {std::conj(m.m11), std::conj(m.m21), std::conj(m.m12), std::conj(m.m22)};
}

void canonical_suite(const Suite& s, Rng& rng) {
    using canonical::Mat2;
    const Mat2 J{0.0, -1.0, 1.0, 0.0};

    double e_det = 0.0, e_int = 0.0, e_mult = 0.0;
    for (int trial = 0; trial < 4; ++trial) {
        const auto H = random_hamiltonian(rng, 3 + 2 * trial, false);
        const double T = H.length();
        for (int i = 0; i < 5; ++i) {
            const cplx z = random_point(rng, 3.0, 1.0);
            e_det = std::max(e_det, std::abs(canonical::transfer_matrix(H, T, z).w.det() - 1.0));
        }
        // (W(z) J W(w)^* - J)/(z - conj w) = int W(s,z) H(s) W(s,w)^* ds
        for (int i = 0; i < 4; ++i) {
            const cplx z = random_point(rng, 2.0, 1.0), w = random_point(rng, 2.0, 1.0);
            const Mat2 wz = canonical::transfer_matrix(H, T, z).w, ww = canonical::transfer_matrix(H, T, w).w;
            Mat2 lhs = wz * J * adjoint(ww) + Mat2{-J.m11, -J.m12, -J.m21, -J.m22};
            const cplx d = z - std::conj(w);
            lhs = {lhs.m11 / d, lhs.m12 / d, lhs.m21 / d, lhs.m22 / d};
            Mat2 acc{0.0, 0.0, 0.0, 0.0};
            const auto& rule = quad::gauss_legendre(24);
            double pos = 0.0;
            for (const auto& p : H.pieces()) {
                const Mat2 h{p.h.h1, p.h.h3, p.h.h3, p.h.h2};
                for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
                    const double t = pos + 0.5 * p.length * (rule.nodes[k] + 1.0);
                    const double wt = 0.5 * p.length * rule.weights[k];
                    const Mat2 term = canonical::transfer_matrix(H, t, z).w * h * adjoint(canonical::transfer_matrix(H, t, w).w);
                    acc = acc + Mat2{wt * term.m11, wt * term.m12, wt * term.m21, wt * term.m22};
                }
                pos += p.length;
            }
            e_int = std::max(e_int, mat_err(acc, lhs));
        }
        // W(T) = W(s) * (factors after s) at a piece boundary s
        const cplx z = random_point(rng, 2.0, 1.0);
        double s_cut = 0.0;
        Mat2 rest;
        for (std::size_t k = 0; k < H.pieces().size(); ++k) {
            if (k < 2) s_cut += H.pieces()[k].length;
            else rest = rest * canonical::piece_factor(H.pieces()[k], z);
        }
        e_mult = std::max(e_mult, mat_err(canonical::transfer_matrix(H, s_cut, z).w * rest,
                                          canonical::transfer_matrix(H, T, z).w));
    }
    s.add("det W(t,z) = 1", e_det, 1e-8);
    s.add("integral identity (W(z)JW(w)* - J)/(z - conj w) = int W H W*", e_int, 1e-8);
    s.add("multiplicativity W(0,t) = W(0,s) W(s,t)", e_mult, 1e-10);

    // H = I/2: W(t,z) = [[cos(tz/2), sin(tz/2)], [-sin(tz/2), cos(tz/2)]]
    double e_half = 0.0;
    const canonical::Hamiltonian half({{1.7, {0.5, 0.5, 0.0}}, {2.3, {0.5, 0.5, 0.0}}});
    for (int i = 0; i < 10; ++i) {
        const cplx z = random_point(rng, 3.0, 1.0);
        const double t = uniform(rng, 0.0, 4.0);
        const cplx c = std::cos(t * z / 2.0), sn = std::sin(t * z / 2.0);
        e_half = std::max(e_half, mat_err(canonical::transfer_matrix(half, t, z).w, Mat2{c, sn, -sn, c}));
    }
    s.add("H = I/2 transfer matrix closed form", e_half, 1e-12);

    // rescaling: K_{A_r H}(t, z, w) = K_H(r t, z/r, w/r) / g(r); q_{A_r H}(z) = (g(r)/r) q_H(z/r)
    const ScaleFn g = [](double r) { return std::pow(r, 0.7) * std::log(std::numbers::e + r); };
    double e_k = 0.0, e_q = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
        const auto H = random_hamiltonian(rng, 4, true);
        const double r = uniform(rng, 0.5, 3.0);
        const auto A = canonical::rescale_h(H, g, r);
        for (int i = 0; i < 5; ++i) {
            const cplx z = random_point(rng, 2.0, 1.0), w = random_point(rng, 2.0, 1.0);
            const double t = uniform(rng, 0.5, 6.0);
            const cplx a = canonical::kernel_kh(A, t, z, w);
            const cplx b = canonical::kernel_kh(H, r * t, z / r, w / r) / g(r);
            const double scale = std::sqrt(std::abs(canonical::kernel_kh(A, t, z, z) * canonical::kernel_kh(A, t, w, w)));
            e_k = std::max(e_k, rel(a, b, scale));
        }
        for (int i = 0; i < 3; ++i) {
            const cplx z(uniform(rng, -1.0, 1.0), uniform(rng, 0.5, 1.5));
            // long enough that both Weyl disks are far below the tolerance
            double T = 20.0;
            canonical::WeylValue qa, qh;
            for (; T < 1e5; T *= 2.0) {
                qa = canonical::weyl(A, z, T, 1e-14);
                qh = canonical::weyl(H, z / r, r * T, 1e-14);
                if (qa.converged && qh.converged) break;
            }
            e_q = std::max(e_q, rel(qa.q, g(r) / r * qh.q, std::abs(qa.q)));
        }
    }
    s.add("kernel under weighted rescaling", e_k, 1e-10);
    s.add("Weyl coefficient under weighted rescaling", e_q, 1e-10);

    double e_mono = 0.0;
    {
        const auto H = random_hamiltonian(rng, 6, false);
        for (const cplx z : {cplx(0.7, 0.0), cplx(-1.2, 0.8)}) {
            double prev = 0.0;
            for (int i = 1; i <= 40; ++i) {
                const double k = canonical::kernel_kh(H, H.length() * i / 40.0, z, z).real();
                e_mono = std::max(e_mono, prev - k);
                prev = k;
            }
        }
    }
    s.add("K(t,z,z) nondecreasing in t", std::max(e_mono, 0.0), 1e-12);

    // free Schrodinger at x = 5
    const auto V = [](double) { return 0.0; };
    const cplx z(1.0, 0.2), w(2.0, 0.0);
    const auto k = canonical::schrodinger_kernel(V, 0.0, 5.0, z, w);
    const cplx exact = canonical::free_dirichlet_kernel(5.0, z, w);
    s.add("Schrodinger kernel: quadrature = Wronskian form (V = 0, x = 5)",
          std::abs(k.quadrature - k.wronskian) / std::abs(exact), 1e-8);
    s.add("Schrodinger kernel = closed form (V = 0, x = 5)", std::abs(k.quadrature - exact) / std::abs(exact), 1e-8);
}

}  // namespace

std::vector<std::string> modules() { return {"special_fn", "limit_kernels", "oprl", "opuc", "canonical"}; }

std::vector<IdentityCheck> run(const std::string& filter, std::uint64_t seed) {
    const auto mods = modules();
    if (!filter.empty() && std::find(mods.begin(), mods.end(), filter) == mods.end())
        throw DomainError("identities: unknown module '" + filter + "'");
    std::vector<IdentityCheck> out;
    Rng rng(seed);
    auto want = [&](const std::string& m) { return filter.empty() || filter == m; };
    if (want("special_fn")) special_suite({"special_fn", &out});
    if (want("limit_kernels")) kernel_suite({"limit_kernels", &out}, rng);
    if (want("oprl")) oprl_suite({"oprl", &out}, rng);
    if (want("opuc")) opuc_suite({"opuc", &out}, rng);
    if (want("canonical")) canonical_suite({"canonical", &out}, rng);
    return out;
}

}  // namespace cdlab::identities
