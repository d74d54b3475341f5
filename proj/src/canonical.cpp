#include <cdlab/canonical.hpp>

#include <cmath>
#include <limits>
#include <sstream>

namespace cdlab::canonical {

namespace {

void check_piece(const Piece& p) {
    if (!(p.length > 0.0) || !std::isfinite(p.length)) throw DomainError("Hamiltonian: piece length must be positive");
    const double tr = std::abs(p.h.trace());
    const double tol = 1e-14 * std::max(tr, 1e-300);
    if (p.h.h1 < -tol || p.h.h2 < -tol || p.h.det() < -tol * std::max(tr, 1.0))
        throw DomainError("Hamiltonian: piece matrix is not positive semidefinite");
}

// cos(sqrt x) and sin(sqrt x)/sqrt x; both even in sqrt x, so the branch is irrelevant.
void cs(cplx x, cplx& c, cplx& s) {
    if (std::abs(x) < 1e-3) {
        c = 1.0 - x / 2.0 + x * x / 24.0 - x * x * x / 720.0;
        s = 1.0 - x / 6.0 + x * x / 120.0 - x * x * x / 5040.0;
        return;
    }
    const cplx r = std::sqrt(x);
    c = std::cos(r);
    s = std::sin(r) / r;
}

}  // namespace

Mat2 operator*(const Mat2& a, const Mat2& b) {
    return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22, a.m21 * b.m11 + a.m22 * b.m21,
            a.m21 * b.m12 + a.m22 * b.m22};
}

Mat2 operator+(const Mat2& a, const Mat2& b) { return {a.m11 + b.m11, a.m12 + b.m12, a.m21 + b.m21, a.m22 + b.m22}; }

Hamiltonian::Hamiltonian(std::vector<Piece> pieces, std::optional<std::vector<Piece>> tail)
    : pieces_(std::move(pieces)), tail_(std::move(tail)) {
    for (const auto& p : pieces_) {
        check_piece(p);
        finite_length_ += p.length;
    }
    if (tail_) {
        if (tail_->empty()) throw DomainError("Hamiltonian: empty tail rule");
        for (const auto& p : *tail_) check_piece(p);
    }
}

double Hamiltonian::length() const noexcept {
    return tail_ ? std::numeric_limits<double>::infinity() : finite_length_;
}

std::vector<Piece> Hamiltonian::pieces_until(double t) const {
    if (!(t >= 0.0)) throw DomainError("Hamiltonian: t must be nonnegative");
    if (t > length() * (1.0 + 1e-14)) {
        std::ostringstream os;
        os << "Hamiltonian: t = " << t << " beyond the finite domain of length " << length();
        throw DomainError(os.str());
    }
    std::vector<Piece> out;
    double pos = 0.0;
    auto take = [&](const Piece& p) {
        if (pos >= t) return false;
        const double l = std::min(p.length, t - pos);
        if (l > 0.0) out.push_back({l, p.h});
        pos += p.length;
        return pos < t;
    };
    for (const auto& p : pieces_)
        if (!take(p)) return out;
    if (tail_) {
        while (true)
            for (const auto& p : *tail_)
                if (!take(p)) return out;
    }
    return out;
}

Mat2 piece_factor(const Piece& p, cplx z, Mat2* dz) {
    const double l = p.length;
    const auto& h = p.h;
    // N = -l H0 J, factor = exp(z N) = C I + S z N with theta^2 = l^2 z^2 det H0
    const Mat2 N{cplx(-l * h.h3), cplx(l * h.h1), cplx(-l * h.h2), cplx(l * h.h3)};
    cplx c, s;
    cs(l * l * z * z * h.det(), c, s);
    Mat2 e{c + s * z * N.m11, s * z * N.m12, s * z * N.m21, c + s * z * N.m22};
    if (dz) *dz = N * e;
    return e;
}

TransferMatrix transfer_matrix(const Hamiltonian& H, double t, cplx z) {
    TransferMatrix tm;
    tm.t = t;
    tm.z = z;
    for (const auto& p : H.pieces_until(t)) tm.w = tm.w * piece_factor(p, z);
    return tm;
}

std::pair<Mat2, Mat2> transfer_matrix_dz(const Hamiltonian& H, double t, cplx z) {
    Mat2 w;
    Mat2 d{0.0, 0.0, 0.0, 0.0};
    for (const auto& p : H.pieces_until(t)) {
        Mat2 de;
        const Mat2 e = piece_factor(p, z, &de);
        d = d * e + w * de;
        w = w * e;
    }
    return {w, d};
}

cplx kernel_kh(const Hamiltonian& H, double t, cplx z, cplx w) {
    const cplx wc = std::conj(w);
    if (std::abs(z - wc) < confluent_threshold) {
        const auto [m, d] = transfer_matrix_dz(H, t, 0.5 * (z + wc));
        return d.m22 * m.m21 - d.m21 * m.m22;
    }
    const Mat2 a = transfer_matrix(H, t, z).w;
    // real Hamiltonian: conj(w_ij(w)) = w_ij(conj w)
    const Mat2 b = transfer_matrix(H, t, wc).w;
    return (a.m22 * b.m21 - a.m21 * b.m22) / (z - wc);
}

cplx mobius(const Mat2& m, cplx tau) { return (m.m11 * tau + m.m12) / (m.m21 * tau + m.m22); }

WeylValue weyl(const Hamiltonian& H, cplx z, double t_max, double tol) {
    if (!(z.imag() > 0.0)) throw DomainError("weyl: Im z must be positive");
    if (!(t_max > 0.0)) throw DomainError("weyl: t_max must be positive");
    WeylValue wv;
    wv.z = z;
    wv.q = mobius(transfer_matrix(H, t_max, z).w, cplx(0.0, 1.0));
    const double k = kernel_kh(H, t_max, z, z).real();
    wv.disk_radius = k > 0.0 ? 1.0 / (2.0 * z.imag() * k) : std::numeric_limits<double>::infinity();
    wv.converged = wv.disk_radius < tol;
    return wv;
}

Hamiltonian rescale_h(const Hamiltonian& H, const ScaleFn& g, double r) {
    if (!(r > 0.0)) throw DomainError("rescale_h: r must be positive");
    const double gr = g(r);
    if (!(gr > 0.0)) throw DomainError("rescale_h: g(r) must be positive");
    auto map = [&](const std::vector<Piece>& src) {
        std::vector<Piece> out;
        out.reserve(src.size());
        for (const auto& p : src) out.push_back({p.length / r, Sym2{p.h.h1 * gr / r, p.h.h2 * r / gr, p.h.h3}});
        return out;
    };
    std::optional<std::vector<Piece>> tail;
    if (H.tail()) tail = map(*H.tail());
    return Hamiltonian(map(H.pieces()), tail);
}

Hamiltonian jacobi_hamiltonian(const oprl::RecurrenceCoeffs& rec, int n_max) {
    if (n_max < 1 || n_max > rec.size()) throw DomainError("jacobi_hamiltonian: n_max outside the declared length");
    const auto p = oprl::eval_polys(rec, n_max - 1, 0.0);
    const auto q = oprl::eval_second_kind(rec, n_max - 1, 0.0);
    if (p.rescaled || q.rescaled) throw NumericalError("jacobi_hamiltonian: polynomial values overflow at 0");
    std::vector<Piece> pieces;
    pieces.reserve(n_max);
    for (int n = 0; n < n_max; ++n) {
        const double pn = p.values[n].real(), qn = q.values[n].real();
        pieces.push_back({1.0, Sym2{qn * qn, pn * pn, -pn * qn}});
    }
    return Hamiltonian(std::move(pieces));
}

Hamiltonian opuc_hamiltonian(const opuc::VerblunskyCoeffs& v, int n_max) {
    if (n_max < 1 || n_max > v.size()) throw DomainError("opuc_hamiltonian: n_max outside the declared length");
    const auto s = opuc::szego_eval(v, n_max - 1, 1.0);
    std::vector<Piece> pieces;
    pieces.reserve(n_max);
    for (int n = 0; n < n_max; ++n) {
        const cplx phi = s.phi[n], psi = s.psi[n];
        const double off = (psi * std::conj(phi)).imag();
        pieces.push_back({1.0, Sym2{0.5 * std::norm(psi), 0.5 * std::norm(phi), 0.5 * off}});
    }
    return Hamiltonian(std::move(pieces));
}

std::vector<KernelSample> rescaled_kh(const Hamiltonian& H, double xi, const ScaleFn& h, double t,
                                      const PointPairs& grid) {
    const double diag = kernel_kh(H, t, xi, xi).real();
    if (!(diag > 0.0)) throw DomainError("rescaled_kh: zero diagonal");
    const double s = h(diag);
    std::vector<KernelSample> out;
    out.reserve(grid.size());
    for (const auto& [z, w] : grid) out.push_back({z, w, kernel_kh(H, t, xi + z / s, xi + w / s) / diag});
    return out;
}

namespace {

// State for the augmented Schrodinger system.
struct SState {
    cplx u, du, v, dv, uz, duz, I;
};

SState axpy(const SState& a, double h, const SState& k) {
    return {a.u + h * k.u, a.du + h * k.du, a.v + h * k.v, a.dv + h * k.dv, a.uz + h * k.uz, a.duz + h * k.duz, a.I + h * k.I};
}

struct SRun {
    cplx integral;
    cplx wronskian;
};

SRun integrate(const std::function<double(double)>& V, double beta_bc, double x, cplx z, cplx wc, bool confluent,
               int steps) {
    const cplx zz = confluent ? 0.5 * (z + wc) : z;
    const cplx ww = confluent ? zz : wc;
    auto rhs = [&](double y, const SState& s) {
        const double vy = V(y);
        SState d;
        d.u = s.du;
        d.du = (vy - zz) * s.u;
        d.v = s.dv;
        d.dv = (vy - ww) * s.v;
        d.uz = s.duz;
        d.duz = (vy - zz) * s.uz - s.u;
        d.I = s.u * s.v;
        return d;
    };
    SState s{std::sin(beta_bc), -std::cos(beta_bc), std::sin(beta_bc), -std::cos(beta_bc), 0.0, 0.0, 0.0};
    const double h = x / steps;
    for (int i = 0; i < steps; ++i) {
        const double y = i * h;
        const SState k1 = rhs(y, s);
        const SState k2 = rhs(y + h / 2, axpy(s, h / 2, k1));
        const SState k3 = rhs(y + h / 2, axpy(s, h / 2, k2));
        const SState k4 = rhs(y + h, axpy(s, h, k3));
        s.u += h / 6 * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u);
        s.du += h / 6 * (k1.du + 2.0 * k2.du + 2.0 * k3.du + k4.du);
        s.v += h / 6 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
        s.dv += h / 6 * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv);
        s.uz += h / 6 * (k1.uz + 2.0 * k2.uz + 2.0 * k3.uz + k4.uz);
        s.duz += h / 6 * (k1.duz + 2.0 * k2.duz + 2.0 * k3.duz + k4.duz);
        s.I += h / 6 * (k1.I + 2.0 * k2.I + 2.0 * k3.I + k4.I);
    }
    SRun r;
    r.integral = s.I;
    if (confluent)
        r.wronskian = s.uz * s.du - s.duz * s.u;
    else
        r.wronskian = (s.u * s.dv - s.du * s.v) / (z - wc);
    return r;
}

}  // namespace

SchrodingerKernel schrodinger_kernel(const std::function<double(double)>& V, double beta_bc, double x, cplx z, cplx w,
                                     const SchrodingerOptions& options) {
    if (!(x > 0.0)) throw DomainError("schrodinger_kernel: x must be positive");
    if (!(options.tol > 0.0)) throw DomainError("schrodinger_kernel: tol must be positive");
    const cplx wc = std::conj(w);
    const bool confluent = std::abs(z - wc) < confluent_threshold;
    const double freq = 1.0 + std::sqrt(std::abs(z)) + std::sqrt(std::abs(w));
    int steps = std::max(64, static_cast<int>(std::ceil(4.0 * x * freq)));
    SRun coarse = integrate(V, beta_bc, x, z, wc, confluent, steps);
    while (true) {
        if (2 * steps > options.max_steps) throw ConvergenceError("schrodinger_kernel: step control failed", std::abs(coarse.integral));
        SRun fine = integrate(V, beta_bc, x, z, wc, confluent, 2 * steps);
        steps *= 2;
        const double scale = std::max(1.0, std::abs(fine.integral));
        const double err = std::max(std::abs(fine.integral - coarse.integral), std::abs(fine.wronskian - coarse.wronskian)) / 15.0;
        if (err <= options.tol * scale) {
            SchrodingerKernel k;
            k.quadrature = fine.integral + (fine.integral - coarse.integral) / 15.0;
            k.wronskian = fine.wronskian + (fine.wronskian - coarse.wronskian) / 15.0;
            k.steps = steps;
            k.error_estimate = err / scale;
            if (std::abs(k.quadrature - k.wronskian) > 10.0 * options.tol * scale) {
                std::ostringstream os;
                os << "schrodinger_kernel: quadrature and Wronskian forms disagree by "
                   << std::abs(k.quadrature - k.wronskian);
                throw NumericalError(os.str());
            }
            return k;
        }
        coarse = fine;
    }
}

cplx free_dirichlet_solution(double x, cplx z) {
    const cplx q = x * x * z;
    if (std::abs(q) < 1.0) {
        // -x sum (-q)^k / (2k+1)!
        cplx term = 1.0, sum = 1.0;
        for (int k = 1; k < 40; ++k) {
            term *= -q / (double((2 * k) * (2 * k + 1)));
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        }
        return -x * sum;
    }
    const cplx r = std::sqrt(z);
    return -std::sin(x * r) / r;
}

cplx free_dirichlet_kernel(double x, cplx z, cplx w) {
    const cplx a = std::sqrt(z), b = std::sqrt(std::conj(w));
    if (std::abs(a) < 1e-12 || std::abs(b) < 1e-12) throw DomainError("free_dirichlet_kernel: z and w must be nonzero");
    auto sdiv = [x](cplx c) {  // sin(x c)/c
        if (std::abs(c) < 1e-8) return cplx(x) - x * x * x * c * c / 6.0;
        return std::sin(x * c) / c;
    };
    return (sdiv(a - b) - sdiv(a + b)) / (2.0 * a * b);
}

Mat2 convention_switch(const Mat2& t) {
    const cplx d = t.det();
    return {t.m22 / d, -t.m12 / d, -t.m21 / d, t.m11 / d};
}

}  // namespace cdlab::canonical
