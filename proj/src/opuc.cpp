#include <cdlab/opuc.hpp>

#include <cmath>
#include <sstream>

namespace cdlab::opuc {

namespace {

void check_n(const VerblunskyCoeffs& v, int n, const char* who) {
    if (n < 0 || n > v.size()) {
        std::ostringstream os;
        os << who << ": n = " << n << " outside the declared length " << v.size();
        throw DomainError(os.str());
    }
}

// phi_n and phi_n^* at zeta, no history kept.
void szego_last(const VerblunskyCoeffs& v, int n, cplx zeta, cplx& phi, cplx& phi_star) {
    phi = 1.0;
    phi_star = 1.0;
    for (int k = 0; k < n; ++k) {
        const cplx a = v.alpha[k];
        const double rho = std::sqrt(1.0 - std::norm(a));
        const cplx np = (zeta * phi - std::conj(a) * phi_star) / rho;
        const cplx ns = (phi_star - a * zeta * phi) / rho;
        phi = np;
        phi_star = ns;
    }
}

// Level-n kernel at s = 0 with d = z - conj w away from 0.
cplx level_kernel(const VerblunskyCoeffs& v, int n, double s, cplx z, cplx w) {
    const cplx d = z - std::conj(w);
    cplx pz, psz, pw, psw;
    szego_last(v, n, std::exp(cplx(0.0, 1.0) * z), pz, psz);
    szego_last(v, n, std::exp(cplx(0.0, 1.0) * w), pw, psw);
    const cplx I(0.0, 1.0);
    return std::exp(-I * double(n) * d / 2.0) / (2.0 * I * d) *
           (std::exp(I * s * d / 2.0) * pz * std::conj(pw) - std::exp(-I * s * d / 2.0) * psz * std::conj(psw));
}

cplx confluent_kernel(const VerblunskyCoeffs& v, int n, double s, cplx z, cplx w) {
    const cplx I(0.0, 1.0);
    const cplx zeta = std::exp(I * z), omega = std::exp(I * w);
    cplx k = (1.0 - s) / 2.0 * cd_kernel_circle(v, n, zeta, omega, CdMethod::sum);
    if (s > 0.0) k += s / 2.0 * cd_kernel_circle(v, n + 1, zeta, omega, CdMethod::sum);
    return k;
}

}  // namespace

void VerblunskyCoeffs::validate() const {
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (!(std::abs(alpha[i]) < 1.0)) {
            std::ostringstream os;
            os << "VerblunskyCoeffs: |alpha_" << i << "| = " << std::abs(alpha[i]) << " is not below 1";
            throw DomainError(os.str());
        }
    }
}

VerblunskyCoeffs make_verblunsky(std::vector<cplx> alpha, std::string source) {
    VerblunskyCoeffs v{std::move(alpha), std::move(source)};
    v.validate();
    return v;
}

VerblunskyCoeffs lebesgue(int n) { return VerblunskyCoeffs{std::vector<cplx>(std::max(n, 0), 0.0), "lebesgue"}; }

SzegoValues szego_eval(const VerblunskyCoeffs& v, int n, cplx zeta) {
    check_n(v, n, "szego_eval");
    SzegoValues s;
    s.zeta = zeta;
    s.phi.assign(n + 1, 1.0);
    s.phi_star.assign(n + 1, 1.0);
    s.psi.assign(n + 1, 1.0);
    s.psi_star.assign(n + 1, 1.0);
    for (int k = 0; k < n; ++k) {
        const cplx a = v.alpha[k];
        const double rho = std::sqrt(1.0 - std::norm(a));
        s.phi[k + 1] = (zeta * s.phi[k] - std::conj(a) * s.phi_star[k]) / rho;
        s.phi_star[k + 1] = (s.phi_star[k] - a * zeta * s.phi[k]) / rho;
        s.psi[k + 1] = (zeta * s.psi[k] + std::conj(a) * s.psi_star[k]) / rho;
        s.psi_star[k + 1] = (s.psi_star[k] + a * zeta * s.psi[k]) / rho;
    }
    return s;
}

cplx cd_kernel_circle(const VerblunskyCoeffs& v, int n, cplx zeta, cplx omega, CdMethod method) {
    if (n < 0) throw DomainError("cd_kernel_circle: n must be nonnegative");
    check_n(v, n == 0 ? 0 : n - 1, "cd_kernel_circle");
    if (n == 0) return 0.0;
    const cplx denom = 1.0 - zeta * std::conj(omega);
    if (method == CdMethod::sum || std::abs(denom) < confluent_threshold) {
        // the recursion only needs alpha_0 .. alpha_{n-2}
        cplx pz = 1.0, psz = 1.0, pw = 1.0, psw = 1.0;
        cplx s = 1.0;
        for (int k = 0; k + 1 < n; ++k) {
            const cplx a = v.alpha[k];
            const double rho = std::sqrt(1.0 - std::norm(a));
            const cplx npz = (zeta * pz - std::conj(a) * psz) / rho;
            const cplx nsz = (psz - a * zeta * pz) / rho;
            const cplx npw = (omega * pw - std::conj(a) * psw) / rho;
            const cplx nsw = (psw - a * omega * pw) / rho;
            pz = npz;
            psz = nsz;
            pw = npw;
            psw = nsw;
            s += pz * std::conj(pw);
        }
        return s;
    }
    check_n(v, n, "cd_kernel_circle");
    cplx pz, psz, pw, psw;
    szego_last(v, n, zeta, pz, psz);
    szego_last(v, n, omega, pw, psw);
    return (psz * std::conj(psw) - pz * std::conj(pw)) / denom;
}

std::vector<KernelSample> rescaled_cd_circle(const VerblunskyCoeffs& v, double xi, const ScaleFn& h, int n,
                                             const PointPairs& grid) {
    if (n < 1) throw DomainError("rescaled_cd_circle: n must be positive");
    const cplx I(0.0, 1.0);
    const cplx base = std::exp(I * xi);
    const double kn = cd_kernel_circle(v, n, base, base).real();
    if (!(kn > 0.0)) throw DomainError("rescaled_cd_circle: zero diagonal");
    const double scale = h(kn);
    std::vector<KernelSample> out;
    out.reserve(grid.size());
    for (const auto& [z, w] : grid) {
        const cplx zeta = std::exp(I * (xi + z / scale));
        const cplx omega = std::exp(I * (xi + w / scale));
        const cplx pref = std::exp(-I * double(n) * (z - std::conj(w)) / (2.0 * scale));
        out.push_back({z, w, pref * cd_kernel_circle(v, n, zeta, omega) / kn});
    }
    return out;
}

cplx opuc_canonical_kernel(const VerblunskyCoeffs& v, double t, cplx z, cplx w) {
    if (!(t >= 0.0)) throw DomainError("opuc_canonical_kernel: t must be nonnegative");
    const int n = static_cast<int>(std::floor(t));
    const double s = t - n;
    check_n(v, s > 0.0 ? n + 1 : n, "opuc_canonical_kernel");
    if (std::abs(z - std::conj(w)) < confluent_threshold) return confluent_kernel(v, n, s, z, w);
    return level_kernel(v, n, s, z, w);
}

cplx opuc_canonical_interp(const VerblunskyCoeffs& v, double t, cplx z, cplx w) {
    if (!(t >= 0.0)) throw DomainError("opuc_canonical_interp: t must be nonnegative");
    const int n = static_cast<int>(std::floor(t));
    const double s = t - n;
    check_n(v, s > 0.0 ? n + 1 : n, "opuc_canonical_interp");
    const cplx d = z - std::conj(w);
    if (std::abs(d) < confluent_threshold) return confluent_kernel(v, n, s, z, w);
    const cplx k0 = level_kernel(v, n, 0.0, z, w);
    if (s == 0.0) return k0;
    const cplx k1 = level_kernel(v, n + 1, 0.0, z, w);
    return (std::sin((1.0 - s) * d / 2.0) * k0 + std::sin(s * d / 2.0) * k1) / std::sin(d / 2.0);
}

VerblunskyCoeffs verblunsky_from_measure(const measures::Measure& mu, int n_max) {
    if (!mu.on_circle()) throw DomainError("verblunsky_from_measure: measure is not a circle measure");
    if (n_max < 1) throw DomainError("verblunsky_from_measure: n_max must be positive");
    const int pieces = static_cast<int>(mu.pieces().size());
    const int per_piece = pieces > 0 ? std::max(n_max + 1, (20 * n_max + pieces - 1) / pieces) : 1;
    const auto nodes = measures::discretize(mu, per_piece);
    if (static_cast<int>(nodes.size()) <= n_max) throw DomainError("verblunsky_from_measure: support too small");
    double total = 0.0;
    for (const auto& nd : nodes) total += nd.w;
    const std::size_t N = nodes.size();
    std::vector<cplx> zeta(N), phi(N, 1.0), phs(N, 1.0);
    std::vector<double> w(N);
    for (std::size_t i = 0; i < N; ++i) {
        zeta[i] = std::polar(1.0, nodes[i].x);
        w[i] = nodes[i].w / total;
    }
    VerblunskyCoeffs v;
    v.source = "orthogonalization(" + mu.name() + ")";
    v.alpha.resize(n_max);
    for (int k = 0; k < n_max; ++k) {
        cplx num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            num += w[i] * zeta[i] * phi[i];
            den += w[i] * phs[i];
        }
        const cplx a = std::conj(num / den);
        if (!(std::abs(a) < 1.0)) {
            std::ostringstream os;
            os << "verblunsky_from_measure: |alpha_" << k << "| reached 1 (support too small or ill-conditioned)";
            throw NumericalError(os.str());
        }
        v.alpha[k] = a;
        const double rho = std::sqrt(1.0 - std::norm(a));
        for (std::size_t i = 0; i < N; ++i) {
            const cplx np = (zeta[i] * phi[i] - std::conj(a) * phs[i]) / rho;
            const cplx ns = (phs[i] - a * zeta[i] * phi[i]) / rho;
            phi[i] = np;
            phs[i] = ns;
        }
    }
    return v;
}

}  // namespace cdlab::opuc
