#include <cdlab/oprl.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cdlab::oprl {

namespace {

constexpr double overflow_limit = 1e280;
constexpr double reorth_budget_bytes = 256.0 * 1024 * 1024;

void check_n(const RecurrenceCoeffs& rec, int n, const char* who) {
    if (n < 0 || n > rec.size()) {
        std::ostringstream os;
        os << who << ": n = " << n << " outside the declared length " << rec.size();
        throw DomainError(os.str());
    }
}

// p_0..p_n (and derivatives when wanted), with overflow rescaling.
PolyValues run_recurrence(const RecurrenceCoeffs& rec, int n, cplx z, cplx first, cplx zeroth,
                          std::vector<cplx>* deriv, int start) {
    PolyValues pv;
    pv.z = z;
    pv.values.assign(n + 1, 0.0);
    if (deriv) deriv->assign(n + 1, 0.0);
    pv.values[0] = zeroth;
    if (n == 0) return pv;
    // start = 0: p_1 from the recurrence; start = 1: p_1 given (second kind).
    cplx prev = 0.0, cur = zeroth, dprev = 0.0, dcur = 0.0;
    for (int k = 0; k < n; ++k) {
        cplx next, dnext = 0.0;
        if (k == 0 && start == 1) {
            next = first;
        } else {
            const double a_prev = k == 0 ? 0.0 : rec.a[k - 1];
            next = ((z - rec.b[k]) * cur - a_prev * prev) / rec.a[k];
            if (deriv) dnext = (cur + (z - rec.b[k]) * dcur - a_prev * dprev) / rec.a[k];
        }
        prev = cur;
        cur = next;
        dprev = dcur;
        dcur = dnext;
        pv.values[k + 1] = cur;
        if (deriv) (*deriv)[k + 1] = dcur;
        if (std::abs(cur) > overflow_limit || (deriv && std::abs(dcur) > overflow_limit)) {
            const double s = 1.0 / overflow_limit;
            for (int j = 0; j <= k + 1; ++j) pv.values[j] *= s;
            if (deriv)
                for (int j = 0; j <= k + 1; ++j) (*deriv)[j] *= s;
            prev *= s;
            cur *= s;
            dprev *= s;
            dcur *= s;
            pv.log_scale += std::log(overflow_limit);
            pv.rescaled = true;
        }
    }
    return pv;
}

}  // namespace

void RecurrenceCoeffs::validate() const {
    if (a.size() != b.size()) throw DomainError("RecurrenceCoeffs: a and b differ in length");
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!(a[i] > 0.0) || !std::isfinite(a[i])) {
            std::ostringstream os;
            os << "RecurrenceCoeffs: a_" << i + 1 << " = " << a[i] << " is not positive";
            throw DomainError(os.str());
        }
        if (!std::isfinite(b[i])) throw DomainError("RecurrenceCoeffs: b is not finite");
    }
    if (!(mass > 0.0)) throw DomainError("RecurrenceCoeffs: mass must be positive");
}

RecurrenceCoeffs make_coeffs(std::vector<double> a, std::vector<double> b, std::string source, double mass) {
    RecurrenceCoeffs rec{std::move(a), std::move(b), mass, std::move(source)};
    rec.validate();
    return rec;
}

RecurrenceCoeffs stieltjes_coeffs(const measures::Measure& mu, int n_max) {
    if (mu.on_circle()) throw DomainError("stieltjes_coeffs: circle measure (use the opuc module)");
    if (n_max < 1) throw DomainError("stieltjes_coeffs: n_max must be positive");
    const int pieces = static_cast<int>(mu.pieces().size());
    int per_piece = 0;
    if (pieces > 0) per_piece = std::max(n_max + 1, (20 * n_max + pieces - 1) / pieces);
    if (pieces == 0 && static_cast<int>(mu.atoms().size()) <= n_max) {
        std::ostringstream os;
        os << "stieltjes_coeffs: support has " << mu.atoms().size() << " points, need more than n_max = " << n_max;
        throw DomainError(os.str());
    }
    const auto nodes = measures::discretize(mu, std::max(per_piece, 1));
    const std::size_t N = nodes.size();
    if (static_cast<int>(N) <= n_max) throw DomainError("stieltjes_coeffs: support too small after discretization");

    double total = 0.0;
    for (const auto& nd : nodes) total += nd.w;

    RecurrenceCoeffs rec;
    rec.mass = total;
    rec.source = "stieltjes(" + mu.name() + ")";
    rec.a.resize(n_max);
    rec.b.resize(n_max);

    std::vector<double> x(N), sw(N);
    for (std::size_t i = 0; i < N; ++i) {
        x[i] = nodes[i].x;
        sw[i] = std::sqrt(nodes[i].w / total);
    }
    const bool reorth = static_cast<double>(N) * (n_max + 1) * sizeof(double) <= reorth_budget_bytes;
    const auto fail = [](int k, double v) {
        std::ostringstream os;
        os << "stieltjes_coeffs: a_" << k << " = " << v << " lost positivity (ill-conditioned discretization)";
        throw NumericalError(os.str());
    };

    if (reorth) {
        // Lanczos on diag(x) from the start vector sqrt(w); q_k holds sqrt(w) p_k.
        std::vector<std::vector<double>> Q;
        Q.reserve(n_max + 1);
        Q.push_back(sw);
        std::vector<double> v(N);
        for (int k = 0; k < n_max; ++k) {
            const auto& q = Q[k];
            double bk = 0.0;
            for (std::size_t i = 0; i < N; ++i) bk += x[i] * q[i] * q[i];
            if (mu.even()) bk = 0.0;
            const double ak = k == 0 ? 0.0 : rec.a[k - 1];
            for (std::size_t i = 0; i < N; ++i) v[i] = (x[i] - bk) * q[i] - (k == 0 ? 0.0 : ak * Q[k - 1][i]);
            for (int pass = 0; pass < 2; ++pass) {
                for (int j = 0; j <= k; ++j) {
                    double dot = 0.0;
                    const auto& qj = Q[j];
                    for (std::size_t i = 0; i < N; ++i) dot += qj[i] * v[i];
                    for (std::size_t i = 0; i < N; ++i) v[i] -= dot * qj[i];
                }
            }
            double nrm = 0.0;
            for (double e : v) nrm += e * e;
            nrm = std::sqrt(nrm);
            if (!(nrm > 1e-14)) fail(k + 1, nrm);
            rec.a[k] = nrm;
            rec.b[k] = bk;
            for (auto& e : v) e /= nrm;
            Q.push_back(v);
        }
    } else {
        std::vector<double> prev(N, 0.0), cur = sw, next(N);
        for (int k = 0; k < n_max; ++k) {
            double bk = 0.0;
            for (std::size_t i = 0; i < N; ++i) bk += x[i] * cur[i] * cur[i];
            if (mu.even()) bk = 0.0;
            const double ak = k == 0 ? 0.0 : rec.a[k - 1];
            double nrm = 0.0;
            for (std::size_t i = 0; i < N; ++i) {
                next[i] = (x[i] - bk) * cur[i] - ak * prev[i];
                nrm += next[i] * next[i];
            }
            nrm = std::sqrt(nrm);
            if (!(nrm > 1e-14)) fail(k + 1, nrm);
            rec.a[k] = nrm;
            rec.b[k] = bk;
            for (std::size_t i = 0; i < N; ++i) next[i] /= nrm;
            std::swap(prev, cur);
            std::swap(cur, next);
        }
    }
    return rec;
}

PolyValues eval_polys(const RecurrenceCoeffs& rec, int n, cplx z) {
    check_n(rec, n, "eval_polys");
    return run_recurrence(rec, n, z, 0.0, 1.0, nullptr, 0);
}

PolyValues eval_second_kind(const RecurrenceCoeffs& rec, int n, cplx z) {
    check_n(rec, n, "eval_second_kind");
    if (n == 0) {
        PolyValues pv;
        pv.z = z;
        pv.values = {0.0};
        return pv;
    }
    return run_recurrence(rec, n, z, 1.0 / rec.a[0], 0.0, nullptr, 1);
}

cplx cd_kernel(const RecurrenceCoeffs& rec, int n, cplx z, cplx w, CdMethod method) {
    if (n < 0) throw DomainError("cd_kernel: n must be nonnegative");
    if (n == 0) return 0.0;
    if (method == CdMethod::sum) {
        check_n(rec, n - 1, "cd_kernel");
        const auto pz = eval_polys(rec, n - 1, z);
        const auto pw = eval_polys(rec, n - 1, w);
        cplx s = 0.0;
        for (int j = 0; j < n; ++j) s += pz.values[j] * std::conj(pw.values[j]);
        return s * std::exp(pz.log_scale + pw.log_scale);
    }
    check_n(rec, n, "cd_kernel");
    const cplx wc = std::conj(w);
    const double an = rec.a[n - 1];
    if (std::abs(z - wc) < confluent_threshold) {
        const cplx m = 0.5 * (z + wc);
        std::vector<cplx> d;
        const auto p = run_recurrence(rec, n, m, 0.0, 1.0, &d, 0);
        return an * (d[n] * p.values[n - 1] - d[n - 1] * p.values[n]) * std::exp(2.0 * p.log_scale);
    }
    // real coefficients: conj(p(w)) = p(conj w)
    const auto pz = eval_polys(rec, n, z);
    const auto pw = eval_polys(rec, n, wc);
    return an * (pz.values[n] * pw.values[n - 1] - pz.values[n - 1] * pw.values[n]) / (z - wc) *
           std::exp(pz.log_scale + pw.log_scale);
}

cplx interp_kernel(const RecurrenceCoeffs& rec, double t, cplx z, cplx w) {
    if (!(t >= 0.0)) throw DomainError("interp_kernel: t must be nonnegative");
    const double fl = std::floor(t);
    const int n = static_cast<int>(fl);
    const double s = t - fl;
    const cplx k0 = cd_kernel(rec, n, z, w);
    if (s == 0.0) return k0;
    const cplx k1 = cd_kernel(rec, n + 1, z, w);
    return k0 + s * (k1 - k0);
}

double christoffel_scale(const RecurrenceCoeffs& rec, double xi, const ScaleFn& h, double index) {
    const double diag = interp_kernel(rec, index, xi, xi).real();
    if (!(diag > 0.0)) throw DomainError("rescaled_cd: zero diagonal K(index, xi, xi)");
    return h(diag / rec.mass);
}

std::vector<KernelSample> rescaled_cd(const RecurrenceCoeffs& rec, double xi, const ScaleFn& h,
                                      double index, const PointPairs& grid) {
    const double diag = interp_kernel(rec, index, xi, xi).real();
    if (!(diag > 0.0)) throw DomainError("rescaled_cd: zero diagonal K(index, xi, xi)");
    const double scale = h(diag / rec.mass);
    std::vector<KernelSample> out;
    out.reserve(grid.size());
    for (const auto& [z, w] : grid) {
        const cplx v = interp_kernel(rec, index, xi + z / scale, xi + w / scale) / diag;
        out.push_back({z, w, v});
    }
    return out;
}

double nevai_ratio(const RecurrenceCoeffs& rec, double xi, int n) {
    if (n < 1) throw DomainError("nevai_ratio: n must be positive");
    return cd_kernel(rec, n + 1, xi, xi).real() / cd_kernel(rec, n, xi, xi).real();
}

std::vector<double> poly_zeros(const RecurrenceCoeffs& rec, int n) {
    if (n < 1) throw DomainError("poly_zeros: n must be positive");
    check_n(rec, n, "poly_zeros");
    // Gershgorin bounds
    double lo = rec.b[0], hi = rec.b[0];
    for (int i = 0; i < n; ++i) {
        const double r = (i > 0 ? rec.a[i - 1] : 0.0) + (i + 1 < n ? rec.a[i] : 0.0);
        lo = std::min(lo, rec.b[i] - r);
        hi = std::max(hi, rec.b[i] + r);
    }
    // number of eigenvalues strictly below x
    const auto count = [&](double x) {
        int c = 0;
        double q = rec.b[0] - x;
        for (int i = 0;; ++i) {
            if (q == 0.0) q = -1e-300;
            if (q < 0.0) ++c;
            if (i + 1 >= n) break;
            q = (rec.b[i + 1] - x) - rec.a[i] * rec.a[i] / q;
        }
        return c;
    };
    std::vector<double> zeros(n);
    for (int k = 0; k < n; ++k) {
        double l = lo, r = hi;
        for (int it = 0; it < 200; ++it) {
            const double m = 0.5 * (l + r);
            if (m <= l || m >= r) break;
            if (count(m) > k)
                r = m;
            else
                l = m;
            if (r - l <= 1e-13 * std::max(1e-3, std::abs(m)) && r - l <= 4e-16 * std::max(std::abs(l), std::abs(r)) + 1e-300)
                break;
        }
        zeros[k] = 0.5 * (l + r);
    }
    return zeros;
}

}  // namespace cdlab::oprl
