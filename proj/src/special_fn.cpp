#include <cdlab/special_fn.hpp>

#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace cdlab::special {

namespace {

using lcplx = std::complex<long double>;

bool is_nonpositive_integer(cplx z) {
    if (z.imag() != 0.0 || z.real() > 0.0) return false;
    return std::floor(z.real()) == z.real();
}

// Series summation shared by M and 0F1. The term ratio is supplied by the
// caller; extended precision keeps cancellation for |z| ~ 20 below 1e-12.
template <typename Ratio>
cplx sum_series(Ratio ratio, const SeriesPolicy& policy, const char* name) {
    lcplx term = 1.0L;
    lcplx sum = 1.0L;
    long double peak = 1.0L;
    int small_run = 0;
    for (int n = 0; n < policy.max_terms; ++n) {
        term *= ratio(n);
        sum += term;
        peak = std::max(peak, std::abs(term));
        const long double scale = std::max(std::abs(sum), std::numeric_limits<long double>::min());
        if (std::abs(term) <= static_cast<long double>(policy.rel_tol) * scale) {
            // Three consecutive small terms guard against an isolated small term.
            if (++small_run >= 3) return cplx(static_cast<double>(sum.real()), static_cast<double>(sum.imag()));
        } else {
            small_run = 0;
        }
    }
    std::ostringstream os;
    os << name << ": series did not converge in " << policy.max_terms
       << " terms (partial sum magnitude " << static_cast<double>(std::abs(sum))
       << ", peak term " << static_cast<double>(peak) << ")";
    throw ConvergenceError(os.str(), static_cast<double>(std::abs(sum)));
}

constexpr double lanczos_g = 607.0 / 128.0;
constexpr std::array<double, 15> lanczos_coeffs = {
    0.99999999999999709182,     57.156235665862923517,      -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,    .33994649984811888699e-4,
    .46523628927048575665e-4,   -.98374475304879564677e-4,  .15808870322491248884e-3,
    -.21026444172410488319e-3,  .21743961811521264320e-3,   -.16431810653676389022e-3,
    .84418223983852743293e-4,   -.26190838401581408670e-4,  .36899182659531622704e-5,
};

// Gamma(z) for Re z >= 1/2.
cplx gamma_lanczos(cplx z) {
    const cplx x = z - 1.0;
    cplx acc = lanczos_coeffs[0];
    for (std::size_t k = 1; k < lanczos_coeffs.size(); ++k)
        acc += lanczos_coeffs[k] / (x + static_cast<double>(k));
    const cplx t = x + lanczos_g + 0.5;
    return std::sqrt(2.0 * pi) * std::exp((x + 0.5) * std::log(t) - t) * acc;
}

}  // namespace

void SeriesPolicy::validate() const {
    if (!(rel_tol > 0.0)) throw DomainError("SeriesPolicy.rel_tol must be positive");
    if (max_terms < 16) throw DomainError("SeriesPolicy.max_terms must be at least 16");
    if (!(kummer_transform_threshold > 0.0))
        throw DomainError("SeriesPolicy.kummer_transform_threshold must be positive");
}

RisingFactorialCache::RisingFactorialCache(cplx base) : base_(base), values_{cplx(1.0)} {}

cplx RisingFactorialCache::operator()(std::size_t n) {
    while (values_.size() <= n) {
        const auto k = static_cast<double>(values_.size() - 1);
        values_.push_back(values_.back() * (base_ + k));
    }
    return values_[n];
}

cplx gamma_cx(cplx z) {
    if (is_nonpositive_integer(z)) {
        std::ostringstream os;
        os << "gamma_cx: pole at nonpositive integer " << z.real();
        throw DomainError(os.str());
    }
    if (z.real() < 0.5) return pi / (std::sin(pi * z) * gamma_lanczos(1.0 - z));
    return gamma_lanczos(z);
}

double gamma_real(double x) { return std::tgamma(x); }

cplx kummer_m(cplx a, cplx b, cplx z, const SeriesPolicy& policy) {
    policy.validate();
    if (is_nonpositive_integer(b)) throw DomainError("kummer_m: b is a nonpositive integer");
    if (std::abs(z) > policy.kummer_transform_threshold && z.real() < 0.0)
        return std::exp(z) * kummer_m(b - a, b, -z, policy);
    const lcplx la(a.real(), a.imag());
    const lcplx lb(b.real(), b.imag());
    const lcplx lz(z.real(), z.imag());
    return sum_series(
        [&](int n) {
            const long double k = n;
            return (la + k) / ((lb + k) * (k + 1.0L)) * lz;
        },
        policy, "kummer_m");
}

cplx hyp0f1(cplx b, cplx z, const SeriesPolicy& policy) {
    policy.validate();
    if (is_nonpositive_integer(b)) throw DomainError("hyp0f1: b is a nonpositive integer");
    const lcplx lb(b.real(), b.imag());
    const lcplx lz(z.real(), z.imag());
    return sum_series(
        [&](int n) {
            const long double k = n;
            return lz / ((lb + k) * (k + 1.0L));
        },
        policy, "hyp0f1");
}

cplx bessel_f(double nu, cplx z, const SeriesPolicy& policy) {
    policy.validate();
    if (!(nu > -1.0)) throw DomainError("bessel_f: order must exceed -1");
    const lcplx q = -lcplx(z.real(), z.imag()) * lcplx(z.real(), z.imag()) / 4.0L;
    const long double lnu = nu;
    const cplx s = sum_series(
        [&](int n) {
            const long double k = n + 1;
            return q / (k * (k + lnu));
        },
        policy, "bessel_f");
    return s / std::tgamma(nu + 1.0);
}

double bessel_zero(double nu, int k) {
    if (!(nu > -1.0)) throw DomainError("bessel_zero: order must exceed -1");
    if (k < 1) throw DomainError("bessel_zero: index must be positive");
    return bessel_zeros(nu, k).back();
}

std::vector<double> bessel_zeros(double nu, int count) {
    if (!(nu > -1.0)) throw DomainError("bessel_zeros: order must exceed -1");
    std::vector<double> zeros;
    if (count <= 0) return zeros;

    const auto f = [nu](double x) { return bessel_f(nu, cplx(x, 0.0)).real(); };
    const double step = pi / 4.0;
    double window = pi * (count + std::abs(nu) + 2.0);
    constexpr double max_window = 200.0;

    double x0 = 0.0;
    double f0 = f(x0);
    while (static_cast<int>(zeros.size()) < count) {
        const double x1 = x0 + step;
        if (x1 > window) {
            window *= 2.0;
            if (window > max_window)
                throw NumericalError("bessel_zero: bracketing window exhausted");
        }
        const double f1 = f(x1);
        if (f1 == 0.0) {
            zeros.push_back(x1);
        } else if ((f0 < 0.0) != (f1 < 0.0) && f0 != 0.0) {
            double lo = x0, hi = x1, flo = f0;
            while (hi - lo > 1e-13 * std::max(1.0, hi)) {
                const double mid = 0.5 * (lo + hi);
                const double fm = f(mid);
                if (fm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if ((fm < 0.0) == (flo < 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            zeros.push_back(0.5 * (lo + hi));
        }
        x0 = x1;
        f0 = f1;
    }
    return zeros;
}

}  // namespace cdlab::special
