#include <cdlab/limit_kernels.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace cdlab::kernels {

namespace {

// (B(z)A(w*) - A(z)B(w*)) / (z - w*), or the Wronskian at the midpoint.
template <typename FA, typename FB, typename FAp, typename FBp>
cplx ab_kernel(FA A, FB B, FAp Ap, FBp Bp, cplx z, cplx w) {
    const cplx wc = std::conj(w);
    const cplx d = z - wc;
    if (std::abs(d) < confluent_threshold) {
        const cplx m = 0.5 * (z + wc);
        return Bp(m) * A(m) - Ap(m) * B(m);
    }
    return (B(z) * A(wc) - A(z) * B(wc)) / d;
}

}  // namespace

LimitKernelSpec LimitKernelSpec::build(double sigma_minus, double sigma_plus, double beta,
                                       special::SeriesPolicy policy) {
    policy.validate();
    if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("build_limit_kernel: beta must be positive");
    if (!(sigma_minus >= 0.0) || !(sigma_plus >= 0.0) || !std::isfinite(sigma_minus) ||
        !std::isfinite(sigma_plus))
        throw DomainError("build_limit_kernel: sigma_minus and sigma_plus must be nonnegative");
    if (sigma_minus == 0.0 && sigma_plus == 0.0)
        throw DomainError("build_limit_kernel: sigma_minus and sigma_plus both zero");

    LimitKernelSpec s;
    s.sigma_minus_ = sigma_minus;
    s.sigma_plus_ = sigma_plus;
    s.beta_ = beta;
    s.policy_ = policy;
    const double g = std::tgamma(beta + 1.0);
    if (sigma_minus > 0.0 && sigma_plus > 0.0) {
        s.case_ = KernelCase::two_sided;
        s.alpha_ = cplx((beta - 1.0) / 2.0, std::log(sigma_minus / sigma_plus) / (2.0 * pi));
        const double ga = std::abs(special::gamma_cx(s.alpha_ + 1.0));
        s.kappa_ = 0.5 * std::pow(2.0 * g * g * std::sqrt(sigma_plus * sigma_minus) / (ga * ga), 1.0 / beta);
    } else {
        s.case_ = KernelCase::one_sided;
        const double side = sigma_plus > 0.0 ? sigma_plus : sigma_minus;
        const double mag = std::pow(side * g * g / pi, 1.0 / beta);
        s.sigma_ = sigma_plus > 0.0 ? mag : -mag;
    }
    return s;
}

cplx LimitKernelSpec::A(cplx z) const {
    if (case_ == KernelCase::one_sided) return special::hyp0f1(beta_, -sigma_ * z, policy_);
    const cplx u(2.0 * kappa_ * z.imag(), -2.0 * kappa_ * z.real());  // -2i kappa z
    const cplx e = std::exp(cplx(0.0, kappa_) * z);
    return e * 0.5 * (special::kummer_m(alpha_, beta_, u, policy_) + special::kummer_m(alpha_ + 1.0, beta_, u, policy_));
}

cplx LimitKernelSpec::B(cplx z) const {
    if (case_ == KernelCase::one_sided) return z * special::hyp0f1(beta_ + 1.0, -sigma_ * z, policy_);
    const cplx u(2.0 * kappa_ * z.imag(), -2.0 * kappa_ * z.real());
    const cplx e = std::exp(cplx(0.0, kappa_) * z);
    return z * e * special::kummer_m(alpha_ + 1.0, beta_ + 1.0, u, policy_);
}

cplx LimitKernelSpec::A_prime(cplx z) const {
    if (case_ == KernelCase::one_sided)
        return -sigma_ * special::hyp0f1(beta_ + 1.0, -sigma_ * z, policy_) / beta_;
    const cplx ik(0.0, kappa_);
    const cplx u = -2.0 * ik * z;
    const cplx e = std::exp(ik * z);
    const cplx m0 = special::kummer_m(alpha_, beta_, u, policy_);
    const cplx m1 = special::kummer_m(alpha_ + 1.0, beta_, u, policy_);
    // dM(a,b,u)/du = (a/b) M(a+1,b+1,u)
    const cplx d0 = alpha_ / beta_ * special::kummer_m(alpha_ + 1.0, beta_ + 1.0, u, policy_);
    const cplx d1 = (alpha_ + 1.0) / beta_ * special::kummer_m(alpha_ + 2.0, beta_ + 1.0, u, policy_);
    return e * 0.5 * (ik * (m0 + m1) - 2.0 * ik * (d0 + d1));
}

cplx LimitKernelSpec::B_prime(cplx z) const {
    if (case_ == KernelCase::one_sided) {
        const cplx x = -sigma_ * z;
        return special::hyp0f1(beta_ + 1.0, x, policy_) -
               z * sigma_ * special::hyp0f1(beta_ + 2.0, x, policy_) / (beta_ + 1.0);
    }
    const cplx ik(0.0, kappa_);
    const cplx u = -2.0 * ik * z;
    const cplx e = std::exp(ik * z);
    const cplx m = special::kummer_m(alpha_ + 1.0, beta_ + 1.0, u, policy_);
    const cplx dm = (alpha_ + 1.0) / (beta_ + 1.0) * special::kummer_m(alpha_ + 2.0, beta_ + 2.0, u, policy_);
    return e * (m + z * ik * m - 2.0 * ik * z * dm);
}

cplx eval_limit_kernel(const LimitKernelSpec& spec, cplx z, cplx w) {
    return ab_kernel([&](cplx x) { return spec.A(x); }, [&](cplx x) { return spec.B(x); },
                     [&](cplx x) { return spec.A_prime(x); }, [&](cplx x) { return spec.B_prime(x); }, z, w);
}

cplx sine_kernel(cplx z, cplx w) {
    const cplx d = pi * (z - std::conj(w));
    if (std::abs(d) < 1e-6) return 1.0 - d * d / 6.0;
    return std::sin(d) / d;
}

double fh_kappa_duplication(double beta) {
    if (!(beta > 0.0)) throw DomainError("fh_kappa: beta must be positive");
    const double g = std::tgamma(beta / 2.0 + 1.0);
    return 2.0 * std::pow(2.0 * g * g / pi, 1.0 / beta);
}

double fh_kappa_alternative(double beta) {
    if (!(beta > 0.0)) throw DomainError("fh_kappa: beta must be positive");
    return 2.0 * std::pow(2.0 / pi * std::tgamma(beta / 2.0 + 1.0), 1.0 / beta);
}

cplx fh_bessel_kernel(double beta, cplx z, cplx w) {
    if (!(beta > 0.0)) throw DomainError("fh_bessel_kernel: beta must be positive");
    const double kappa = LimitKernelSpec::build(1.0, 1.0, beta).kappa();
    const double lo = beta / 2.0 - 1.0;
    const double hi = beta / 2.0;
    const double g_lo = std::tgamma(beta / 2.0);
    const double g_hi = std::tgamma(beta / 2.0 + 1.0);
    // F_nu'(x) = -(x/2) F_{nu+1}(x)
    auto A = [&](cplx x) { return g_lo * special::bessel_f(lo, kappa * x); };
    auto B = [&](cplx x) { return x * g_hi * special::bessel_f(hi, kappa * x); };
    auto Ap = [&](cplx x) { return -g_lo * kappa * (kappa * x / 2.0) * special::bessel_f(hi, kappa * x); };
    auto Bp = [&](cplx x) {
        const cplx y = kappa * x;
        return g_hi * (special::bessel_f(hi, y) - x * kappa * (y / 2.0) * special::bessel_f(hi + 1.0, y));
    };
    return ab_kernel(A, B, Ap, Bp, z, w);
}

cplx scaled_kernel(const LimitKernelSpec& spec, double a, cplx z, cplx w) {
    if (!(a >= 0.0)) throw DomainError("scaled_kernel: a must be nonnegative");
    if (a == 0.0) return 0.0;
    return std::pow(a, spec.beta()) * eval_limit_kernel(spec, a * z, a * w);
}

double sup_error(std::span<const KernelSample> samples, const KernelFn& target, double c) {
    double worst = 0.0;
    for (const auto& s : samples) worst = std::max(worst, std::abs(s.value - target(c * s.z, c * s.w)));
    return worst;
}

namespace {

// Sup error that stops once it exceeds `cap`; failures count as +inf.
double capped_error(std::span<const KernelSample> samples, const KernelFn& target, double c, double cap) {
    double worst = 0.0;
    try {
        for (const auto& s : samples) {
            const double e = std::abs(s.value - target(c * s.z, c * s.w));
            if (!std::isfinite(e)) return std::numeric_limits<double>::infinity();
            worst = std::max(worst, e);
            if (worst > cap) return worst;
        }
    } catch (const Error&) {
        return std::numeric_limits<double>::infinity();
    }
    return worst;
}

}  // namespace

ScaleFit fit_internal_scale(std::span<const KernelSample> samples, const KernelFn& target,
                            const ScaleFitOptions& options) {
    if (samples.size() < 10) throw DomainError("fit_internal_scale: need at least 10 samples");
    if (!(options.c_min > 0.0) || !(options.c_max > options.c_min) || options.coarse_points < 3)
        throw DomainError("fit_internal_scale: invalid search range");

    const double lmin = std::log(options.c_min);
    const double lmax = std::log(options.c_max);
    const int m = options.coarse_points;
    const double step = (lmax - lmin) / (m - 1);
    constexpr double inf = std::numeric_limits<double>::infinity();

    int best = 0;
    double best_err = inf;
    for (int i = 0; i < m; ++i) {
        const double e = capped_error(samples, target, std::exp(lmin + i * step), best_err);
        if (e < best_err) {
            best_err = e;
            best = i;
        }
    }
    if (!std::isfinite(best_err)) throw ConvergenceError("fit_internal_scale: target failed on the whole range", 0.0);

    // golden section in log c on the bracket around the coarse minimum
    double lo = lmin + std::max(0, best - 1) * step;
    double hi = lmin + std::min(m - 1, best + 1) * step;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    auto f = [&](double l) { return capped_error(samples, target, std::exp(l), inf); };
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = f(x2);
        }
    }
    ScaleFit fit;
    fit.scale = std::exp(0.5 * (lo + hi));
    fit.residual = f(std::log(fit.scale));
    if (best_err < fit.residual) {
        fit.scale = std::exp(lmin + best * step);
        fit.residual = best_err;
    }
    if (options.residual_bound >= 0.0 && fit.residual > options.residual_bound) {
        std::ostringstream os;
        os << "fit_internal_scale: residual " << fit.residual << " exceeds bound " << options.residual_bound
           << " (shape mismatch)";
        throw ConvergenceError(os.str(), fit.residual);
    }
    return fit;
}

ScaleFit fit_internal_scale(std::span<const KernelSample> samples, const LimitKernelSpec& spec,
                            const ScaleFitOptions& options) {
    return fit_internal_scale(
        samples, [&spec](cplx z, cplx w) { return eval_limit_kernel(spec, z, w); }, options);
}

std::vector<std::pair<std::string, double>> scale_candidates(double beta) {
    return {{"1", 1.0},
            {"pi^(1/beta)", std::pow(pi, 1.0 / beta)},
            {"Gamma(beta+1)^(-1/beta)", std::pow(std::tgamma(beta + 1.0), -1.0 / beta)}};
}

}  // namespace cdlab::kernels
