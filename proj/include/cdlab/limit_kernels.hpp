#pragma once

// The limit-kernel family K_{sigma-, sigma+, beta}(z, w) built from Kummer and
// 0F1 functions, its sine and Bessel special cases, and calibration of the
// internal scale that relates a numerically computed limit to the family.

#include <cdlab/common.hpp>
#include <cdlab/special_fn.hpp>

#include <span>
#include <vector>

namespace cdlab::kernels {

enum class KernelCase { two_sided, one_sided };

class LimitKernelSpec {
public:
    /// Builds the spec and derived constants; throws DomainError on invalid input.
    static LimitKernelSpec build(double sigma_minus, double sigma_plus, double beta,
                                 special::SeriesPolicy policy = {});

    double sigma_minus() const noexcept { return sigma_minus_; }
    double sigma_plus() const noexcept { return sigma_plus_; }
    double beta() const noexcept { return beta_; }
    KernelCase kernel_case() const noexcept { return case_; }
    /// Two-sided only.
    cplx alpha() const noexcept { return alpha_; }
    double kappa() const noexcept { return kappa_; }
    /// One-sided only; signed.
    double sigma() const noexcept { return sigma_; }

    cplx A(cplx z) const;
    cplx B(cplx z) const;
    cplx A_prime(cplx z) const;
    cplx B_prime(cplx z) const;

private:
    LimitKernelSpec() = default;

    double sigma_minus_ = 0.0;
    double sigma_plus_ = 0.0;
    double beta_ = 1.0;
    KernelCase case_ = KernelCase::two_sided;
    cplx alpha_{};
    double kappa_ = 0.0;
    double sigma_ = 0.0;
    special::SeriesPolicy policy_{};
};

/// K(z,w) = (B(z)A(conj w) - A(z)B(conj w)) / (z - conj w), confluent form near the diagonal.
cplx eval_limit_kernel(const LimitKernelSpec& spec, cplx z, cplx w);

/// sin(pi(z - conj w)) / (pi(z - conj w)).
cplx sine_kernel(cplx z, cplx w);

/// K_{1,1,beta} rewritten through F_{beta/2-1} and F_{beta/2}; kappa taken from the
/// two-sided spec so it coincides with eval_limit_kernel(build(1,1,beta)).
cplx fh_bessel_kernel(double beta, cplx z, cplx w);

/// kappa of build(1,1,beta) via Legendre duplication: 2 (2 Gamma(beta/2+1)^2 / pi)^{1/beta}.
double fh_kappa_duplication(double beta);

/// The alternative constant 2 ((2/pi) Gamma(beta/2+1))^{1/beta}, kept for comparison.
double fh_kappa_alternative(double beta);

/// a^beta K(az, aw).
cplx scaled_kernel(const LimitKernelSpec& spec, double a, cplx z, cplx w);

struct ScaleFit {
    double scale = 1.0;
    double residual = 0.0;
};

struct ScaleFitOptions {
    double c_min = 1e-2;
    double c_max = 1e2;
    int coarse_points = 241;
    /// Residual above this signals a shape mismatch (ConvergenceError); negative disables.
    double residual_bound = -1.0;
};

/// Finds c > 0 minimising sup |value(z,w) - target(cz, cw)| over the samples.
ScaleFit fit_internal_scale(std::span<const KernelSample> samples, const KernelFn& target,
                            const ScaleFitOptions& options = {});

ScaleFit fit_internal_scale(std::span<const KernelSample> samples, const LimitKernelSpec& spec,
                            const ScaleFitOptions& options = {});

/// Sup over samples of |value - target(c z, c w)|.
double sup_error(std::span<const KernelSample> samples, const KernelFn& target, double c = 1.0);

/// Candidate closed forms for the internal scale: 1, pi^{1/beta}, Gamma(beta+1)^{-1/beta}.
std::vector<std::pair<std::string, double>> scale_candidates(double beta);

}  // namespace cdlab::kernels
