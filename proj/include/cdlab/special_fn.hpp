#pragma once

// Complex-capable special functions: Gamma, Kummer's M, 0F1, the entire Bessel
// factor F_nu(z) = J_nu(z) / (z/2)^nu, and positive Bessel zeros.

#include <cdlab/common.hpp>

#include <cstddef>
#include <vector>

namespace cdlab::special {

struct SeriesPolicy {
    double rel_tol = 1e-14;
    int max_terms = 2000;
    /// |z| above which M(a,b,z) with Re z < 0 is evaluated via e^z M(b-a,b,-z).
    double kummer_transform_threshold = 40.0;

    void validate() const;
};

/// Rising factorials (base)_0 .. (base)_n, grown on demand.
class RisingFactorialCache {
public:
    explicit RisingFactorialCache(cplx base);

    cplx base() const noexcept { return base_; }
    /// (base)_n; extends the cache as needed.
    cplx operator()(std::size_t n);
    const std::vector<cplx>& values() const noexcept { return values_; }

private:
    cplx base_;
    std::vector<cplx> values_;
};

/// Gamma function for complex argument (Lanczos, g = 607/128, 15 terms) with
/// reflection for Re z < 1/2. Throws DomainError at the poles.
cplx gamma_cx(cplx z);

/// Real Gamma, kept next to gamma_cx so callers share one entry point.
double gamma_real(double x);

/// Kummer's confluent hypergeometric function M(a, b, z) = sum (a)_n/(b)_n z^n/n!.
cplx kummer_m(cplx a, cplx b, cplx z, const SeriesPolicy& policy = {});

/// 0F1(; b; z) = sum z^n / ((b)_n n!).
cplx hyp0f1(cplx b, cplx z, const SeriesPolicy& policy = {});

/// F_nu(z) = sum (-1)^n / (n! Gamma(n+nu+1)) (z/2)^{2n}, so J_nu(z) = (z/2)^nu F_nu(z).
cplx bessel_f(double nu, cplx z, const SeriesPolicy& policy = {});

/// k-th positive zero j_{nu,k} of J_nu (k >= 1), nu > -1.
double bessel_zero(double nu, int k);

/// The first k positive zeros, strictly increasing.
std::vector<double> bessel_zeros(double nu, int count);

}  // namespace cdlab::special
