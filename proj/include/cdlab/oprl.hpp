#pragma once

// Orthogonal polynomials on the real line. Recurrence convention:
//   a_{n+1} p_{n+1}(x) = (x - b_{n+1}) p_n(x) - a_n p_{n-1}(x),  p_{-1} = 0, p_0 = 1,
// with arrays a[0] = a_1, b[0] = b_1. Polynomials are orthonormal for mu / mass.

#include <cdlab/common.hpp>
#include <cdlab/measures.hpp>

#include <string>
#include <vector>

namespace cdlab::oprl {

struct RecurrenceCoeffs {
    std::vector<double> a;
    std::vector<double> b;
    /// Total mass of the source measure; kernels of mu itself are K / mass.
    double mass = 1.0;
    std::string source;

    int size() const noexcept { return static_cast<int>(a.size()); }
    void validate() const;
};

/// Recurrence coefficients up to n_max from a discretization of mu. Lanczos with full
/// reorthogonalization when the Krylov basis fits in memory, plain Stieltjes otherwise.
/// Even measures get b = 0 exactly.
RecurrenceCoeffs stieltjes_coeffs(const measures::Measure& mu, int n_max);

/// Coefficients from explicit arrays (validated).
RecurrenceCoeffs make_coeffs(std::vector<double> a, std::vector<double> b, std::string source, double mass = 1.0);

struct PolyValues {
    cplx z;
    std::vector<cplx> values;
    /// values are exp(-log_scale) times the true values when the overflow guard fired.
    double log_scale = 0.0;
    bool rescaled = false;
};

/// p_0(z) .. p_n(z).
PolyValues eval_polys(const RecurrenceCoeffs& rec, int n, cplx z);

/// q_0(z) .. q_n(z) with q_0 = 0, q_1 = 1/a_1, same recurrence.
PolyValues eval_second_kind(const RecurrenceCoeffs& rec, int n, cplx z);

enum class CdMethod { sum, cd_formula };

/// Sum_{j<n} p_j(z) conj(p_j(w)), probability-normalized.
cplx cd_kernel(const RecurrenceCoeffs& rec, int n, cplx z, cplx w, CdMethod method = CdMethod::cd_formula);

/// Piecewise-linear interpolation of cd_kernel in n; K(0) = 0.
cplx interp_kernel(const RecurrenceCoeffs& rec, double t, cplx z, cplx w);

/// K(t, xi + z/h(K_mu), xi + w/h(K_mu)) / K(t, xi, xi), K_mu = K / mass.
std::vector<KernelSample> rescaled_cd(const RecurrenceCoeffs& rec, double xi, const ScaleFn& h,
                                      double index, const PointPairs& grid);

/// h(K_mu(t, xi, xi)), the local length scale used by rescaled_cd.
double christoffel_scale(const RecurrenceCoeffs& rec, double xi, const ScaleFn& h, double index);

/// K(n+1, xi, xi) / K(n, xi, xi).
double nevai_ratio(const RecurrenceCoeffs& rec, double xi, int n);

/// Eigenvalues of the n x n truncated Jacobi matrix by Sturm bisection.
std::vector<double> poly_zeros(const RecurrenceCoeffs& rec, int n);

}  // namespace cdlab::oprl
