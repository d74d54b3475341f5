#pragma once

// Orthogonal polynomials on the unit circle. Szego recursion
//   phi_{k+1} = (zeta phi_k - conj(alpha_k) phi_k^*) / rho_k,
//   phi^*_{k+1} = (phi_k^* - alpha_k zeta phi_k) / rho_k,   rho_k = sqrt(1 - |alpha_k|^2),
// second kind psi from the same recursion with alpha -> -alpha.

#include <cdlab/common.hpp>
#include <cdlab/measures.hpp>
#include <cdlab/oprl.hpp>

#include <string>
#include <vector>

namespace cdlab::opuc {

struct VerblunskyCoeffs {
    std::vector<cplx> alpha;
    std::string source;

    int size() const noexcept { return static_cast<int>(alpha.size()); }
    void validate() const;
};

VerblunskyCoeffs make_verblunsky(std::vector<cplx> alpha, std::string source);

/// alpha_k = 0 for k < n (normalized Lebesgue measure).
VerblunskyCoeffs lebesgue(int n);

struct SzegoValues {
    cplx zeta;
    std::vector<cplx> phi;
    std::vector<cplx> phi_star;
    std::vector<cplx> psi;
    std::vector<cplx> psi_star;
};

SzegoValues szego_eval(const VerblunskyCoeffs& v, int n, cplx zeta);

using oprl::CdMethod;

/// k_n(zeta, omega) = Sum_{j<n} phi_j(zeta) conj(phi_j(omega)).
cplx cd_kernel_circle(const VerblunskyCoeffs& v, int n, cplx zeta, cplx omega, CdMethod method = CdMethod::cd_formula);

/// e^{-in(z - conj w)/(2h)} k_n(e^{i(xi+z/h)}, e^{i(xi+w/h)}) / k_n, h = h(k_n(e^{i xi}, e^{i xi})).
std::vector<KernelSample> rescaled_cd_circle(const VerblunskyCoeffs& v, double xi, const ScaleFn& h, int n,
                                             const PointPairs& grid);

/// Canonical-system kernel of the OPUC chain at t = n + s, positive on the diagonal:
///   e^{-in d/2} / (2i d) [e^{is d/2} phi_n(e^{iz}) conj(phi_n(e^{iw}))
///                         - e^{-is d/2} phi_n^*(e^{iz}) conj(phi_n^*(e^{iw}))],  d = z - conj w.
cplx opuc_canonical_kernel(const VerblunskyCoeffs& v, double t, cplx z, cplx w);

/// The same kernel through the sin-ratio interpolation between levels n and n+1.
cplx opuc_canonical_interp(const VerblunskyCoeffs& v, double t, cplx z, cplx w);

/// Verblunsky coefficients of a circle measure (angles on [-pi, pi)) by orthogonalization
/// on a Gauss-Jacobi discretization with at least 20 n_max nodes.
VerblunskyCoeffs verblunsky_from_measure(const measures::Measure& mu, int n_max);

}  // namespace cdlab::opuc
