#pragma once

// Convergence studies of rescaled kernels against limit kernels, local zero
// statistics, and the sparse decaying Jacobi generator.

#include <cdlab/canonical.hpp>
#include <cdlab/common.hpp>
#include <cdlab/limit_kernels.hpp>
#include <cdlab/oprl.hpp>
#include <cdlab/opuc.hpp>

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cdlab::universality {

/// Square lattice of points_per_axis real points on [-half_width, half_width];
/// with imag_half_width > 0 every point also appears shifted by +-i imag_half_width.
struct Grid {
    double half_width = 2.0;
    int points_per_axis = 21;
    double imag_half_width = 0.0;

    void validate() const;
    std::vector<cplx> points() const;
    /// All ordered pairs of points. Contains (0, 0) for odd points_per_axis.
    PointPairs pairs() const;
};

/// Rescaled kernel samples at one index (n, t or x) on the given pairs.
using SampleSource = std::function<std::vector<KernelSample>(double index, const PointPairs& pairs)>;

SampleSource oprl_source(oprl::RecurrenceCoeffs rec, double xi, ScaleFn h);
SampleSource opuc_source(opuc::VerblunskyCoeffs v, double xi, ScaleFn h);
SampleSource canonical_source(canonical::Hamiltonian H, double xi, ScaleFn h);
/// Index is the right endpoint x; the kernel is the quadrature form.
SampleSource schrodinger_source(std::function<double(double)> V, double beta_bc, double xi, ScaleFn h,
                                canonical::SchrodingerOptions options = {});

struct ConvergenceReport {
    std::vector<double> indices;
    /// Errors after aligning the target by the fitted internal scale.
    std::vector<double> sup_errors;
    /// Errors against the target as given (scale 1).
    std::vector<double> raw_errors;
    double fitted_scale = 1.0;
    double fitted_scale_residual = 0.0;
    std::string target;
    double tolerance = 0.0;
    bool passed = false;
    /// Samples per index, kept for the CSV writer.
    std::vector<std::vector<KernelSample>> samples;
};

struct ConvergenceOptions {
    double tolerance = 0.05;
    int jobs = 1;
    kernels::ScaleFitOptions fit{};
};

/// Evaluates the source at each index, fits the internal scale once at the largest
/// index and records sup errors. passed iff aligned errors strictly decrease and the
/// last one is within tolerance.
ConvergenceReport convergence_study(const SampleSource& source, const KernelFn& target, std::string target_name,
                                    std::vector<double> indices, const Grid& grid,
                                    const ConvergenceOptions& options = {});

enum class ZeroMode { clock, hard_edge, even_fh, freud_levin };

std::string to_string(ZeroMode mode);

struct ZeroStudyOptions {
    ZeroMode mode = ZeroMode::clock;
    double xi = 0.0;
    /// Applied to K_mu(n, xi, xi); for clock this is tau_n = eta * K.
    ScaleFn h;
    int k_max = 3;
    /// hard_edge, even_fh.
    double beta = 1.0;
    /// freud_levin: limit kernel K_{sigma-,sigma+,beta}(c z, c w).
    double sigma_minus = 1.0;
    double sigma_plus = 1.0;
    double internal_scale = 1.0;
    int jobs = 1;
};

struct ZeroReport {
    ZeroMode mode = ZeroMode::clock;
    std::vector<int> n_values;
    /// Keyed by (degree, k).
    std::map<std::pair<int, int>, double> zeros;
    std::map<std::pair<int, int>, double> scaled_zeros;
    std::map<std::pair<int, int>, double> ratios;
    std::map<std::pair<int, int>, double> predicted_ratios;
    /// Limit values of the mode's primary statistic, by k.
    std::map<int, double> limit_predictions;
    /// Over the largest n (both parities for even_fh).
    double max_rel_error_ratios = 0.0;
    std::vector<std::pair<std::string, double>> diagnostics;
    std::vector<std::string> notes;
};

/// Local zero statistics of p_n around xi.
///   clock: zeros labelled k = -k_max .. k_max+1 with k = 1 the first zero >= xi; ratios
///     are tau_n (x_{k+1} - x_k), predicted 1.
///   hard_edge: first k_max zeros right of xi; ratios (x_k - xi)/(x_1 - xi) against
///     (j_{beta-1,k}/j_{beta-1,1})^2; exponent regression and constants in diagnostics.
///   even_fh: degrees 2n and 2n+1 for n in n_values; positive zeros against j_{beta/2-1,k}
///     and j_{beta/2,k} ratios (first power). Requires b == 0.
///   freud_levin: kappa_1 = scaled first zero at the largest n; remaining scaled zeros
///     against the real zeros of z -> K(c z, c kappa_1).
ZeroReport zero_study(const oprl::RecurrenceCoeffs& rec, const std::vector<int>& n_values,
                      const ZeroStudyOptions& options);

/// Real zeros of z -> K(c z, c anchor) in (lo, hi) by sign changes of the real part.
std::vector<double> limit_kernel_zeros(const kernels::LimitKernelSpec& spec, double c, double anchor, double lo,
                                       double hi, int scan_points = 2000);

/// Sparse sites N_1 < N_2 < ...: explicit list, or N_j = round(ratio^j).
struct SparseGrowth {
    std::vector<long> points;
    double ratio = 0.0;
};

struct SparseDiagnostics {
    double xi = 0.0;
    std::vector<long> sites;
    /// A_n = U^{-1}(p_n, a_n p_{n-1}) rotated by exp(-+ i(n-1)theta), n = 0 .. n_max.
    std::vector<std::array<cplx, 2>> a_vectors;
    /// ||A_n||^2.
    std::vector<double> norm_sq;
    /// cumulative[t] = integral_0^t of ||A_floor(s)||^2, t = 0 .. n_max+1.
    std::vector<double> cumulative;

    /// Piecewise-linear interpolation of the cumulative function.
    double g(double t) const;
    double g_inverse(double y) const;
    /// t ||A_floor(t)||^2.
    double predicted_kernel(double t) const;
    /// y -> g^{-1}(y) / (pi sqrt(4 - xi^2)).
    ScaleFn scale() const;
};

struct SparseJacobi {
    oprl::RecurrenceCoeffs rec;
    SparseDiagnostics diagnostics;
};

/// a_n = 1, b_{N_j} = v_j, b_n = 0 elsewhere, n = 1 .. n_max; diagnostics at xi.
SparseJacobi sparse_jacobi(const std::vector<double>& v, const SparseGrowth& growth, int n_max, double xi);

}  // namespace cdlab::universality
