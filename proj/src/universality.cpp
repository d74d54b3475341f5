#include <cdlab/universality.hpp>

#include <cdlab/special_fn.hpp>

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

namespace cdlab::universality {

namespace {

// Runs fn(i) for i < count on up to jobs threads; rethrows the first failure.
void parallel_for(int count, int jobs, const std::function<void(int)>& fn) {
    jobs = std::clamp(jobs, 1, std::max(count, 1));
    if (jobs == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex m;
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) {
        pool.emplace_back([&] {
            for (int i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(m);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

double kernel_diag(const oprl::RecurrenceCoeffs& rec, int n, double xi) {
    return oprl::cd_kernel(rec, n, xi, xi).real() / rec.mass;
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

}  // namespace

void Grid::validate() const {
    if (!(half_width > 0.0)) throw DomainError("grid.half_width must be positive");
    if (points_per_axis < 3) throw DomainError("grid.points_per_axis must be at least 3");
    if (!(imag_half_width >= 0.0)) throw DomainError("grid.imag_half_width must be nonnegative");
}

std::vector<cplx> Grid::points() const {
    validate();
    std::vector<cplx> pts;
    for (int i = 0; i < points_per_axis; ++i) {
        // symmetric formula keeps the centre exactly 0
        const double x = half_width * (2.0 * i - (points_per_axis - 1)) / (points_per_axis - 1);
        pts.emplace_back(x, 0.0);
        if (imag_half_width > 0.0) {
            pts.emplace_back(x, imag_half_width);
            pts.emplace_back(x, -imag_half_width);
        }
    }
    return pts;
}

PointPairs Grid::pairs() const {
    const auto pts = points();
    PointPairs out;
    out.reserve(pts.size() * pts.size());
    for (const auto& z : pts)
        for (const auto& w : pts) out.emplace_back(z, w);
    return out;
}

SampleSource oprl_source(oprl::RecurrenceCoeffs rec, double xi, ScaleFn h) {
    return [rec = std::move(rec), xi, h = std::move(h)](double index, const PointPairs& pairs) {
        return oprl::rescaled_cd(rec, xi, h, index, pairs);
    };
}

SampleSource opuc_source(opuc::VerblunskyCoeffs v, double xi, ScaleFn h) {
    return [v = std::move(v), xi, h = std::move(h)](double index, const PointPairs& pairs) {
        const int n = static_cast<int>(std::lround(index));
        if (std::abs(index - n) > 0.0) throw DomainError("opuc source: index must be an integer");
        return opuc::rescaled_cd_circle(v, xi, h, n, pairs);
    };
}

SampleSource canonical_source(canonical::Hamiltonian H, double xi, ScaleFn h) {
    return [H = std::move(H), xi, h = std::move(h)](double index, const PointPairs& pairs) {
        return canonical::rescaled_kh(H, xi, h, index, pairs);
    };
}

SampleSource schrodinger_source(std::function<double(double)> V, double beta_bc, double xi, ScaleFn h,
                                canonical::SchrodingerOptions options) {
    return [=](double x, const PointPairs& pairs) {
        const double diag = canonical::schrodinger_kernel(V, beta_bc, x, xi, xi, options).quadrature.real();
        if (!(diag > 0.0)) throw DomainError("schrodinger source: zero diagonal");
        const double s = h(diag);
        std::vector<KernelSample> out;
        out.reserve(pairs.size());
        for (const auto& [z, w] : pairs) {
            const auto k = canonical::schrodinger_kernel(V, beta_bc, x, xi + z / s, xi + w / s, options);
            out.push_back({z, w, k.quadrature / diag});
        }
        return out;
    };
}

ConvergenceReport convergence_study(const SampleSource& source, const KernelFn& target, std::string target_name,
                                    std::vector<double> indices, const Grid& grid,
                                    const ConvergenceOptions& options) {
    if (indices.empty()) throw DomainError("convergence_study: no indices");
    if (!(options.tolerance > 0.0)) throw DomainError("convergence_study: tolerance must be positive");
    if (!std::is_sorted(indices.begin(), indices.end()) ||
        std::adjacent_find(indices.begin(), indices.end()) != indices.end())
        throw DomainError("convergence_study: indices must be strictly increasing");
    const auto pairs = grid.pairs();
    if (std::none_of(pairs.begin(), pairs.end(), [](const auto& p) { return p.first == 0.0 && p.second == 0.0; }))
        throw DomainError("convergence_study: grid must contain (0, 0)");

    ConvergenceReport rep;
    rep.indices = indices;
    rep.target = std::move(target_name);
    rep.tolerance = options.tolerance;
    rep.samples.resize(indices.size());
    parallel_for(static_cast<int>(indices.size()), options.jobs,
                 [&](int i) { rep.samples[i] = source(indices[i], pairs); });

    const auto fit = kernels::fit_internal_scale(rep.samples.back(), target, options.fit);
    rep.fitted_scale = fit.scale;
    rep.fitted_scale_residual = fit.residual;
    for (const auto& s : rep.samples) {
        rep.sup_errors.push_back(kernels::sup_error(s, target, fit.scale));
        rep.raw_errors.push_back(kernels::sup_error(s, target, 1.0));
    }
    bool decreasing = true;
    for (std::size_t i = 1; i < rep.sup_errors.size(); ++i) decreasing = decreasing && rep.sup_errors[i] < rep.sup_errors[i - 1];
    rep.passed = decreasing && rep.sup_errors.back() <= options.tolerance;
    return rep;
}

std::string to_string(ZeroMode mode) {
    switch (mode) {
        case ZeroMode::clock: return "clock";
        case ZeroMode::hard_edge: return "hard_edge";
        case ZeroMode::even_fh: return "even_fh";
        case ZeroMode::freud_levin: return "freud_levin";
    }
    return "?";
}

std::vector<double> limit_kernel_zeros(const kernels::LimitKernelSpec& spec, double c, double anchor, double lo,
                                       double hi, int scan_points) {
    if (!(hi > lo) || scan_points < 2) throw DomainError("limit_kernel_zeros: empty bracket");
    auto f = [&](double x) { return kernels::eval_limit_kernel(spec, c * x, c * anchor).real(); };
    std::vector<double> out;
    double x0 = lo, f0 = f(lo);
    for (int i = 1; i <= scan_points; ++i) {
        const double x1 = lo + (hi - lo) * i / scan_points;
        const double f1 = f(x1);
        if (f0 == 0.0) {
            out.push_back(x0);
        } else if (f0 * f1 < 0.0) {
            double a = x0, b = x1, fa = f0;
            for (int it = 0; it < 100 && b - a > 1e-14 * std::max(1.0, std::abs(a)); ++it) {
                const double m = 0.5 * (a + b);
                const double fm = f(m);
                if (fa * fm <= 0.0) {
                    b = m;
                } else {
                    a = m;
                    fa = fm;
                }
            }
            out.push_back(0.5 * (a + b));
        }
        x0 = x1;
        f0 = f1;
    }
    return out;
}

namespace {

struct NZeros {
    int n = 0;
    std::vector<double> zeros;
    double scale = 0.0;  // h(K_mu(n, xi, xi))
};

std::vector<NZeros> zeros_for(const oprl::RecurrenceCoeffs& rec, const std::vector<int>& degrees, double xi,
                              const ScaleFn& h, int jobs) {
    std::vector<NZeros> out(degrees.size());
    parallel_for(static_cast<int>(degrees.size()), jobs, [&](int i) {
        out[i].n = degrees[i];
        out[i].zeros = oprl::poly_zeros(rec, degrees[i]);
        out[i].scale = h(kernel_diag(rec, degrees[i], xi));
    });
    return out;
}

// Index of the first zero >= xi.
std::size_t first_right(const std::vector<double>& z, double xi) {
    return static_cast<std::size_t>(std::lower_bound(z.begin(), z.end(), xi) - z.begin());
}

void clock_mode(const oprl::RecurrenceCoeffs& rec, const std::vector<int>& n_values, const ZeroStudyOptions& o,
                ZeroReport& rep) {
    const auto data = zeros_for(rec, n_values, o.xi, o.h, o.jobs);
    for (int k = -o.k_max; k <= o.k_max; ++k) rep.limit_predictions[k] = 1.0;
    double worst = 0.0;
    for (const auto& d : data) {
        const auto i1 = static_cast<long>(first_right(d.zeros, o.xi));
        const long lo = i1 - o.k_max - 1, hi = i1 + o.k_max;
        if (lo < 0 || hi >= static_cast<long>(d.zeros.size())) {
            rep.notes.push_back("n=" + std::to_string(d.n) + ": not enough zeros around xi");
            continue;
        }
        double local = 0.0;
        for (int k = -o.k_max; k <= o.k_max + 1; ++k) {
            const double x = d.zeros[i1 + k - 1];
            rep.zeros[{d.n, k}] = x;
            rep.scaled_zeros[{d.n, k}] = d.scale * (x - o.xi);
        }
        for (int k = -o.k_max; k <= o.k_max; ++k) {
            const double gap = d.scale * (d.zeros[i1 + k] - d.zeros[i1 + k - 1]);
            rep.ratios[{d.n, k}] = gap;
            rep.predicted_ratios[{d.n, k}] = 1.0;
            local = std::max(local, std::abs(gap - 1.0));
        }
        rep.diagnostics.emplace_back("max |tau*gap - 1| n=" + std::to_string(d.n), local);
        if (d.n == n_values.back()) worst = local;
    }
    rep.max_rel_error_ratios = worst;
}

struct Regression {
    double slope = 0.0, intercept = 0.0, half_band = 0.0;
};

// Least squares y = a + b x with the 95% t half-width of b.
Regression regress(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t m = x.size();
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / m;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / m;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    Regression r;
    r.slope = sxy / sxx;
    r.intercept = my - r.slope * mx;
    if (m > 2) {
        double sse = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double e = y[i] - r.intercept - r.slope * x[i];
            sse += e * e;
        }
        const double se = std::sqrt(sse / (m - 2) / sxx);
        boost::math::students_t dist(static_cast<double>(m - 2));
        r.half_band = boost::math::quantile(boost::math::complement(dist, 0.025)) * se;
    }
    return r;
}

void hard_edge_mode(const oprl::RecurrenceCoeffs& rec, const std::vector<int>& n_values, const ZeroStudyOptions& o,
                    ZeroReport& rep) {
    const double nu = o.beta - 1.0;
    const auto j = special::bessel_zeros(nu, o.k_max);
    for (int k = 1; k <= o.k_max; ++k) rep.limit_predictions[k] = (j[k - 1] / j[0]) * (j[k - 1] / j[0]);
    const auto data = zeros_for(rec, n_values, o.xi, o.h, o.jobs);
    std::vector<double> lx, ly;
    double worst = 0.0;
    for (const auto& d : data) {
        const auto i1 = first_right(d.zeros, o.xi);
        if (i1 + o.k_max > d.zeros.size()) {
            rep.notes.push_back("n=" + std::to_string(d.n) + ": fewer than k_max zeros right of xi");
            continue;
        }
        const double x1 = d.zeros[i1] - o.xi;
        double local = 0.0;
        for (int k = 1; k <= o.k_max; ++k) {
            const double x = d.zeros[i1 + k - 1];
            rep.zeros[{d.n, k}] = x;
            rep.scaled_zeros[{d.n, k}] = d.scale * (x - o.xi);
            const double r = (x - o.xi) / x1;
            rep.ratios[{d.n, k}] = r;
            rep.predicted_ratios[{d.n, k}] = rep.limit_predictions[k];
            local = std::max(local, std::abs(r / rep.limit_predictions[k] - 1.0));
        }
        if (d.n == n_values.back()) worst = local;
        lx.push_back(std::log(d.scale));
        ly.push_back(std::log(x1));
    }
    rep.max_rel_error_ratios = worst;
    if (lx.size() >= 2) {
        const auto reg = regress(lx, ly);
        rep.diagnostics.emplace_back("exponent", -reg.slope);
        if (lx.size() >= 3) {
            rep.diagnostics.emplace_back("exponent_ci95_low", -reg.slope - reg.half_band);
            rep.diagnostics.emplace_back("exponent_ci95_high", -reg.slope + reg.half_band);
        } else {
            rep.notes.push_back("exponent band needs at least 3 values of n");
        }
    }
    if (!data.empty() && rep.zeros.count({n_values.back(), 1})) {
        const auto& d = data.back();
        const double x1 = rep.zeros[{d.n, 1}] - o.xi;
        rep.diagnostics.emplace_back("h(K)*x1", d.scale * x1);
        rep.diagnostics.emplace_back("h(K)^2*x1", d.scale * d.scale * x1);
        const double observed = d.scale * x1 / (j[0] * j[0]);
        rep.diagnostics.emplace_back("constant_observed", observed);
        const double closed_form = std::pow(pi, 1.0 / o.beta) / (4.0 * std::pow(std::tgamma(o.beta + 1.0), 1.0 / o.beta));
        rep.diagnostics.emplace_back("constant_pi_gamma_form", closed_form);
        // zeros of A(c z) = 0F1(beta; -sigma c z) sit at j_{beta-1,k}^2 / (4 sigma c)
        const double sigma = std::abs(kernels::LimitKernelSpec::build(0.0, 1.0, o.beta).sigma());
        std::string best = "pi^(1/beta)/(4 Gamma(beta+1)^(1/beta))";
        double best_err = std::abs(closed_form / observed - 1.0);
        for (const auto& [name, c] : kernels::scale_candidates(o.beta)) {
            const double pred = 1.0 / (4.0 * sigma * c);
            rep.diagnostics.emplace_back("constant_limit_kernel[c=" + name + "]", pred);
            if (std::abs(pred / observed - 1.0) < best_err) {
                best_err = std::abs(pred / observed - 1.0);
                best = "limit kernel zeros with c=" + name;
            }
        }
        if (o.internal_scale != 1.0) {
            rep.diagnostics.emplace_back("constant_limit_kernel[c=fitted]", 1.0 / (4.0 * sigma * o.internal_scale));
        }
        rep.notes.push_back("closest constant: " + best + " (relative difference " + fmt(best_err) + ")");
    }
}

void even_fh_mode(const oprl::RecurrenceCoeffs& rec, const std::vector<int>& n_values, const ZeroStudyOptions& o,
                  ZeroReport& rep) {
    if (std::any_of(rec.b.begin(), rec.b.end(), [](double b) { return b != 0.0; }))
        throw DomainError("zero_study even_fh: requires an even measure (b == 0)");
    const auto je = special::bessel_zeros(o.beta / 2.0 - 1.0, o.k_max);
    const auto jo = special::bessel_zeros(o.beta / 2.0, o.k_max);
    for (int k = 1; k <= o.k_max; ++k) rep.limit_predictions[k] = je[k - 1] / je[0];
    std::vector<int> degrees;
    for (int n : n_values) {
        degrees.push_back(2 * n);
        degrees.push_back(2 * n + 1);
    }
    const auto data = zeros_for(rec, degrees, 0.0, o.h, o.jobs);
    double worst = 0.0, odd_at_zero = 0.0;
    for (const auto& d : data) {
        const int half = d.n / 2;
        if (half < o.k_max) {
            rep.notes.push_back("degree " + std::to_string(d.n) + ": fewer than k_max positive zeros");
            continue;
        }
        const bool odd = d.n % 2 == 1;
        const auto& jj = odd ? jo : je;
        // the largest half zeros are the positive ones; for odd degree the middle one is 0
        const std::size_t first = d.zeros.size() - half;
        double local = 0.0;
        for (int k = 1; k <= o.k_max; ++k) {
            const double x = d.zeros[first + k - 1];
            rep.zeros[{d.n, k}] = x;
            rep.scaled_zeros[{d.n, k}] = d.scale * x;
            const double r = x / d.zeros[first];
            const double p = jj[k - 1] / jj[0];
            rep.ratios[{d.n, k}] = r;
            rep.predicted_ratios[{d.n, k}] = p;
            local = std::max(local, std::abs(r / p - 1.0));
        }
        if (odd) {
            const auto pv = oprl::eval_polys(rec, d.n, 0.0);
            odd_at_zero = std::max(odd_at_zero, std::abs(pv.values.back()));
        }
        if (d.n >= 2 * n_values.back()) worst = std::max(worst, local);
    }
    rep.max_rel_error_ratios = worst;
    rep.diagnostics.emplace_back("max |p_odd(0)|", odd_at_zero);
    const int ne = 2 * n_values.back(), no = ne + 1;
    if (rep.zeros.count({ne, 1}) && rep.zeros.count({no, 1})) {
        rep.diagnostics.emplace_back("first zero odd/even", rep.zeros[{no, 1}] / rep.zeros[{ne, 1}]);
        rep.diagnostics.emplace_back("first zero odd/even predicted", jo[0] / je[0]);
        rep.diagnostics.emplace_back("h(K)*x1/j1 even", rep.scaled_zeros[{ne, 1}] / je[0]);
        // A(c z) vanishes at j_{beta/2-1,k} / (kappa c) when sigma- = sigma+
        const double kappa = kernels::LimitKernelSpec::build(o.sigma_minus, o.sigma_plus, o.beta).kappa();
        for (const auto& [name, c] : kernels::scale_candidates(o.beta))
            rep.diagnostics.emplace_back("1/(kappa c)[c=" + name + "]", 1.0 / (kappa * c));
    }
}

void freud_levin_mode(const oprl::RecurrenceCoeffs& rec, const std::vector<int>& n_values,
                      const ZeroStudyOptions& o, ZeroReport& rep) {
    const auto data = zeros_for(rec, n_values, o.xi, o.h, o.jobs);
    std::vector<double> kappas;
    for (const auto& d : data) {
        const auto i1 = first_right(d.zeros, o.xi);
        if (i1 >= d.zeros.size()) {
            rep.notes.push_back("n=" + std::to_string(d.n) + ": no zero right of xi");
            continue;
        }
        kappas.push_back(d.scale * (d.zeros[i1] - o.xi));
    }
    if (kappas.empty()) {
        rep.notes.push_back("no first zeros, nothing to compare");
        return;
    }
    const auto [mn, mx] = std::minmax_element(kappas.begin(), kappas.end());
    rep.diagnostics.emplace_back("kappa1", kappas.back());
    rep.diagnostics.emplace_back("kappa1_spread", *mx - *mn);
    const double kappa1 = kappas.back();

    const auto spec = kernels::LimitKernelSpec::build(o.sigma_minus, o.sigma_plus, o.beta);
    const auto& d = data.back();
    const auto i1 = static_cast<long>(first_right(d.zeros, o.xi));
    const long lo_i = std::max(0L, i1 - o.k_max), hi_i = std::min<long>(d.zeros.size() - 1, i1 + o.k_max);
    const double lo = d.scale * (d.zeros[lo_i] - o.xi), hi = d.scale * (d.zeros[hi_i] - o.xi);
    const double pad = 0.5 * (hi - lo) / std::max(1L, hi_i - lo_i) + 1e-9;
    auto right = limit_kernel_zeros(spec, o.internal_scale, kappa1, kappa1 + 1e-9, hi + pad);
    auto left = limit_kernel_zeros(spec, o.internal_scale, kappa1, lo - pad, kappa1 - 1e-9);
    double worst = 0.0;
    for (long i = lo_i; i <= hi_i; ++i) {
        const int k = static_cast<int>(i - i1 + 1);
        const double s = d.scale * (d.zeros[i] - o.xi);
        rep.zeros[{d.n, k}] = d.zeros[i];
        rep.scaled_zeros[{d.n, k}] = s;
        if (k == 1) continue;
        std::optional<double> pred;
        if (k > 1 && static_cast<std::size_t>(k - 2) < right.size()) pred = right[k - 2];
        if (k < 1 && static_cast<std::size_t>(1 - k) <= left.size()) pred = left[left.size() - (1 - k)];
        if (!pred) {
            rep.notes.push_back("no limit-kernel zero for k=" + std::to_string(k));
            continue;
        }
        rep.limit_predictions[k] = *pred;
        rep.ratios[{d.n, k}] = s;
        rep.predicted_ratios[{d.n, k}] = *pred;
        worst = std::max(worst, std::abs(s - *pred) / std::abs(*pred - kappa1));
    }
    rep.max_rel_error_ratios = worst;
    if (*mx - *mn > 0.05 * std::max(1.0, std::abs(kappa1)))
        rep.notes.push_back("first scaled zero does not settle across n (spread " + fmt(*mx - *mn) + ")");
}

}  // namespace

ZeroReport zero_study(const oprl::RecurrenceCoeffs& rec, const std::vector<int>& n_values,
                      const ZeroStudyOptions& options) {
    if (n_values.empty()) throw DomainError("zero_study: no n values");
    if (!std::is_sorted(n_values.begin(), n_values.end()) || n_values.front() < 1)
        throw DomainError("zero_study: n values must be positive and increasing");
    if (!options.h) throw DomainError("zero_study: missing scale function");
    if (options.k_max < 1) throw DomainError("zero_study: k_max must be positive");
    const int need = options.mode == ZeroMode::even_fh ? 2 * n_values.back() + 1 : n_values.back();
    if (need > rec.size()) throw DomainError("zero_study: recurrence too short for the requested degrees");
    ZeroReport rep;
    rep.mode = options.mode;
    rep.n_values = n_values;
    switch (options.mode) {
        case ZeroMode::clock: clock_mode(rec, n_values, options, rep); break;
        case ZeroMode::hard_edge: hard_edge_mode(rec, n_values, options, rep); break;
        case ZeroMode::even_fh: even_fh_mode(rec, n_values, options, rep); break;
        case ZeroMode::freud_levin: freud_levin_mode(rec, n_values, options, rep); break;
    }
    return rep;
}

double SparseDiagnostics::g(double t) const {
    if (t <= 0.0) return 0.0;
    const double last = static_cast<double>(cumulative.size() - 1);
    if (t >= last) return cumulative.back();
    const auto n = static_cast<std::size_t>(t);
    return cumulative[n] + (t - n) * (cumulative[n + 1] - cumulative[n]);
}

double SparseDiagnostics::g_inverse(double y) const {
    if (y <= 0.0) return 0.0;
    if (y > cumulative.back()) throw DomainError("sparse g_inverse: value beyond the computed range");
    const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), y);
    const auto k = static_cast<std::size_t>(it - cumulative.begin());
    return (k - 1) + (y - cumulative[k - 1]) / (cumulative[k] - cumulative[k - 1]);
}

double SparseDiagnostics::predicted_kernel(double t) const {
    const auto n = static_cast<std::size_t>(std::floor(t));
    if (t < 0.0 || n >= norm_sq.size()) throw DomainError("sparse predicted_kernel: t out of range");
    return t * norm_sq[n];
}

ScaleFn SparseDiagnostics::scale() const {
    const double denom = pi * std::sqrt(4.0 - xi * xi);
    return [self = *this, denom](double y) { return self.g_inverse(y) / denom; };
}

SparseJacobi sparse_jacobi(const std::vector<double>& v, const SparseGrowth& growth, int n_max, double xi) {
    if (n_max < 1) throw DomainError("sparse_jacobi: n_max must be positive");
    if (!(std::abs(xi) < 2.0)) throw DomainError("sparse_jacobi: xi must lie in (-2, 2)");
    std::vector<long> sites;
    if (!growth.points.empty()) {
        if (growth.ratio != 0.0) throw DomainError("sparse_jacobi: give either explicit points or a ratio");
        sites = growth.points;
        if (sites.front() < 1) throw DomainError("sparse_jacobi: sites must be positive");
        for (std::size_t j = 1; j < sites.size(); ++j) {
            if (sites[j] <= sites[j - 1]) throw DomainError("sparse_jacobi: sites must increase");
            if (j >= 2 && double(sites[j]) / sites[j - 1] < double(sites[j - 1]) / sites[j - 2] - 1e-12)
                throw DomainError("sparse_jacobi: site ratios must not decrease");
        }
    } else {
        if (!(growth.ratio > 1.0)) throw DomainError("sparse_jacobi: growth ratio must exceed 1");
        for (int j = 1;; ++j) {
            const double s = std::round(std::pow(growth.ratio, j));
            if (s > n_max) break;
            if (!sites.empty() && s <= sites.back()) throw DomainError("sparse_jacobi: growth ratio too close to 1");
            sites.push_back(static_cast<long>(s));
        }
    }
    std::vector<double> a(n_max, 1.0), b(n_max, 0.0);
    std::size_t used = 0;
    for (std::size_t j = 0; j < sites.size() && sites[j] <= n_max; ++j, ++used) {
        if (j >= v.size()) throw DomainError("sparse_jacobi: fewer v values than sites up to n_max");
        if (!std::isfinite(v[j])) throw DomainError("sparse_jacobi: v must be finite");
        b[sites[j] - 1] = v[j];
    }
    sites.resize(used);

    SparseJacobi out;
    out.rec = oprl::make_coeffs(std::move(a), std::move(b), "sparse_jacobi");
    auto& d = out.diagnostics;
    d.xi = xi;
    d.sites = sites;
    const auto pv = oprl::eval_polys(out.rec, n_max, xi);
    if (pv.rescaled) throw NumericalError("sparse_jacobi: polynomial overflow at xi");
    const double theta = std::acos(xi / 2.0);
    const cplx I(0.0, 1.0);
    const cplx det = 2.0 * I * std::sin(theta);
    d.a_vectors.resize(n_max + 1);
    d.norm_sq.resize(n_max + 1);
    d.cumulative.assign(n_max + 2, 0.0);
    for (int n = 0; n <= n_max; ++n) {
        const double p = pv.values[n].real();
        const double ap = n == 0 ? 0.0 : out.rec.a[n - 1] * pv.values[n - 1].real();
        const cplx rot = std::exp(-I * double(n - 1) * theta);
        const cplx a1 = rot * (p - std::exp(-I * theta) * ap) / det;
        const cplx a2 = std::conj(rot) * (-p + std::exp(I * theta) * ap) / det;
        d.a_vectors[n] = {a1, a2};
        d.norm_sq[n] = 2.0 * (p * p - xi * p * ap + ap * ap) / (4.0 - xi * xi);
        d.cumulative[n + 1] = d.cumulative[n] + d.norm_sq[n];
    }
    return out;
}

}  // namespace cdlab::universality
