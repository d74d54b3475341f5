#include <cdlab/experiments.hpp>

#include <cdlab/canonical.hpp>
#include <cdlab/limit_kernels.hpp>
#include <cdlab/measures.hpp>
#include <cdlab/oprl.hpp>
#include <cdlab/opuc.hpp>
#include <cdlab/universality.hpp>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace cdlab::experiments {

namespace {

using json = nlohmann::json;
namespace uni = cdlab::universality;

const std::vector<std::string> kNames = {"bulk",  "hard_edge",   "fisher_hartwig", "jump",      "opuc_bulk",
                                         "sparse", "canonical_identities", "schrodinger", "identities"};

// Measures each experiment accepts.
std::vector<std::string> allowed_measures(const std::string& e) {
    if (e == "sparse") return {"sparse_jacobi"};
    if (e == "schrodinger") return {"free_schrodinger"};
    if (e == "identities" || e == "canonical_identities") return {"none"};
    if (e == "opuc_bulk") return {"circle_lebesgue", "circle_power", "circle_jump"};
    return {"pure_point_bulk", "power_hard_edge", "even_fh", "chebyshev", "legendre", "jump"};
}

std::vector<double> r_grid() {
    std::vector<double> r;
    for (int i = 0; i <= 30; ++i) r.push_back(std::pow(10.0, 1.0 + 3.0 * i / 30.0));
    return r;
}

double number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path, "must be a number");
    const double x = j.get<double>();
    if (!std::isfinite(x)) throw ConfigError(path, "must be finite");
    return x;
}

std::optional<double> positive_pin(const json& obj, const char* key) {
    if (!obj.contains(key)) return std::nullopt;
    const double x = number(obj.at(key), std::string("pins.") + key);
    if (!(x >= 0.0)) throw ConfigError(std::string("pins.") + key, "must be nonnegative");
    return x;
}

void check_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
    for (const auto& [k, v] : obj.items()) {
        (void)v;
        if (!allowed.count(k)) throw ConfigError(path.empty() ? k : path + "." + k, "unknown field");
    }
}

void validate(const ExperimentConfig& c) {
    if (!(c.tolerance > 0.0)) throw ConfigError("tolerance", "must be positive");
    if (!(c.zero_tolerance > 0.0)) throw ConfigError("zero_tolerance", "must be positive");
    if (!(c.grid.half_width > 0.0)) throw ConfigError("grid.half_width", "must be positive");
    if (c.grid.points_per_axis < 3) throw ConfigError("grid.points_per_axis", "must be at least 3");
    if (c.grid.points_per_axis % 2 == 0)
        throw ConfigError("grid.points_per_axis", "must be odd so that the grid contains (0, 0)");
    const auto ms = allowed_measures(c.experiment);
    if (std::find(ms.begin(), ms.end(), c.measure) == ms.end())
        throw ConfigError("measure.name", "'" + c.measure + "' is not available for experiment " + c.experiment);
    const bool needs_n = c.experiment != "identities" && c.experiment != "canonical_identities";
    if (needs_n && c.n_values.empty()) throw ConfigError("n_values", "must not be empty");
    for (std::size_t i = 0; i < c.n_values.size(); ++i) {
        const std::string p = "n_values[" + std::to_string(i) + "]";
        const double n = c.n_values[i];
        if (!(n > 0.0)) throw ConfigError(p, "must be positive");
        if (i > 0 && !(n > c.n_values[i - 1])) throw ConfigError(p, "n_values must be strictly increasing");
        if (c.experiment != "schrodinger" && n != std::floor(n)) throw ConfigError(p, "must be an integer");
        if (n > 1e6) throw ConfigError(p, "too large (limit 1e6)");
    }
    if (c.experiment == "schrodinger" && !(c.xi > 0.0)) throw ConfigError("xi", "must be positive (bulk of [0, inf))");
    if (c.experiment == "sparse" && !(std::abs(c.xi) < 2.0)) throw ConfigError("xi", "must lie in (-2, 2)");
    if (c.experiment == "sparse") {
        for (const auto& [k, v] : c.measure_params) {
            if (k != "ratio" && k != "amplitude" && k != "decay")
                throw ConfigError("measure.params." + k, "unknown parameter of sparse_jacobi");
            (void)v;
        }
        const auto it = c.measure_params.find("ratio");
        if (it != c.measure_params.end() && !(it->second > 1.0))
            throw ConfigError("measure.params.ratio", "must exceed 1");
    } else if (c.measure != "none" && c.measure != "free_schrodinger") {
        try {
            (void)measures::gallery(c.measure, c.measure_params);
        } catch (const DomainError& e) {
            throw ConfigError("measure.params", e.what());
        }
    } else if (!c.measure_params.empty()) {
        throw ConfigError("measure.params", "'" + c.measure + "' takes no parameters");
    }
}

}  // namespace

std::vector<std::string> experiment_names() { return kNames; }

ExperimentConfig default_config(const std::string& experiment) {
    if (std::find(kNames.begin(), kNames.end(), experiment) == kNames.end())
        throw ConfigError("experiment", "unknown experiment '" + experiment + "'");
    ExperimentConfig c;
    c.experiment = experiment;
    c.output_dir = "cdlab_out/" + experiment;
    if (experiment == "bulk") {
        c.measure = "legendre";
        c.n_values = {50, 100, 200};
    } else if (experiment == "hard_edge") {
        c.measure = "power_hard_edge";
        c.measure_params = {{"beta", 1.5}};
        c.n_values = {100, 200, 300};
    } else if (experiment == "fisher_hartwig") {
        c.measure = "even_fh";
        c.measure_params = {{"beta", 3.0}};
        c.n_values = {50, 100, 200};
    } else if (experiment == "jump") {
        c.measure = "jump";
        c.measure_params = {{"sigma_minus", 1.0}, {"sigma_plus", 3.0}};
        c.n_values = {50, 100, 200};
    } else if (experiment == "opuc_bulk") {
        c.measure = "circle_lebesgue";
        c.n_values = {100, 1000, 10000};
        c.tolerance = 1e-2;
    } else if (experiment == "sparse") {
        c.measure = "sparse_jacobi";
        c.measure_params = {{"ratio", 4.0}, {"amplitude", 1.0}, {"decay", 0.5}};
        c.n_values = {1000, 10000};
        c.tolerance = 0.15;
    } else if (experiment == "schrodinger") {
        c.measure = "free_schrodinger";
        c.xi = 1.0;
        c.n_values = {50, 100, 200};
        c.grid.half_width = 1.0;
    } else {
        c.measure = "none";
    }
    return c;
}

ExperimentConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<document>", std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("<document>", "must be a JSON object");
    check_keys(j, "", {"experiment", "measure", "xi", "n_values", "grid", "tolerance", "zero_tolerance", "seed",
                       "output_dir", "pins"});
    if (!j.contains("experiment")) throw ConfigError("experiment", "missing");
    if (!j["experiment"].is_string()) throw ConfigError("experiment", "must be a string");
    ExperimentConfig c = default_config(j["experiment"].get<std::string>());

    if (j.contains("measure")) {
        const auto& m = j["measure"];
        if (m.is_string()) {
            c.measure = m.get<std::string>();
            c.measure_params.clear();
        } else if (m.is_object()) {
            check_keys(m, "measure", {"name", "params"});
            if (!m.contains("name") || !m["name"].is_string()) throw ConfigError("measure.name", "must be a string");
            c.measure = m["name"].get<std::string>();
            c.measure_params.clear();
            if (m.contains("params")) {
                if (!m["params"].is_object()) throw ConfigError("measure.params", "must be an object");
                for (const auto& [k, v] : m["params"].items()) c.measure_params[k] = number(v, "measure.params." + k);
            }
        } else {
            throw ConfigError("measure", "must be a name or an object {name, params}");
        }
    }
    if (j.contains("xi")) c.xi = number(j["xi"], "xi");
    if (j.contains("n_values")) {
        if (!j["n_values"].is_array()) throw ConfigError("n_values", "must be an array");
        c.n_values.clear();
        for (std::size_t i = 0; i < j["n_values"].size(); ++i)
            c.n_values.push_back(number(j["n_values"][i], "n_values[" + std::to_string(i) + "]"));
    }
    if (j.contains("grid")) {
        const auto& g = j["grid"];
        if (!g.is_object()) throw ConfigError("grid", "must be an object");
        check_keys(g, "grid", {"half_width", "points_per_axis"});
        if (g.contains("half_width")) c.grid.half_width = number(g["half_width"], "grid.half_width");
        if (g.contains("points_per_axis")) {
            if (!g["points_per_axis"].is_number_integer()) throw ConfigError("grid.points_per_axis", "must be an integer");
            const auto p = g["points_per_axis"].get<long long>();
            if (p < 3 || p > 401) throw ConfigError("grid.points_per_axis", "must lie in [3, 401]");
            c.grid.points_per_axis = static_cast<int>(p);
        }
    }
    if (j.contains("tolerance")) c.tolerance = number(j["tolerance"], "tolerance");
    if (j.contains("zero_tolerance")) c.zero_tolerance = number(j["zero_tolerance"], "zero_tolerance");
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) throw ConfigError("seed", "must be a nonnegative integer");
        c.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("output_dir")) {
        if (!j["output_dir"].is_string()) throw ConfigError("output_dir", "must be a string");
        c.output_dir = j["output_dir"].get<std::string>();
    }
    if (j.contains("pins")) {
        const auto& p = j["pins"];
        if (!p.is_object()) throw ConfigError("pins", "must be an object");
        check_keys(p, "pins", {"eta", "beta", "sigma_minus", "sigma_plus"});
        c.pins.eta = positive_pin(p, "eta");
        c.pins.beta = positive_pin(p, "beta");
        c.pins.sigma_minus = positive_pin(p, "sigma_minus");
        c.pins.sigma_plus = positive_pin(p, "sigma_plus");
        if (c.pins.beta && !(*c.pins.beta > 0.0)) throw ConfigError("pins.beta", "must be positive");
        if (c.pins.eta && !(*c.pins.eta > 0.0)) throw ConfigError("pins.eta", "must be positive");
    }
    validate(c);
    return c;
}

std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

struct Runner {
    const ExperimentConfig& cfg;
    int jobs;
    ExperimentResult res;

    Runner(const ExperimentConfig& c, int j) : cfg(c), jobs(j) { res.config = c; }

    void value(std::string key, double v) { res.values.emplace_back(std::move(key), v); }

    void line(std::string result, std::string check, double v, std::string rel, double bound, double high = 0.0) {
        bool ok = false;
        if (rel == "<=") ok = v <= bound;
        else if (rel == ">=") ok = v >= bound;
        else if (rel == "==") ok = v == bound;
        else if (rel == "in") ok = v >= bound && v <= high;
        res.lines.push_back({std::move(result), std::move(check), v, bound, std::move(rel), high, ok});
    }

    uni::Grid grid() const { return {cfg.grid.half_width, cfg.grid.points_per_axis, 0.0}; }

    std::vector<int> int_n() const {
        std::vector<int> n;
        for (double x : cfg.n_values) n.push_back(static_cast<int>(x));
        return n;
    }

    struct Local {
        double beta, sigma_minus, sigma_plus;
    };

    Local local(const measures::Measure& mu) {
        const auto est = measures::local_scaling(mu, cfg.xi, r_grid());
        value("local_scaling.beta_hat", est.beta_hat);
        value("local_scaling.sigma_minus_hat", est.sigma_minus_hat);
        value("local_scaling.sigma_plus_hat", est.sigma_plus_hat);
        value("local_scaling.fit_residual", est.fit_residual);
        Local l{cfg.pins.beta.value_or(est.beta_hat), cfg.pins.sigma_minus.value_or(est.sigma_minus_hat),
                cfg.pins.sigma_plus.value_or(est.sigma_plus_hat)};
        if (cfg.pins.beta || cfg.pins.sigma_minus || cfg.pins.sigma_plus) res.notes.push_back("pinned values override local_scaling");
        return l;
    }

    void keep_kernels(const uni::ConvergenceReport& rep) {
        for (std::size_t i = 0; i < rep.indices.size(); ++i) res.kernels.push_back({rep.indices[i], rep.samples[i]});
    }

    void keep_zeros(const uni::ZeroReport& z) {
        for (const auto& [key, x] : z.zeros) res.zeros.push_back({key.first, key.second, x, z.scaled_zeros.at(key)});
        for (const auto& [k, v] : z.diagnostics) value("zeros." + k, v);
        for (const auto& n : z.notes) res.notes.push_back("zeros: " + n);
    }

    void convergence_lines(const std::string& result, const uni::ConvergenceReport& rep, bool raw) {
        const auto& errs = raw ? rep.raw_errors : rep.sup_errors;
        for (std::size_t i = 0; i < rep.indices.size(); ++i) {
            value("sup_error[" + format_number(rep.indices[i]) + "]", rep.sup_errors[i]);
            value("raw_error[" + format_number(rep.indices[i]) + "]", rep.raw_errors[i]);
        }
        value("fitted_scale", rep.fitted_scale);
        value("fitted_scale_residual", rep.fitted_scale_residual);
        int increases = 0;
        for (std::size_t i = 1; i < errs.size(); ++i) increases += errs[i] >= errs[i - 1];
        const std::string what = raw ? "sup error vs " + rep.target : "sup error vs " + rep.target + " after fitted scale";
        line(result, what + " decreases over indices (count of increases)", increases, "==", 0.0);
        line(result, what + " at index " + format_number(rep.indices.back()), errs.back(), "<=", cfg.tolerance);
    }

    void candidates(double beta) {
        for (const auto& [name, c] : kernels::scale_candidates(beta)) value("scale_candidate[" + name + "]", c);
    }

    // ---- experiments ----

    void bulk() {
        const auto mu = measures::gallery(cfg.measure, cfg.measure_params);
        const auto l = local(mu);
        const double eta = cfg.pins.eta.value_or(0.5 * (l.sigma_minus + l.sigma_plus));
        value("eta", eta);
        const int nmax = int_n().back();
        const auto rec = oprl::stieltjes_coeffs(mu, nmax + 1);
        const ScaleFn h = [eta](double y) { return eta * y; };
        uni::ConvergenceOptions opt{cfg.tolerance, jobs, {}};
        const auto rep = uni::convergence_study(uni::oprl_source(rec, cfg.xi, h), kernels::sine_kernel, "sine kernel",
                                                cfg.n_values, grid(), opt);
        convergence_lines("bulk universality", rep, true);
        keep_kernels(rep);
        const auto spec = kernels::LimitKernelSpec::build(std::max(l.sigma_minus, 1e-12), std::max(l.sigma_plus, 1e-12), 1.0);
        const auto fit = kernels::fit_internal_scale(rep.samples.back(), spec);
        value("fitted_scale_vs_limit_kernel", fit.scale);
        value("fitted_scale_vs_limit_kernel_residual", fit.residual);
        candidates(1.0);
        line("Nevai-type condition", "K(n+1,xi,xi)/K(n,xi,xi) - 1 at n = " + std::to_string(nmax),
             std::abs(oprl::nevai_ratio(rec, cfg.xi, nmax) - 1.0), "<=", cfg.tolerance);
        uni::ZeroStudyOptions zo;
        zo.mode = uni::ZeroMode::clock;
        zo.xi = cfg.xi;
        zo.h = h;
        zo.jobs = jobs;
        const auto z = uni::zero_study(rec, int_n(), zo);
        keep_zeros(z);
        line("clock behavior", "max |tau_n (x_{j+1} - x_j) - 1| for |j| <= 3 at n = " + std::to_string(nmax),
             z.max_rel_error_ratios, "<=", cfg.tolerance);
    }

    // Shared part of hard_edge, fisher_hartwig, jump: convergence to the limit kernel.
    std::pair<oprl::RecurrenceCoeffs, double> limit_family(const std::string& result, int degree_max, Local& l) {
        const auto mu = measures::gallery(cfg.measure, cfg.measure_params);
        l = local(mu);
        const double beta = l.beta;
        const auto rec = oprl::stieltjes_coeffs(mu, degree_max + 1);
        const ScaleFn h = [beta](double y) { return std::pow(y, 1.0 / beta); };
        const auto spec = kernels::LimitKernelSpec::build(l.sigma_minus, l.sigma_plus, beta);
        const KernelFn target = [spec](cplx z, cplx w) { return kernels::eval_limit_kernel(spec, z, w); };
        uni::ConvergenceOptions opt{cfg.tolerance, jobs, {}};
        const auto rep = uni::convergence_study(uni::oprl_source(rec, cfg.xi, h), target, "K_{sigma-,sigma+,beta}",
                                                cfg.n_values, grid(), opt);
        convergence_lines(result, rep, false);
        keep_kernels(rep);
        candidates(beta);
        return {rec, rep.fitted_scale};
    }

    void hard_edge() {
        Local l{};
        const auto [rec, c] = limit_family("rescaling limit at a hard edge", int_n().back(), l);
        const double beta = l.beta;
        uni::ZeroStudyOptions zo;
        zo.mode = uni::ZeroMode::hard_edge;
        zo.xi = cfg.xi;
        zo.beta = beta;
        zo.h = [beta](double y) { return std::pow(y, 1.0 / beta); };
        zo.internal_scale = c;
        zo.jobs = jobs;
        const auto z = uni::zero_study(rec, int_n(), zo);
        keep_zeros(z);
        line("hard-edge zero asymptotics",
             "max |(x_k/x_1) / (j_{beta-1,k}/j_{beta-1,1})^2 - 1|, k <= 3, n = " + std::to_string(int_n().back()),
             z.max_rel_error_ratios, "<=", cfg.zero_tolerance);
    }

    void fisher_hartwig() {
        Local l{};
        const int nmax = int_n().back();
        const auto [rec, c] = limit_family("rescaling limit at a Fisher-Hartwig singularity", 2 * nmax + 1, l);
        const double beta = l.beta;
        uni::ZeroStudyOptions zo;
        zo.mode = uni::ZeroMode::even_fh;
        zo.beta = beta;
        zo.sigma_minus = l.sigma_minus;
        zo.sigma_plus = l.sigma_plus;
        zo.h = [beta](double y) { return std::pow(y, 1.0 / beta); };
        zo.internal_scale = c;
        zo.jobs = jobs;
        const auto z = uni::zero_study(rec, int_n(), zo);
        keep_zeros(z);
        line("even-measure zero law",
             "max ratio error of positive zeros of p_{2n}, p_{2n+1} vs Bessel zeros, n = " + std::to_string(nmax),
             z.max_rel_error_ratios, "<=", cfg.zero_tolerance);
        double odd0 = 0.0;
        for (const auto& [k, v] : z.diagnostics)
            if (k == "max |p_odd(0)|") odd0 = v;
        line("even-measure zero law", "max |p_{2n+1}(0)|", odd0, "==", 0.0);
    }

    void jump() {
        Local l{};
        const auto [rec, c] = limit_family("rescaling limit at a jump", int_n().back(), l);
        uni::ZeroStudyOptions zo;
        zo.mode = uni::ZeroMode::freud_levin;
        zo.xi = cfg.xi;
        zo.beta = l.beta;
        zo.sigma_minus = l.sigma_minus;
        zo.sigma_plus = l.sigma_plus;
        const double beta = l.beta;
        zo.h = [beta](double y) { return std::pow(y, 1.0 / beta); };
        zo.internal_scale = c;
        zo.jobs = jobs;
        const auto z = uni::zero_study(rec, int_n(), zo);
        keep_zeros(z);
        line("generalized Freud-Levin theorem",
             "max |scaled zero - limit-kernel zero| / |limit-kernel zero - kappa_1|, |k| <= 3",
             z.max_rel_error_ratios, "<=", cfg.zero_tolerance);
    }

    void opuc_bulk() {
        const auto mu = measures::gallery(cfg.measure, cfg.measure_params);
        const auto l = local(mu);
        const double eta = cfg.pins.eta.value_or(0.5 * (l.sigma_minus + l.sigma_plus));
        value("eta", eta);
        const int nmax = int_n().back();
        // the normalized Lebesgue measure has all Verblunsky coefficients 0
        const auto v = cfg.measure == "circle_lebesgue" ? opuc::lebesgue(nmax + 1) : opuc::verblunsky_from_measure(mu, nmax + 1);
        const ScaleFn h = [eta](double y) { return eta * y; };
        uni::ConvergenceOptions opt{cfg.tolerance, jobs, {}};
        const auto rep = uni::convergence_study(uni::opuc_source(v, cfg.xi, h), kernels::sine_kernel, "sine kernel",
                                                cfg.n_values, grid(), opt);
        convergence_lines("bulk universality on the unit circle", rep, true);
        keep_kernels(rep);
        const auto fit = kernels::fit_internal_scale(rep.samples.back(), kernels::LimitKernelSpec::build(1.0, 1.0, 1.0));
        value("fitted_scale_vs_K111", fit.scale);
        value("fitted_scale_vs_K111_residual", fit.residual);
        candidates(1.0);
    }

    void sparse() {
        auto param = [&](const char* k, double d) {
            const auto it = cfg.measure_params.find(k);
            return it == cfg.measure_params.end() ? d : it->second;
        };
        const double ratio = param("ratio", 4.0), amp = param("amplitude", 1.0), decay = param("decay", 0.5);
        const int tmax = int_n().back();
        const int n_max = 2 * tmax + 2;
        std::vector<double> v;
        for (int j = 1; std::pow(ratio, j) <= n_max + 1; ++j) v.push_back(amp * std::pow(double(j), -decay));
        const auto sj = uni::sparse_jacobi(v, {{}, ratio}, n_max, cfg.xi);
        const auto& d = sj.diagnostics;
        // ||A_n||^2 on each block N_j <= n < N_{j+1}
        std::vector<long> edges{0};
        for (long s : d.sites) edges.push_back(s);
        edges.push_back(static_cast<long>(d.norm_sq.size()));
        double spread = 0.0;
        for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
            const double ref = d.norm_sq[edges[b]];
            for (long n = edges[b]; n < edges[b + 1]; ++n) spread = std::max(spread, std::abs(d.norm_sq[n] / ref - 1.0));
        }
        line("sparse regular variation", "max relative variation of ||A_n||^2 within blocks", spread, "<=", 1e-12);
        for (double t : cfg.n_values) {
            const int ti = static_cast<int>(t);
            const double k1 = oprl::cd_kernel(sj.rec, ti, cfg.xi, cfg.xi).real();
            const double k2 = oprl::cd_kernel(sj.rec, 2 * ti, cfg.xi, cfg.xi).real();
            value("K(t)[" + format_number(t) + "]", k1);
            value("K(2t)/K(t)[" + format_number(t) + "]", k2 / k1);
            value("K(t)/g(t)[" + format_number(t) + "]", k1 / d.g(t));
            value("K(t)/(t ||A||^2)[" + format_number(t) + "]", k1 / d.predicted_kernel(t));
        }
        const double k1 = oprl::cd_kernel(sj.rec, tmax, cfg.xi, cfg.xi).real();
        const double k2 = oprl::cd_kernel(sj.rec, 2 * tmax, cfg.xi, cfg.xi).real();
        line("sparse regular variation", "K(2t,xi,xi)/K(t,xi,xi) at t = " + std::to_string(tmax), k2 / k1, "in", 1.9, 2.1);
        uni::ConvergenceOptions opt{cfg.tolerance, jobs, {}};
        const auto rep = uni::convergence_study(uni::oprl_source(sj.rec, cfg.xi, d.scale()), kernels::sine_kernel,
                                                "sine kernel", cfg.n_values, grid(), opt);
        convergence_lines("sine kernel limit for sparse decaying Jacobi matrices", rep, true);
        keep_kernels(rep);
        candidates(1.0);
    }

    void schrodinger() {
        const auto V = [](double) { return 0.0; };
        const double eta = cfg.pins.eta.value_or(std::sqrt(cfg.xi) / pi);
        value("eta", eta);
        const ScaleFn h = [eta](double y) { return eta * y; };
        canonical::SchrodingerOptions so;
        so.tol = 1e-9;
        uni::ConvergenceOptions opt{cfg.tolerance, jobs, {}};
        const auto rep = uni::convergence_study(uni::schrodinger_source(V, 0.0, cfg.xi, h, so), kernels::sine_kernel,
                                                "sine kernel", cfg.n_values, grid(), opt);
        convergence_lines("bulk universality for Schrodinger operators", rep, true);
        keep_kernels(rep);
        const cplx z(1.0, 0.2), w(2.0, 0.0);
        const auto k = canonical::schrodinger_kernel(V, 0.0, 5.0, z, w);
        const cplx exact = canonical::free_dirichlet_kernel(5.0, z, w);
        line("Schrodinger kernel", "|quadrature - Wronskian| / |K| at x = 5", std::abs(k.quadrature - k.wronskian) / std::abs(exact),
             "<=", 1e-8);
        line("Schrodinger kernel", "|quadrature - closed form| / |K| at x = 5", std::abs(k.quadrature - exact) / std::abs(exact),
             "<=", 1e-8);
    }

    void identities(const std::string& filter) {
        for (const auto& c : identities::run(filter, cfg.seed))
            line(c.module + " identity", c.name, c.error, "<=", c.tolerance);
    }

    void run() {
        const auto& e = cfg.experiment;
        if (e == "bulk") bulk();
        else if (e == "hard_edge") hard_edge();
        else if (e == "fisher_hartwig") fisher_hartwig();
        else if (e == "jump") jump();
        else if (e == "opuc_bulk") opuc_bulk();
        else if (e == "sparse") sparse();
        else if (e == "schrodinger") schrodinger();
        else if (e == "canonical_identities") identities("canonical");
        else if (e == "identities") identities("");
        res.passed = !res.lines.empty() &&
                     std::all_of(res.lines.begin(), res.lines.end(), [](const ReportLine& l) { return l.passed; });
    }
};

std::string relation_text(const ReportLine& l) {
    if (l.relation == "in") return "in [" + format_number(l.bound) + ", " + format_number(l.bound_high) + "]";
    return l.relation + " " + format_number(l.bound);
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, int jobs) {
    validate(config);
    if (jobs < 1) throw ConfigError("jobs", "must be at least 1");
    Runner r(config, jobs);
    r.run();
    return std::move(r.res);
}

void write_artifacts(const ExperimentResult& result, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const auto& c = result.config;
    {
        std::ofstream out(dir / "report.txt");
        out << "experiment " << c.experiment << "\nmeasure " << c.measure;
        for (const auto& [k, v] : c.measure_params) out << " " << k << "=" << format_number(v);
        out << "\nxi " << format_number(c.xi) << "\nseed " << c.seed << "\n\n";
        for (const auto& l : result.lines)
            out << (l.passed ? "PASS" : "FAIL") << "  [" << l.result << "] " << l.check << ": " << format_number(l.value)
                << " " << relation_text(l) << "\n";
        out << "\n";
        for (const auto& [k, v] : result.values) out << k << " = " << format_number(v) << "\n";
        for (const auto& n : result.notes) out << "note: " << n << "\n";
        out << "\nstatus " << (result.passed ? "PASS" : "FAIL") << "\n";
    }
    {
        nlohmann::ordered_json j;
        j["experiment"] = c.experiment;
        j["passed"] = result.passed;
        j["config"] = {{"measure", {{"name", c.measure}, {"params", c.measure_params}}},
                       {"xi", c.xi},
                       {"n_values", c.n_values},
                       {"grid", {{"half_width", c.grid.half_width}, {"points_per_axis", c.grid.points_per_axis}}},
                       {"tolerance", c.tolerance},
                       {"zero_tolerance", c.zero_tolerance},
                       {"seed", c.seed}};
        j["lines"] = nlohmann::ordered_json::array();
        for (const auto& l : result.lines) {
            nlohmann::ordered_json e{{"result", l.result}, {"check", l.check}, {"value", l.value},
                                     {"relation", l.relation}, {"bound", l.bound}, {"passed", l.passed}};
            if (l.relation == "in") e["bound_high"] = l.bound_high;
            j["lines"].push_back(e);
        }
        j["values"] = nlohmann::ordered_json::object();
        for (const auto& [k, v] : result.values) j["values"][k] = v;
        j["notes"] = result.notes;
        std::ofstream out(dir / "report.json");
        out << j.dump(2) << "\n";
    }
    for (const auto& t : result.kernels) {
        std::ofstream out(dir / ("kernel_" + format_number(t.index) + ".csv"));
        out << "re_z,im_z,re_w,im_w,re_K,im_K\n";
        for (const auto& s : t.samples)
            out << format_number(s.z.real()) << "," << format_number(s.z.imag()) << "," << format_number(s.w.real()) << ","
                << format_number(s.w.imag()) << "," << format_number(s.value.real()) << ","
                << format_number(s.value.imag()) << "\n";
    }
    if (!result.zeros.empty()) {
        std::ofstream out(dir / "zeros.csv");
        out << "n,k,zero,scaled_zero\n";
        for (const auto& z : result.zeros)
            out << z.n << "," << z.k << "," << format_number(z.zero) << "," << format_number(z.scaled_zero) << "\n";
    }
}

}  // namespace cdlab::experiments
