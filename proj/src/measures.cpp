#include <cdlab/measures.hpp>
#include <cdlab/quadrature.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace cdlab::measures {

namespace {

constexpr int gl_points = 20;
constexpr int max_panels = 1 << 16;
constexpr double agree_tol = 1e-10;

bool is_integer(double e) { return std::floor(e) == e; }

cplx composite_gl(const std::function<cplx(double)>& f, double lo, double hi, int panels) {
    const auto& rule = quad::gauss_legendre(gl_points);
    const double h = (hi - lo) / panels;
    cplx sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double c = lo + (p + 0.5) * h;
        for (int i = 0; i < gl_points; ++i) sum += rule.weights[i] * f(c + 0.5 * h * rule.nodes[i]);
    }
    return sum * (0.5 * h);
}

cplx doubling(const std::function<cplx(double)>& f, double lo, double hi, int panels) {
    panels = std::max(1, panels);
    cplx prev = composite_gl(f, lo, hi, panels);
    while (panels < max_panels) {
        panels *= 2;
        const cplx next = composite_gl(f, lo, hi, panels);
        if (std::abs(next - prev) <= agree_tol * std::max(1e-300, std::abs(next)) || std::abs(next - prev) < 1e-300)
            return next;
        prev = next;
    }
    throw NumericalError("quadrature: panel doubling did not settle (non-integrable weight or near-singular integrand)");
}

// One-sided singular substitution t = a + L s^p (or t = b - L s^p), p = 1/(1+e).
cplx singular_side(const std::function<cplx(double)>& F, double a, double b, double e, bool at_left, int panels) {
    const double L = b - a;
    const double p = 1.0 / (1.0 + e);
    auto G = [&](double s) -> cplx {
        if (s <= 0.0) return 0.0;
        const double u = L * std::pow(s, p);
        const double t = at_left ? a + u : b - u;
        return F(t) * (L * p * std::pow(s, p - 1.0));
    };
    return doubling(G, 0.0, 1.0, panels);
}

}  // namespace

Measure::Measure(std::vector<Atom> atoms, std::vector<AcPiece> pieces, std::string name, bool even, bool on_circle)
    : atoms_(std::move(atoms)), pieces_(std::move(pieces)), name_(std::move(name)), even_(even), on_circle_(on_circle) {
    std::sort(atoms_.begin(), atoms_.end(), [](const Atom& x, const Atom& y) { return x.position < y.position; });
    prefix_.assign(atoms_.size() + 1, 0.0);
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        if (!(atoms_[i].mass > 0.0) || !std::isfinite(atoms_[i].position))
            throw DomainError("Measure: atoms need finite position and positive mass");
        if (i > 0 && !(atoms_[i].position > atoms_[i - 1].position))
            throw DomainError("Measure: atom positions must be distinct");
        prefix_[i + 1] = prefix_[i] + atoms_[i].mass;
    }
    for (auto& pc : pieces_) {
        if (!std::isfinite(pc.left) || !std::isfinite(pc.right) || !(pc.left < pc.right))
            throw DomainError("Measure: ac piece needs a bounded interval with left < right");
        if (!(pc.left_exponent > -1.0) || !(pc.right_exponent > -1.0))
            throw DomainError("Measure: endpoint exponents must exceed -1");
        if (!pc.weight && !pc.smooth) throw DomainError("Measure: ac piece without weight");
        if (!pc.weight) {
            const double A = pc.left, B = pc.right, el = pc.left_exponent, er = pc.right_exponent;
            auto sm = pc.smooth;
            pc.weight = [=](double t) { return sm(t) * std::pow(t - A, el) * std::pow(B - t, er); };
        }
    }
    total_mass_ = prefix_.back();
    for (const auto& pc : pieces_) total_mass_ += integrate_piece(pc, pc.left, pc.right, [](double) { return cplx(1.0); }).real();
}

double Measure::atom_mass(double a, double b) const {
    if (!(a < b)) return 0.0;
    auto lo = std::lower_bound(atoms_.begin(), atoms_.end(), a, [](const Atom& x, double v) { return x.position < v; });
    auto hi = std::lower_bound(atoms_.begin(), atoms_.end(), b, [](const Atom& x, double v) { return x.position < v; });
    return prefix_[hi - atoms_.begin()] - prefix_[lo - atoms_.begin()];
}

cplx integrate_piece(const AcPiece& pc, double a, double b, const std::function<cplx(double)>& g) {
    a = std::max(a, pc.left);
    b = std::min(b, pc.right);
    if (!(a < b)) return 0.0;
    const auto F = [&](double t) { return pc.weight(t) * g(t); };
    const bool sl = a == pc.left && !is_integer(pc.left_exponent);
    const bool sr = b == pc.right && !is_integer(pc.right_exponent);
    const int panels = pc.quadrature_panels;
    if (sl && sr) {
        const double m = 0.5 * (a + b);
        return singular_side(F, a, m, pc.left_exponent, true, panels) +
               singular_side(F, m, b, pc.right_exponent, false, panels);
    }
    if (sl) return singular_side(F, a, b, pc.left_exponent, true, panels);
    if (sr) return singular_side(F, a, b, pc.right_exponent, false, panels);
    return doubling(F, a, b, panels);
}

double mass(const Measure& mu, double a, double b) {
    if (!(a < b)) throw DomainError("mass: need a < b");
    double m = mu.atom_mass(a, b);
    for (const auto& pc : mu.pieces()) m += integrate_piece(pc, a, b, [](double) { return cplx(1.0); }).real();
    return m;
}

double mass_open(const Measure& mu, double a, double b) {
    const double m = mass(mu, a, b);
    return m - mu.atom_mass(a, std::nextafter(a, std::numeric_limits<double>::infinity()));
}

std::vector<Node> discretize(const Measure& mu, int nodes_per_piece) {
    if (nodes_per_piece < 1) throw DomainError("discretize: need at least one node per piece");
    std::vector<Node> out;
    out.reserve(mu.atoms().size() + mu.pieces().size() * nodes_per_piece);
    for (const auto& a : mu.atoms()) out.push_back({a.position, a.mass});
    for (const auto& pc : mu.pieces()) {
        const double L = pc.right - pc.left;
        const double el = pc.left_exponent, er = pc.right_exponent;
        const auto rule = quad::gauss_jacobi(nodes_per_piece, er, el);
        const double jac = std::pow(L / 2.0, 1.0 + el + er);
        for (int i = 0; i < nodes_per_piece; ++i) {
            const double x = rule.nodes[i];
            const double dl = L * (1.0 + x) / 2.0;
            const double dr = L * (1.0 - x) / 2.0;
            const double t = x < 0.0 ? pc.left + dl : pc.right - dr;
            double rem;
            if (pc.smooth)
                rem = pc.smooth(t);
            else
                rem = pc.weight(t) / (std::pow(dl, el) * std::pow(dr, er));
            const double w = rule.weights[i] * jac * rem;
            if (w > 0.0) out.push_back({t, w});
        }
    }
    std::sort(out.begin(), out.end(), [](const Node& x, const Node& y) { return x.x < y.x; });
    return out;
}

double RegVarFn::operator()(double r) const {
    if (!inverted) return scale * std::pow(r, index) * (log_exponent == 0.0 ? 1.0 : std::pow(std::log(std::numbers::e + r), log_exponent));
    // solve scale * x^index * log(e+x)^log_exponent = r for x
    double x = std::pow(r / scale, 1.0 / index);
    if (log_exponent == 0.0) return x;
    for (int it = 0; it < 500; ++it) {
        const double next = std::pow(r / (scale * std::pow(std::log(std::numbers::e + x), log_exponent)), 1.0 / index);
        if (std::abs(next - x) <= 1e-15 * std::abs(next)) return next;
        x = next;
    }
    throw ConvergenceError("RegVarFn: inverse iteration did not converge", x);
}

RegVarFn asymptotic_inverse(const RegVarFn& g) {
    if (!(g.index > 0.0)) throw DomainError("asymptotic_inverse: index must be positive");
    if (!(g.scale > 0.0)) throw DomainError("asymptotic_inverse: scale must be positive");
    if (g.inverted) {
        RegVarFn h = g;
        h.inverted = false;
        return h;
    }
    if (g.log_exponent == 0.0) return RegVarFn{std::pow(g.scale, -1.0 / g.index), 1.0 / g.index, 0.0, false};
    RegVarFn h = g;
    h.inverted = true;
    return h;
}

LocalScalingEstimate local_scaling(const Measure& mu, double xi, const std::vector<double>& r_grid) {
    if (r_grid.size() < 2) throw DomainError("local_scaling: r_grid needs at least two points");
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
        if (!(r_grid[i] > 0.0) || (i > 0 && !(r_grid[i] > r_grid[i - 1])))
            throw DomainError("local_scaling: r_grid must be positive and increasing");
    }
    if (r_grid.back() / r_grid.front() < 1e3 * (1.0 - 1e-12))
        throw DomainError("local_scaling: r_grid must span at least three decades");
    if (mu.atom_mass(xi, std::nextafter(xi, std::numeric_limits<double>::infinity())) > 0.0)
        throw DomainError("local_scaling: atom at xi");

    std::vector<double> xs, ys, left, right, rs;
    for (double r : r_grid) {
        const double ml = mass_open(mu, xi - 1.0 / r, xi);
        const double mr = mass(mu, xi, xi + 1.0 / r);
        if (ml + mr <= 0.0) continue;
        xs.push_back(std::log(r));
        ys.push_back(-std::log(ml + mr));
        left.push_back(ml);
        right.push_back(mr);
        rs.push_back(r);
    }
    if (xs.size() < 2) throw ConvergenceError("local_scaling: no regularly varying fit found (zero mass on all scales)");
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double icpt = (sy - slope * sx) / n;
    LocalScalingEstimate est;
    est.xi = xi;
    est.beta_hat = slope;
    for (std::size_t i = 0; i < xs.size(); ++i)
        est.fit_residual = std::max(est.fit_residual, std::abs(ys[i] - (icpt + slope * xs[i])));
    const double top = rs.back() / 10.0;
    int cnt = 0;
    for (std::size_t i = 0; i < rs.size(); ++i) {
        if (rs[i] < top * (1.0 - 1e-12)) continue;
        const double g = std::pow(rs[i], slope);
        est.sigma_minus_hat += g * left[i];
        est.sigma_plus_hat += g * right[i];
        ++cnt;
    }
    est.sigma_minus_hat /= cnt;
    est.sigma_plus_hat /= cnt;
    if (!(slope > 0.0)) throw ConvergenceError("local_scaling: no regularly varying fit found (nonpositive index)", slope);
    return est;
}

cplx cauchy_transform(const Measure& mu, cplx z) {
    if (z.imag() == 0.0) throw DomainError("cauchy_transform: Im z must be nonzero");
    cplx m = 0.0;
    for (const auto& a : mu.atoms()) m += a.mass / (a.position - z);
    for (const auto& pc : mu.pieces())
        m += integrate_piece(pc, pc.left, pc.right, [z](double t) { return 1.0 / (t - z); });
    return m;
}

double poisson_norm(const Measure& mu, int kappa) {
    if (kappa < 0) throw DomainError("poisson_norm: kappa must be nonnegative");
    const auto f = [kappa](double t) { return std::pow(1.0 + t * t, -(kappa + 1.0)); };
    double s = 0.0;
    for (const auto& a : mu.atoms()) s += a.mass * f(a.position);
    for (const auto& pc : mu.pieces()) s += integrate_piece(pc, pc.left, pc.right, [&](double t) { return cplx(f(t)); }).real();
    if (!std::isfinite(s)) throw DomainError("regularized_cauchy: norm of mu is not finite");
    return s;
}

cplx regularized_cauchy(const Measure& mu, const std::vector<double>& p, int kappa, cplx z) {
    if (kappa < 0) throw DomainError("regularized_cauchy: kappa must be nonnegative");
    std::size_t deg = p.size();
    while (deg > 0 && p[deg - 1] == 0.0) --deg;
    if (deg > static_cast<std::size_t>(2 * kappa + 2))
        throw DomainError("regularized_cauchy: degree of p exceeds 2 kappa + 1");
    const double norm = poisson_norm(mu, kappa);
    const double lead = p.size() > static_cast<std::size_t>(2 * kappa + 1) ? p[2 * kappa + 1] : 0.0;
    if (lead < norm * (1.0 - 1e-12))
        throw DomainError("regularized_cauchy: leading coefficient of p is below the norm of mu");
    if (z.imag() == 0.0) throw DomainError("regularized_cauchy: Im z must be nonzero");

    cplx pz = 0.0;
    for (std::size_t k = deg; k-- > 0;) pz = pz * z + p[k];
    const auto g = [kappa, z](double t) { return std::pow(1.0 + t * t, -(kappa + 1.0)) / (t - z); };
    cplx integral = 0.0;
    for (const auto& a : mu.atoms()) integral += a.mass * g(a.position);
    for (const auto& pc : mu.pieces()) integral += integrate_piece(pc, pc.left, pc.right, [&](double t) { return g(t); });
    return pz + std::pow(1.0 + z * z, kappa + 1) * integral;
}

namespace {

double param(const std::map<std::string, double>& params, const std::string& key, double def) {
    auto it = params.find(key);
    return it == params.end() ? def : it->second;
}

void check_keys(const std::string& name, const std::map<std::string, double>& params,
                std::initializer_list<const char*> allowed) {
    for (const auto& [k, v] : params) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || k == a;
        if (!ok) throw DomainError("gallery " + name + ": unknown parameter '" + k + "'");
        if (!std::isfinite(v)) throw DomainError("gallery " + name + ": parameter '" + k + "' is not finite");
    }
}

AcPiece constant_piece(double a, double b, double c) {
    AcPiece p{a, b, [c](double) { return c; }, 0.0, 0.0, 4, {}};
    p.smooth = [c](double) { return c; };
    return p;
}

}  // namespace

std::vector<std::string> gallery_names() {
    return {"pure_point_bulk", "power_hard_edge", "even_fh", "chebyshev", "legendre", "jump",
            "circle_lebesgue", "circle_power", "circle_jump"};
}

Measure gallery(const std::string& name, const std::map<std::string, double>& params) {
    if (name == "pure_point_bulk") {
        check_keys(name, params, {"cutoff"});
        const double c = param(params, "cutoff", 1e5);
        if (!(c >= 1.0) || c > 1e8) throw DomainError("gallery pure_point_bulk: cutoff must lie in [1, 1e8]");
        const auto cutoff = static_cast<long>(c);
        std::vector<Atom> atoms;
        atoms.reserve(2 * cutoff);
        for (long j = 1; j <= cutoff; ++j) {
            const double m = 1.0 / (static_cast<double>(j) * (j + 1.0));
            atoms.push_back({1.0 / j, m});
            atoms.push_back({-1.0 / j, m});
        }
        return Measure(std::move(atoms), {}, name, true);
    }
    if (name == "power_hard_edge") {
        check_keys(name, params, {"beta"});
        const double beta = param(params, "beta", 1.5);
        if (!(beta > 0.0)) throw DomainError("gallery power_hard_edge: beta must be positive");
        AcPiece p{0.0, 1.0, [beta](double x) { return beta * std::pow(x, beta - 1.0); }, beta - 1.0, 0.0, 4, {}};
        p.smooth = [beta](double) { return beta; };
        return Measure({}, {p}, name);
    }
    if (name == "even_fh") {
        check_keys(name, params, {"beta"});
        const double beta = param(params, "beta", 2.0);
        if (!(beta > 0.0)) throw DomainError("gallery even_fh: beta must be positive");
        const double c = beta / 2.0;
        AcPiece l{-1.0, 0.0, [=](double x) { return c * std::pow(-x, beta - 1.0); }, 0.0, beta - 1.0, 4, {}};
        AcPiece r{0.0, 1.0, [=](double x) { return c * std::pow(x, beta - 1.0); }, beta - 1.0, 0.0, 4, {}};
        l.smooth = r.smooth = [c](double) { return c; };
        return Measure({}, {l, r}, name, true);
    }
    if (name == "chebyshev") {
        check_keys(name, params, {});
        AcPiece p{-1.0, 1.0, [](double x) { return 1.0 / (pi * std::sqrt((1.0 - x) * (1.0 + x))); }, -0.5, -0.5, 4, {}};
        p.smooth = [](double) { return 1.0 / pi; };
        return Measure({}, {p}, name, true);
    }
    if (name == "legendre") {
        check_keys(name, params, {});
        return Measure({}, {constant_piece(-1.0, 1.0, 0.5)}, name, true);
    }
    if (name == "jump") {
        check_keys(name, params, {"sigma_minus", "sigma_plus"});
        const double sm = param(params, "sigma_minus", 1.0), sp = param(params, "sigma_plus", 1.0);
        if (!(sm > 0.0) || !(sp > 0.0)) throw DomainError("gallery jump: sigma_minus and sigma_plus must be positive");
        return Measure({}, {constant_piece(-1.0, 0.0, sm), constant_piece(0.0, 1.0, sp)}, name, sm == sp);
    }
    if (name == "circle_lebesgue") {
        check_keys(name, params, {});
        return Measure({}, {constant_piece(-pi, pi, 1.0 / (2.0 * pi))}, name, true, true);
    }
    if (name == "circle_power") {
        check_keys(name, params, {"beta"});
        const double beta = param(params, "beta", 2.0);
        if (!(beta > 0.0)) throw DomainError("gallery circle_power: beta must be positive");
        const double c = beta / (2.0 * std::pow(pi, beta));
        AcPiece l{-pi, 0.0, [=](double x) { return c * std::pow(-x, beta - 1.0); }, 0.0, beta - 1.0, 4, {}};
        AcPiece r{0.0, pi, [=](double x) { return c * std::pow(x, beta - 1.0); }, beta - 1.0, 0.0, 4, {}};
        l.smooth = r.smooth = [c](double) { return c; };
        return Measure({}, {l, r}, name, true, true);
    }
    if (name == "circle_jump") {
        check_keys(name, params, {"sigma_minus", "sigma_plus"});
        const double sm = param(params, "sigma_minus", 1.0), sp = param(params, "sigma_plus", 2.0);
        if (!(sm > 0.0) || !(sp > 0.0)) throw DomainError("gallery circle_jump: sigma_minus and sigma_plus must be positive");
        const double c = 1.0 / (pi * (sm + sp));
        return Measure({}, {constant_piece(-pi, 0.0, c * sm), constant_piece(0.0, pi, c * sp)}, name, sm == sp, true);
    }
    throw DomainError("gallery: unknown measure '" + name + "'");
}

}  // namespace cdlab::measures
