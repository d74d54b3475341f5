#pragma once

// Measures on the line (or on the circle, stored as angle measures on [-pi, pi)),
// local mass asymptotics, regularly varying scale functions and Cauchy transforms.

#include <cdlab/common.hpp>

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace cdlab::measures {

struct Atom {
    double position;
    double mass;
};

/// Absolutely continuous piece on [left, right]. The weight may behave like
/// (t-left)^left_exponent and (right-t)^right_exponent at the endpoints.
struct AcPiece {
    double left;
    double right;
    std::function<double(double)> weight;
    double left_exponent = 0.0;
    double right_exponent = 0.0;
    int quadrature_panels = 4;
    /// Optional: weight / ((t-left)^left_exponent (right-t)^right_exponent), used by
    /// discretize to avoid dividing out the endpoint factors numerically.
    std::function<double(double)> smooth;
};

class Measure {
public:
    Measure() = default;
    Measure(std::vector<Atom> atoms, std::vector<AcPiece> pieces, std::string name = "", bool even = false,
            bool on_circle = false);

    const std::vector<Atom>& atoms() const noexcept { return atoms_; }
    const std::vector<AcPiece>& pieces() const noexcept { return pieces_; }
    const std::string& name() const noexcept { return name_; }
    /// Symmetric under x -> -x (declared by the constructor, not detected).
    bool even() const noexcept { return even_; }
    bool on_circle() const noexcept { return on_circle_; }
    double total_mass() const noexcept { return total_mass_; }
    /// Number of support points after discretization is unbounded for ac parts.
    bool has_ac_part() const noexcept { return !pieces_.empty(); }

    /// Sum of atom masses with position in [a, b).
    double atom_mass(double a, double b) const;

private:
    std::vector<Atom> atoms_;
    std::vector<double> prefix_;  // prefix_[i] = sum of masses of atoms_[0..i)
    std::vector<AcPiece> pieces_;
    std::string name_;
    bool even_ = false;
    bool on_circle_ = false;
    double total_mass_ = 0.0;
};

/// mu([a, b)).
double mass(const Measure& mu, double a, double b);
/// mu((a, b)).
double mass_open(const Measure& mu, double a, double b);

/// Integral of weight(t) g(t) over [a, b] within one piece, with endpoint
/// substitution and panel doubling until two refinements agree to 1e-10.
cplx integrate_piece(const AcPiece& piece, double a, double b, const std::function<cplx(double)>& g);

struct Node {
    double x;
    double w;
};

/// Discrete approximation: atoms plus Gauss-Jacobi nodes per ac piece.
std::vector<Node> discretize(const Measure& mu, int nodes_per_piece);

/// scale * r^index * log(e + r)^log_exponent, or its asymptotic inverse when inverted.
struct RegVarFn {
    double scale = 1.0;
    double index = 1.0;
    double log_exponent = 0.0;
    bool inverted = false;

    double operator()(double r) const;
    /// Regular-variation index of the represented function.
    double effective_index() const { return inverted ? 1.0 / index : index; }
};

/// h with h(g(r))/r -> 1. Pure powers invert in closed form; the log family
/// is solved by fixed-point iteration to convergence at each evaluation.
RegVarFn asymptotic_inverse(const RegVarFn& g);

struct LocalScalingEstimate {
    double xi = 0.0;
    double beta_hat = 0.0;
    double sigma_minus_hat = 0.0;
    double sigma_plus_hat = 0.0;
    double fit_residual = 0.0;
};

LocalScalingEstimate local_scaling(const Measure& mu, double xi, const std::vector<double>& r_grid);

/// m(z) = int dmu(t) / (t - z).
cplx cauchy_transform(const Measure& mu, cplx z);

/// p(z) + (1+z^2)^{k+1} int (t-z)^{-1} (1+t^2)^{-(k+1)} dmu(t); p by ascending coefficients.
cplx regularized_cauchy(const Measure& mu, const std::vector<double>& p, int kappa, cplx z);

/// int (1+t^2)^{-(k+1)} dmu(t).
double poisson_norm(const Measure& mu, int kappa);

/// Builds a gallery measure; params are looked up by name with defaults.
Measure gallery(const std::string& name, const std::map<std::string, double>& params = {});

std::vector<std::string> gallery_names();

}  // namespace cdlab::measures
