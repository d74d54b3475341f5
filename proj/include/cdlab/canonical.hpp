#pragma once

// Canonical systems d/dt W(t,z) J = z W(t,z) H(t), W(0,z) = I, J = [[0,-1],[1,0]],
// for piecewise-constant Hamiltonians. Each constant piece contributes the exact
// factor exp(-l z H0 J).

#include <cdlab/common.hpp>
#include <cdlab/measures.hpp>
#include <cdlab/opuc.hpp>
#include <cdlab/oprl.hpp>

#include <array>
#include <functional>
#include <optional>
#include <vector>

namespace cdlab::canonical {

/// Real symmetric 2x2 matrix [[h1, h3], [h3, h2]].
struct Sym2 {
    double h1 = 0.0;
    double h2 = 0.0;
    double h3 = 0.0;
    double det() const { return h1 * h2 - h3 * h3; }
    double trace() const { return h1 + h2; }
};

struct Piece {
    double length;
    Sym2 h;
};

class Hamiltonian {
public:
    Hamiltonian() = default;
    /// tail, when given, repeats after the listed pieces forever.
    explicit Hamiltonian(std::vector<Piece> pieces, std::optional<std::vector<Piece>> tail = std::nullopt);

    const std::vector<Piece>& pieces() const noexcept { return pieces_; }
    const std::optional<std::vector<Piece>>& tail() const noexcept { return tail_; }
    /// +inf with a tail rule.
    double length() const noexcept;
    /// Pieces covering [0, t] (tail expanded as needed); the last one is cut at t.
    std::vector<Piece> pieces_until(double t) const;

private:
    std::vector<Piece> pieces_;
    std::optional<std::vector<Piece>> tail_;
    double finite_length_ = 0.0;
};

struct Mat2 {
    cplx m11 = 1.0, m12 = 0.0, m21 = 0.0, m22 = 1.0;
    cplx det() const { return m11 * m22 - m12 * m21; }
};

Mat2 operator*(const Mat2& a, const Mat2& b);
Mat2 operator+(const Mat2& a, const Mat2& b);

struct TransferMatrix {
    double t = 0.0;
    cplx z;
    Mat2 w;
};

/// Exact factor exp(-l z H0 J) of one constant piece; optionally its z-derivative.
Mat2 piece_factor(const Piece& p, cplx z, Mat2* dz = nullptr);

TransferMatrix transfer_matrix(const Hamiltonian& H, double t, cplx z);

/// W and dW/dz at (t, z).
std::pair<Mat2, Mat2> transfer_matrix_dz(const Hamiltonian& H, double t, cplx z);

/// (w22(z) conj(w21(w)) - w21(z) conj(w22(w))) / (z - conj w), derivative form near the diagonal.
cplx kernel_kh(const Hamiltonian& H, double t, cplx z, cplx w);

/// M * tau = (m11 tau + m12) / (m21 tau + m22).
cplx mobius(const Mat2& m, cplx tau);

struct WeylValue {
    cplx z;
    cplx q;
    double disk_radius = 0.0;
    bool converged = false;
};

/// W(t_max, z) * i with the Weyl-disk radius 1/(2 Im z K(t_max, z, z)).
WeylValue weyl(const Hamiltonian& H, cplx z, double t_max, double tol);

/// Weighted rescaling: lengths / r, h1 * g(r)/r, h2 * r/g(r), h3 unchanged.
Hamiltonian rescale_h(const Hamiltonian& H, const ScaleFn& g, double r);

/// Unit pieces [[q_n(0)^2, -p_n(0) q_n(0)], [-p_n(0) q_n(0), p_n(0)^2]] on [n, n+1).
Hamiltonian jacobi_hamiltonian(const oprl::RecurrenceCoeffs& rec, int n_max);

/// Unit pieces (1/2) [[|psi_n(1)|^2, Im(psi_n(1) conj(phi_n(1)))], [., |phi_n(1)|^2]] on [n, n+1),
/// the normalization under which kernel_kh reproduces opuc_canonical_kernel.
Hamiltonian opuc_hamiltonian(const opuc::VerblunskyCoeffs& v, int n_max);

/// K_H(t, xi + z/s, xi + w/s) / K_H(t, xi, xi) with s = h(K_H(t, xi, xi)).
std::vector<KernelSample> rescaled_kh(const Hamiltonian& H, double xi, const ScaleFn& h, double t,
                                      const PointPairs& grid);

struct SchrodingerOptions {
    double tol = 1e-10;
    int max_steps = 1 << 22;
};

struct SchrodingerKernel {
    cplx quadrature;
    cplx wronskian;
    int steps = 0;
    double error_estimate = 0.0;
};

/// -u'' + V u = z u on [0, x], u(0) = sin(beta), u'(0) = -cos(beta). Returns
/// int_0^x u(y,z) conj(u(y,w)) dy and the Wronskian form of the same kernel.
SchrodingerKernel schrodinger_kernel(const std::function<double(double)>& V, double beta_bc, double x, cplx z, cplx w,
                                     const SchrodingerOptions& options = {});

/// -sin(x sqrt z)/sqrt z by its even power series (entire in z).
cplx free_dirichlet_solution(double x, cplx z);

/// Closed form of int_0^x u(y,z) conj(u(y,w)) dy for V = 0, beta = 0.
cplx free_dirichlet_kernel(double x, cplx z, cplx w);

/// Switch from the mathematical-physics convention T(x,z) (solution matrix acting on
/// columns (u, u')) to the J-decreasing convention: W = T^{-1}.
Mat2 convention_switch(const Mat2& t);

}  // namespace cdlab::canonical
