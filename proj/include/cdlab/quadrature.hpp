#pragma once

// Gauss rules on [-1, 1]. Jacobi rules come from Golub-Welsch on the closed-form
// Jacobi matrix, keeping only the first eigenvector components.

#include <vector>

namespace cdlab::quad {

struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1] (cached).
const Rule& gauss_legendre(int n);

/// n-point Gauss-Jacobi rule for (1-x)^right (1+x)^left on [-1, 1]; exponents > -1.
Rule gauss_jacobi(int n, double right, double left);

/// Monic Jacobi recurrence for (1-x)^right (1+x)^left: diag[k] (k < n) and the
/// squared off-diagonals offsq[k] (1 <= k < n, offsq[0] = total mass).
void jacobi_recurrence(int n, double right, double left, std::vector<double>& diag, std::vector<double>& offsq);

/// Eigenvalues of the symmetric tridiagonal matrix and the squared first components
/// of its normalized eigenvectors, sorted by eigenvalue. Inputs are consumed.
void tridiagonal_first_components(std::vector<double>& diag, std::vector<double>& off, std::vector<double>& first_sq);

}  // namespace cdlab::quad
