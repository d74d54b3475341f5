#include <cdlab/quadrature.hpp>
#include <cdlab/common.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

namespace cdlab::quad {

const Rule& gauss_legendre(int n) {
    static std::mutex mtx;
    static std::map<int, Rule> cache;
    if (n < 1) throw DomainError("gauss_legendre: need at least one node");
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    Rule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    // Newton on P_n from the Chebyshev-like initial guess
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0, p1 = x;
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) r.nodes[n / 2] = 0.0;
    return cache.emplace(n, std::move(r)).first->second;
}

void jacobi_recurrence(int n, double right, double left, std::vector<double>& diag, std::vector<double>& offsq) {
    const double a = right, b = left;
    if (!(a > -1.0) || !(b > -1.0)) throw DomainError("jacobi_recurrence: exponents must exceed -1");
    diag.assign(n, 0.0);
    offsq.assign(n, 0.0);
    const double ab = a + b;
    offsq[0] = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) + std::lgamma(b + 1.0) - std::lgamma(ab + 2.0));
    if (n == 0) return;
    diag[0] = (b - a) / (ab + 2.0);
    if (n > 1) offsq[1] = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    for (int k = 1; k < n; ++k) {
        const double s = 2.0 * k + ab;
        diag[k] = (b * b - a * a) / (s * (s + 2.0));
        if (k >= 2) offsq[k] = 4.0 * k * (k + a) * (k + b) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
    }
}

void tridiagonal_first_components(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z) {
    // Implicit QL with Wilkinson shifts; e[i] couples i and i+1. Only the first row
    // of the eigenvector matrix is carried along.
    const int n = static_cast<int>(d.size());
    e.resize(n, 0.0);
    e[n - 1] = 0.0;
    z.assign(n, 0.0);
    z[0] = 1.0;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= 1e-16 * dd) break;
            }
            if (m != l) {
                if (++iter > 60) throw NumericalError("tridiagonal eigen solver: no convergence");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    f = z[i + 1];
                    z[i + 1] = s * z[i] + c * f;
                    z[i] = c * z[i] - s * f;
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int x, int y) { return d[x] < d[y]; });
    std::vector<double> ds(n), zs(n);
    for (int i = 0; i < n; ++i) {
        ds[i] = d[order[i]];
        zs[i] = z[order[i]] * z[order[i]];
    }
    d = std::move(ds);
    z = std::move(zs);
}

Rule gauss_jacobi(int n, double right, double left) {
    if (n < 1) throw DomainError("gauss_jacobi: need at least one node");
    std::vector<double> diag, offsq;
    jacobi_recurrence(n, right, left, diag, offsq);
    const double mass = offsq[0];
    std::vector<double> off(n, 0.0);
    for (int k = 1; k < n; ++k) off[k - 1] = std::sqrt(offsq[k]);
    std::vector<double> first;
    tridiagonal_first_components(diag, off, first);
    Rule r;
    r.nodes = std::move(diag);
    r.weights.resize(n);
    for (int i = 0; i < n; ++i) r.weights[i] = mass * first[i];
    return r;
}

}  // namespace cdlab::quad
