#pragma once
// Reference computations for the tests. Nothing here calls into the library's
// numerical routines; only plain types are shared.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
constexpr double pi = 3.14159265358979323846;

// seeded generator streams for property tests
template <class F>
void for_seeds(int count, std::uint64_t base, F&& body) {
    for (int s = 0; s < count; ++s) {
        std::mt19937_64 rng(base * 1000003ULL + static_cast<std::uint64_t>(s));
        body(rng, s);
    }
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Vec gaussian_vector(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> nd;
    Vec v(n);
    for (int i = 0; i < n; ++i) v(i) = cplx(nd(rng), nd(rng));
    return v;
}

// f^{+-}(theta) = (1/2pi) int f(a) e^{+-i(p0 a0 - p1 a1)} d^2a for the standard
// bump exp(-1/(1-r^2)) on a disc. Plain trapezoid on a fine mesh of the disc's
// bounding box; the integrand is smooth and vanishes to all orders at the rim.
inline std::pair<cplx, cplx> bump_transform(double c0, double c1, double radius, double theta, double mass = 1.0,
                                            int mesh = 600) {
    const double p0 = mass * std::cosh(theta), p1 = mass * std::sinh(theta);
    const double h = 2.0 * radius / mesh;
    cplx sp = 0.0, sm = 0.0;
    for (int i = 0; i <= mesh; ++i) {
        const double x0 = -radius + i * h;
        for (int j = 0; j <= mesh; ++j) {
            const double x1 = -radius + j * h;
            const double r2 = (x0 * x0 + x1 * x1) / (radius * radius);
            if (r2 >= 1.0) continue;
            const double v = std::exp(-1.0 / (1.0 - r2));
            const double ph = p0 * (c0 + x0) - p1 * (c1 + x1);
            sp += v * std::polar(1.0, ph);
            sm += v * std::polar(1.0, -ph);
        }
    }
    return {sp * h * h / (2.0 * pi), sm * h * h / (2.0 * pi)};
}

// the quadrature of <J f^-, g^+> - <J g^-, f^+> on a uniform trapezoid grid
inline cplx free_contraction(const std::array<double, 3>& f, const std::array<double, 3>& g, double half_width,
                             int n_points, double mass = 1.0, int mesh = 600) {
    const double h = 2.0 * half_width / (n_points - 1);
    cplx c = 0.0;
    for (int i = 0; i < n_points; ++i) {
        const double th = -half_width + i * h;
        const double w = (i == 0 || i == n_points - 1) ? 0.5 * h : h;
        auto [fp, fm] = bump_transform(f[0], f[1], f[2], th, mass, mesh);
        auto [gp, gm] = bump_transform(g[0], g[1], g[2], th, mass, mesh);
        c += w * (fm * gp - gm * fp);
    }
    return c;
}

// prod_k (sinh t - i sin b_k) / (sinh t + i sin b_k), complex t
inline cplx s2_blaschke(cplx t, const std::vector<double>& b) {
    cplx out = 1.0;
    for (double bk : b) out *= (std::sinh(t) - cplx(0, std::sin(bk))) / (std::sinh(t) + cplx(0, std::sin(bk)));
    return out;
}

// prod_k (z - i a_k) / (z + i conj a_k)
inline cplx halfplane_blaschke(cplx z, const std::vector<cplx>& a) {
    cplx out = 1.0;
    for (cplx ak : a) out *= (z - cplx(0, 1) * ak) / (z + cplx(0, 1) * std::conj(ak));
    return out;
}

// The printed 16 x 16 matrix, row by row on the basis order
// 1+1+, 1+1-, 1+2+, 1+2-, 1-1+, ... ; "p" = e^{i2pi kappa}, "m" = e^{-i2pi kappa}.
inline Mat federbush_printed(double kappa) {
    static const std::array<std::pair<int, char>, 16> rows = {{{0, '1'},
                                                               {4, '1'},
                                                               {8, 'p'},
                                                               {12, 'm'},
                                                               {1, '1'},
                                                               {5, '1'},
                                                               {9, 'm'},
                                                               {13, 'p'},
                                                               {2, 'm'},
                                                               {6, 'p'},
                                                               {10, '1'},
                                                               {14, '1'},
                                                               {3, 'p'},
                                                               {7, 'm'},
                                                               {11, '1'},
                                                               {15, '1'}}};
    Mat M = Mat::Zero(16, 16);
    const cplx p = std::polar(1.0, 2.0 * pi * kappa), m = std::conj(p);
    for (int r = 0; r < 16; ++r) M(r, rows[r].first) = rows[r].second == '1' ? cplx(1.0) : rows[r].second == 'p' ? p : m;
    return M;
}

// printed 4 x 4 matrix on e1e1, e1e2, e2e1, e2e2
inline Mat longo_witten_printed(const std::function<cplx(cplx)>& phi, double theta) {
    Mat M = Mat::Zero(4, 4);
    M(0, 0) = 1.0;
    M(1, 2) = phi(cplx(std::exp(theta), 0.0));
    M(2, 1) = phi(cplx(-std::exp(-theta), 0.0));
    M(3, 3) = 1.0;
    return M;
}

// M = M_n (x) 1 on C^n (x) C^n with Omega = sum sqrt(l_i) e_i (x) e_i:
// Delta e_i(x)e_j = (l_i / l_j) e_i(x)e_j and J z = F conj(z), F the flip.
inline Mat matrix_modular_delta(const std::vector<double>& lambda) {
    const int n = static_cast<int>(lambda.size());
    double s = 0.0;
    for (double l : lambda) s += l;
    Mat D = Mat::Zero(n * n, n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) D(i * n + j, i * n + j) = (lambda[i] / s) / (lambda[j] / s);
    return D;
}

inline Mat flip(int n) {
    Mat F = Mat::Zero(n * n, n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) F(j * n + i, i * n + j) = 1.0;
    return F;
}

// number of multisets of size n from d labels
inline long multichoose(int d, int n) {
    long r = 1;
    for (int k = 1; k <= n; ++k) r = r * (d + k - 1) / k;
    return r;
}

}  // namespace oracle
