#pragma once

#include "wedgelab/core.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <functional>
#include <map>
#include <optional>

namespace wedgelab {

// Uniform rapidity grid on [-Theta, Theta] with trapezoid weights.
// One-particle vectors are stored as samples psi(theta_i); the Fock layer works
// in coordinates sqrt(w_i) psi(theta_i), which makes the quadrature inner
// product the Euclidean one.
struct RapidityGrid {
    std::vector<double> theta;
    std::vector<double> weights;
    double mass = 1.0;

    int size() const { return static_cast<int>(theta.size()); }
    double spacing() const { return theta.size() > 1 ? theta[1] - theta[0] : 0.0; }
    double p0(int i) const { return mass * std::cosh(theta[i]); }
    double p1(int i) const { return mass * std::sinh(theta[i]); }
    double p_plus(int i) const { return mass * std::exp(theta[i]); }
    double p_minus(int i) const { return mass * std::exp(-theta[i]); }

    Vec to_coords(const Vec& samples) const {
        check_len(samples);
        Vec c(samples.size());
        for (int i = 0; i < size(); ++i) c(i) = std::sqrt(weights[i]) * samples(i);
        return c;
    }
    Vec from_coords(const Vec& coords) const {
        check_len(coords);
        Vec s(coords.size());
        for (int i = 0; i < size(); ++i) s(i) = coords(i) / std::sqrt(weights[i]);
        return s;
    }
    // <psi, chi> = sum_i w_i conj(psi_i) chi_i
    cplx inner(const Vec& psi, const Vec& chi) const {
        check_len(psi);
        check_len(chi);
        cplx s = 0.0;
        for (int i = 0; i < size(); ++i) s += weights[i] * std::conj(psi(i)) * chi(i);
        return s;
    }
    double norm(const Vec& psi) const { return std::sqrt(std::max(0.0, inner(psi, psi).real())); }

    void check_len(const Vec& v) const {
        if (v.size() != size()) throw std::invalid_argument("one-particle vector length differs from grid size");
    }
};

inline RapidityGrid make_grid(double theta_half_width, int n_points, double mass = 1.0) {
    if (!(theta_half_width > 0.0)) throw std::invalid_argument("make_grid: theta_half_width must be positive");
    if (n_points < 2) throw std::invalid_argument("make_grid: need at least two points");
    if (!(mass > 0.0)) throw std::invalid_argument("make_grid: mass must be positive");
    RapidityGrid g;
    g.mass = mass;
    const double h = 2.0 * theta_half_width / (n_points - 1);
    g.theta.resize(n_points);
    g.weights.assign(n_points, h);
    for (int i = 0; i < n_points; ++i) g.theta[i] = -theta_half_width + i * h;
    g.theta.back() = theta_half_width;
    g.weights.front() = g.weights.back() = 0.5 * h;
    return g;
}

struct SupportBox {
    double a0_min = 0, a0_max = 0, a1_min = 0, a1_max = 0;
    bool contains(double a0, double a1) const {
        return a0 >= a0_min && a0 <= a0_max && a1 >= a1_min && a1 <= a1_max;
    }
    // a1 > |a0| with the given margin on every corner
    bool in_right_wedge(double margin = 0.0) const {
        return a1_min - std::max(std::abs(a0_min), std::abs(a0_max)) > margin;
    }
    bool in_left_wedge(double margin = 0.0) const {
        return -a1_max - std::max(std::abs(a0_min), std::abs(a0_max)) > margin;
    }
};

struct TestFunction {
    std::string family;
    std::map<std::string, double> params;
    std::function<cplx(double, double)> eval;
    SupportBox support;
    bool real_valued = true;

    cplx operator()(double a0, double a1) const { return support.contains(a0, a1) ? eval(a0, a1) : cplx(0.0); }

    // sample the exterior of the box; returns the max modulus found there
    double exterior_leak(int samples_per_side = 16) const {
        double leak = 0.0;
        const double w0 = support.a0_max - support.a0_min, w1 = support.a1_max - support.a1_min;
        for (int i = 0; i <= samples_per_side; ++i) {
            for (int j = 0; j <= samples_per_side; ++j) {
                double a0 = support.a0_min - 0.5 * w0 + 2.0 * w0 * i / samples_per_side;
                double a1 = support.a1_min - 0.5 * w1 + 2.0 * w1 * j / samples_per_side;
                if (support.contains(a0, a1)) continue;
                leak = std::max(leak, std::abs(eval(a0, a1)));
            }
        }
        return leak;
    }
};

inline TestFunction zero_function() {
    TestFunction f;
    f.family = "zero";
    f.eval = [](double, double) { return cplx(0.0); };
    f.support = {-1, 1, -1, 1};
    return f;
}

// exp(-1/(1-r^2)) on the disc of radius R around (c0, c1)
inline TestFunction bump(double c0, double c1, double radius, double amplitude = 1.0) {
    if (!(radius > 0.0)) throw std::invalid_argument("bump: radius must be positive");
    TestFunction f;
    f.family = "bump";
    f.params = {{"c0", c0}, {"c1", c1}, {"radius", radius}, {"amplitude", amplitude}};
    f.eval = [=](double a0, double a1) -> cplx {
        double r2 = ((a0 - c0) * (a0 - c0) + (a1 - c1) * (a1 - c1)) / (radius * radius);
        if (r2 >= 1.0) return 0.0;
        return amplitude * std::exp(-1.0 / (1.0 - r2));
    };
    f.support = {c0 - radius, c0 + radius, c1 - radius, c1 + radius};
    return f;
}

// Gaussian cut off at `cut` standard deviations (box support)
inline TestFunction gaussian(double c0, double c1, double sigma, double cut = 8.0, double amplitude = 1.0) {
    if (!(sigma > 0.0)) throw std::invalid_argument("gaussian: sigma must be positive");
    TestFunction f;
    f.family = "gaussian";
    f.params = {{"c0", c0}, {"c1", c1}, {"sigma", sigma}, {"cut", cut}, {"amplitude", amplitude}};
    const SupportBox box{c0 - cut * sigma, c0 + cut * sigma, c1 - cut * sigma, c1 + cut * sigma};
    f.eval = [=](double a0, double a1) -> cplx {
        if (!box.contains(a0, a1)) return 0.0;
        double r2 = ((a0 - c0) * (a0 - c0) + (a1 - c1) * (a1 - c1)) / (sigma * sigma);
        return amplitude * std::exp(-0.5 * r2);
    };
    f.support = box;
    return f;
}

inline TestFunction make_test_function(const std::string& family, const std::map<std::string, double>& p) {
    auto get = [&](const char* k, std::optional<double> def = {}) {
        auto it = p.find(k);
        if (it != p.end()) return it->second;
        if (def) return *def;
        throw std::invalid_argument("test function '" + family + "' needs parameter '" + k + "'");
    };
    if (family == "bump") return bump(get("c0"), get("c1"), get("radius", 1.0), get("amplitude", 1.0));
    if (family == "gaussian") return gaussian(get("c0"), get("c1"), get("sigma", 1.0), get("cut", 8.0), get("amplitude", 1.0));
    if (family == "zero") return zero_function();
    throw std::invalid_argument("unknown test function family '" + family + "'");
}

struct PmTransform {
    Vec plus;   // f^+(theta_i)
    Vec minus;  // f^-(theta_i)
    double error_estimate = 0.0;
    int panels0 = 0, panels1 = 0;
};

namespace detail {

struct NodeSet {
    std::vector<double> x, w;
};

inline NodeSet composite_gauss(double lo, double hi, int panels) {
    constexpr int order = 16;
    NodeSet ns;
    const auto& absc = boost::math::quadrature::gauss<double, order>::abscissa();
    const auto& wts = boost::math::quadrature::gauss<double, order>::weights();
    const double len = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = lo + (p + 0.5) * len, half = 0.5 * len;
        // boost stores the non-negative half of the symmetric rule
        for (std::size_t k = 0; k < absc.size(); ++k) {
            if (absc[k] == 0.0) {
                ns.x.push_back(mid);
                ns.w.push_back(half * wts[k]);
                continue;
            }
            ns.x.push_back(mid - half * absc[k]);
            ns.w.push_back(half * wts[k]);
            ns.x.push_back(mid + half * absc[k]);
            ns.w.push_back(half * wts[k]);
        }
    }
    return ns;
}

// (1/2pi) sum f(a) e^{+-i p.a} over a tensor node set, for every grid point
inline void tensor_transform(const TestFunction& f, const RapidityGrid& grid, int P0, int P1, Vec& plus, Vec& minus,
                             double& l1) {
    const auto& b = f.support;
    NodeSet n0 = composite_gauss(b.a0_min, b.a0_max, P0);
    NodeSet n1 = composite_gauss(b.a1_min, b.a1_max, P1);
    const int N0 = static_cast<int>(n0.x.size()), N1 = static_cast<int>(n1.x.size());
    Mat F(N0, N1);
    l1 = 0.0;
    for (int i = 0; i < N0; ++i)
        for (int j = 0; j < N1; ++j) {
            cplx v = f(n0.x[i], n1.x[j]) * n0.w[i] * n1.w[j];
            F(i, j) = v;
            l1 += std::abs(v);
        }
    l1 /= 2.0 * pi;
    const int d = grid.size();
    plus.resize(d);
    minus.resize(d);
    Vec e1p(N1), e1m(N1);
    for (int t = 0; t < d; ++t) {
        const double p0 = grid.p0(t), p1 = grid.p1(t);
        for (int j = 0; j < N1; ++j) {
            e1p(j) = expi(-p1 * n1.x[j]);
            e1m(j) = std::conj(e1p(j));
        }
        Vec rp = F * e1p, rm = F * e1m;
        cplx sp = 0.0, sm = 0.0;
        for (int i = 0; i < N0; ++i) {
            cplx e0 = expi(p0 * n0.x[i]);
            sp += e0 * rp(i);
            sm += std::conj(e0) * rm(i);
        }
        plus(t) = sp / (2.0 * pi);
        minus(t) = sm / (2.0 * pi);
    }
}

}  // namespace detail

// f^{+-}(theta) = (1/2pi) int d^2a f(a) e^{+-i p(theta).a}, p.a = p0 a0 - p1 a1.
// Composite Gauss-Legendre on the support box, panel count tied to the largest
// wavenumber on the grid; the error estimate compares against doubled panels.
inline PmTransform pm_transform(const TestFunction& f, const RapidityGrid& grid, double tol = 1e-10,
                                int min_panels = 8) {
    const auto& b = f.support;
    double k0 = 0.0, k1 = 0.0;
    for (int i = 0; i < grid.size(); ++i) {
        k0 = std::max(k0, std::abs(grid.p0(i)));
        k1 = std::max(k1, std::abs(grid.p1(i)));
    }
    auto panels = [&](double k, double len) {
        return std::max(min_panels, static_cast<int>(std::ceil(k * len / 6.0)));
    };
    const int P0 = panels(k0, b.a0_max - b.a0_min), P1 = panels(k1, b.a1_max - b.a1_min);
    PmTransform coarse, fine;
    double l1c = 0.0, l1f = 0.0;
    detail::tensor_transform(f, grid, P0, P1, coarse.plus, coarse.minus, l1c);
    detail::tensor_transform(f, grid, 2 * P0, 2 * P1, fine.plus, fine.minus, l1f);
    double err = std::max((fine.plus - coarse.plus).cwiseAbs().maxCoeff(),
                          (fine.minus - coarse.minus).cwiseAbs().maxCoeff());
    fine.error_estimate = err;
    fine.panels0 = 2 * P0;
    fine.panels1 = 2 * P1;
    if (err > tol * std::max(l1f, 1e-300) && l1f > 0.0)
        throw std::runtime_error("pm_transform: oscillation not resolved (estimate " + std::to_string(err) +
                                 " relative to scale " + std::to_string(l1f) + ")");
    return fine;
}

// One-particle Poincare action on coordinates: phase e^{i p(theta).a} and a
// boost by lambda = s*h realised as an index shift by s.
struct OneParticleOperator {
    SpMat op;                  // acts on coordinates
    std::vector<int> dropped;  // source indices pushed off the grid
};

inline OneParticleOperator poincare_u1(double a0, double a1, double lambda, const RapidityGrid& grid) {
    const double h = grid.spacing();
    const double s_real = lambda / h;
    const long s = std::lround(s_real);
    if (std::abs(s_real - static_cast<double>(s)) > 1e-9 * std::max(1.0, std::abs(s_real)))
        throw std::invalid_argument("poincare_u1: boost parameter is not a multiple of the grid spacing");
    const int d = grid.size();
    OneParticleOperator out;
    std::vector<Triplet> t;
    for (int j = 0; j < d; ++j) {
        const long i = j + s;  // (U psi)(theta_i) = phase * psi(theta_i - lambda) = psi_{i-s}
        if (i < 0 || i >= d) {
            out.dropped.push_back(j);
            continue;
        }
        const double phase = grid.p0(static_cast<int>(i)) * a0 - grid.p1(static_cast<int>(i)) * a1;
        const double wr = std::sqrt(grid.weights[i] / grid.weights[j]);
        t.emplace_back(static_cast<int>(i), j, expi(phase) * wr);
    }
    out.op.resize(d, d);
    out.op.setFromTriplets(t.begin(), t.end());
    return out;
}

// diagonal of P_+ (sign > 0, entries m e^theta) or P_- (m e^-theta)
inline RVec lightray_generator(const RapidityGrid& grid, int sign) {
    RVec v(grid.size());
    for (int i = 0; i < grid.size(); ++i) v(i) = sign > 0 ? grid.p_plus(i) : grid.p_minus(i);
    return v;
}

inline Vec functional_calculus(const RVec& diag, const std::function<cplx(cplx)>& fn) {
    Vec v(diag.size());
    for (Eigen::Index i = 0; i < diag.size(); ++i) v(i) = fn(cplx(diag(i), 0.0));
    return v;
}

}  // namespace wedgelab
