#pragma once

#include "wedgelab/core.hpp"

#include <functional>
#include <random>

namespace wedgelab {

// S2(theta) lives on the strip 0 <= Im theta <= pi; an inner function phi(z)
// lives on the upper half plane (its rapidity form is phi(e^theta)).
enum class Domain { Strip, HalfPlane };

struct ScatteringFunction {
    std::string family;
    std::vector<double> params;
    Domain domain = Domain::Strip;
    double bound = 1.0;
    std::function<cplx(cplx)> eval;

    cplx operator()(cplx z) const { return eval(z); }
    cplx operator()(double x) const { return eval(cplx(x, 0.0)); }
};

inline ScatteringFunction constant_function(cplx c, Domain dom = Domain::Strip) {
    ScatteringFunction s;
    s.family = "constant";
    s.params = {c.real(), c.imag()};
    s.domain = dom;
    s.bound = std::abs(c);
    s.eval = [c](cplx) { return c; };
    return s;
}

// prod_k (sinh theta - i sin b_k) / (sinh theta + i sin b_k), 0 < b_k < pi
inline ScatteringFunction s2_blaschke(std::vector<double> b) {
    for (double bk : b)
        if (!(bk > 0.0 && bk < pi)) throw std::invalid_argument("s2_blaschke: parameters must lie in (0, pi)");
    ScatteringFunction s;
    s.family = "s2-blaschke";
    s.params = b;
    s.domain = Domain::Strip;
    s.bound = 1.0;
    s.eval = [b](cplx th) {
        cplx v = 1.0, sh = std::sinh(th);
        for (double bk : b) {
            cplx isb = I * std::sin(bk);
            v *= (sh - isb) / (sh + isb);
        }
        return v;
    };
    return s;
}

// prod_k (z - i a_k) / (z + i a_k) with a_k > 0; real a_k make phi symmetric,
// phi(-x) = conj phi(x) on the real line
inline ScatteringFunction halfplane_blaschke(std::vector<double> a) {
    for (double ak : a)
        if (!(ak > 0.0)) throw std::invalid_argument("halfplane_blaschke: parameters must be positive");
    ScatteringFunction s;
    s.family = "halfplane-blaschke";
    s.params = a;
    s.domain = Domain::HalfPlane;
    s.bound = 1.0;
    s.eval = [a](cplx z) {
        cplx v = 1.0;
        for (double ak : a) v *= (z - I * ak) / (z + I * ak);
        return v;
    };
    return s;
}

inline ScatteringFunction make_scattering_function(const std::string& family, const std::vector<double>& params) {
    if (family == "constant") {
        if (params.empty()) throw std::invalid_argument("constant needs a value");
        return constant_function(cplx(params[0], params.size() > 1 ? params[1] : 0.0));
    }
    if (family == "s2-blaschke") return s2_blaschke(params);
    if (family == "halfplane-blaschke") return halfplane_blaschke(params);
    if (family == "halfplane-constant") {
        if (params.empty()) throw std::invalid_argument("halfplane-constant needs a value");
        return constant_function(cplx(params[0], params.size() > 1 ? params[1] : 0.0), Domain::HalfPlane);
    }
    throw std::invalid_argument("unknown scattering function family '" + family + "'");
}

struct S2Report {
    double inverse_vs_conjugate = 0.0;   // S^-1 vs conj S
    double conjugate_vs_reflection = 0.0;  // conj S(t) vs S(-t)
    double reflection_vs_crossing = 0.0;   // S(-t) vs S(t + i pi)
    double inverse_vs_crossing = 0.0;
    double tol = 0.0;
    bool pass = false;
    double max_deviation() const {
        return std::max({inverse_vs_conjugate, conjugate_vs_reflection, reflection_vs_crossing, inverse_vs_crossing});
    }
};

inline S2Report validate_s2(const ScatteringFunction& S, const std::vector<double>& samples, double tol) {
    S2Report r;
    r.tol = tol;
    for (double t : samples) {
        cplx s = S(t), sm = S(-t);
        cplx sc = S(cplx(t, pi));
        if (!std::isfinite(sc.real()) || !std::isfinite(sc.imag()))
            throw std::runtime_error("validate_s2: evaluation failed at theta + i pi");
        cplx inv = 1.0 / s, cj = std::conj(s);
        r.inverse_vs_conjugate = std::max(r.inverse_vs_conjugate, std::abs(inv - cj));
        r.conjugate_vs_reflection = std::max(r.conjugate_vs_reflection, std::abs(cj - sm));
        r.reflection_vs_crossing = std::max(r.reflection_vs_crossing, std::abs(sm - sc));
        r.inverse_vs_crossing = std::max(r.inverse_vs_crossing, std::abs(inv - sc));
    }
    r.pass = r.max_deviation() <= tol;
    return r;
}

struct InnerReport {
    double modulus_excess = 0.0;       // max(|phi| - 1) on interior samples
    double boundary_deviation = 0.0;   // max ||phi| - 1| on the real line
    double symmetry_deviation = 0.0;   // max |phi(-x) - conj phi(x)|
    bool pass = false;
};

// interior samples z = e^{theta + i s}, 0 < s < pi (upper half plane)
inline InnerReport validate_inner(const ScatteringFunction& phi, std::mt19937_64& rng, int samples, double tol) {
    InnerReport r;
    std::uniform_real_distribution<double> th(-6.0, 6.0), ang(1e-6, pi - 1e-6);
    for (int k = 0; k < samples; ++k) {
        double t = th(rng);
        cplx z = std::exp(cplx(t, ang(rng)));
        r.modulus_excess = std::max(r.modulus_excess, std::abs(phi(z)) - 1.0);
        double x = std::exp(t);
        r.boundary_deviation = std::max({r.boundary_deviation, std::abs(std::abs(phi(x)) - 1.0),
                                         std::abs(std::abs(phi(-x)) - 1.0)});
        r.symmetry_deviation = std::max(r.symmetry_deviation, std::abs(phi(-x) - std::conj(phi(x))));
    }
    r.pass = r.modulus_excess <= tol && r.boundary_deviation <= tol;
    return r;
}

// z -> conj(phi(1 / conj z)); undefined at z = 0
inline ScatteringFunction conjugate_reciprocal(const ScatteringFunction& phi) {
    ScatteringFunction s = phi;
    s.family = "conjugate-reciprocal(" + phi.family + ")";
    auto f = phi.eval;
    s.eval = [f](cplx z) {
        if (z == cplx(0.0)) throw std::domain_error("conjugate_reciprocal: evaluation at z = 0");
        return std::conj(f(1.0 / std::conj(z)));
    };
    return s;
}

// z -> conj(phi(conj z)); the reflection of phi into the lower half plane
inline ScatteringFunction reflected(const ScatteringFunction& phi) {
    ScatteringFunction s = phi;
    s.family = "reflected(" + phi.family + ")";
    auto f = phi.eval;
    s.eval = [f](cplx z) { return std::conj(f(std::conj(z))); };
    return s;
}

struct RapidityForm {
    ScatteringFunction forward;   // theta -> phi(e^theta)
    ScatteringFunction crossing;  // theta -> phi(-e^{-theta}) = phi(e^{i pi - theta})
    double modulus_deviation = 0.0;
};

inline RapidityForm rapidity_form(const ScatteringFunction& phi, const std::vector<double>& samples, double tol) {
    RapidityForm r;
    auto f = phi.eval;
    r.forward = phi;
    r.forward.domain = Domain::Strip;
    r.forward.family = "rapidity(" + phi.family + ")";
    r.forward.eval = [f](cplx th) { return f(std::exp(th)); };
    r.crossing = r.forward;
    r.crossing.family = "crossing(" + phi.family + ")";
    r.crossing.eval = [f](cplx th) { return f(-std::exp(-th)); };
    for (double t : samples) {
        r.modulus_deviation = std::max({r.modulus_deviation, std::abs(std::abs(r.forward(t)) - 1.0),
                                        std::abs(std::abs(r.crossing(t)) - 1.0)});
    }
    if (r.modulus_deviation > tol)
        throw std::runtime_error("rapidity_form: boundary modulus deviates from 1 by " +
                                 std::to_string(r.modulus_deviation));
    return r;
}

}  // namespace wedgelab
