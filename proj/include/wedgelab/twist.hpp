#pragma once

#include "wedgelab/core.hpp"
#include "wedgelab/fock.hpp"
#include "wedgelab/scatfunc.hpp"

#include <map>
#include <optional>

namespace wedgelab {

enum class GroupKind { Circle, Cyclic };

// Integer charge labels on a basis. If `basis` is set its columns are the
// graded eigenvectors, otherwise the labels refer to the standard basis.
struct ChargeGrading {
    std::vector<int> labels;
    std::optional<Mat> basis;
    GroupKind group = GroupKind::Circle;
    int N = 0;
    double projector_deviation = 0.0;  // filled by grading_from_unitary

    int dim() const { return static_cast<int>(labels.size()); }
    int spread() const {
        if (labels.empty()) return 0;
        auto [lo, hi] = std::minmax_element(labels.begin(), labels.end());
        return *hi - *lo;
    }
    int max_abs_label() const {
        int m = 0;
        for (int l : labels) m = std::max(m, std::abs(l));
        return m;
    }
    // V(kappa) = exp(i 2 pi kappa Q)
    Mat unitary(double kappa) const {
        Vec ph(dim());
        for (int i = 0; i < dim(); ++i) ph(i) = expi(2.0 * pi * kappa * labels[i]);
        if (!basis) return ph.asDiagonal();
        return (*basis) * ph.asDiagonal() * basis->adjoint();
    }
    Mat charge() const {
        RVec q(dim());
        for (int i = 0; i < dim(); ++i) q(i) = labels[i];
        Mat Q = q.cast<cplx>().asDiagonal();
        if (!basis) return Q;
        return (*basis) * Q * basis->adjoint();
    }
};

inline ChargeGrading diagonal_grading(std::vector<int> labels, GroupKind g = GroupKind::Circle, int N = 0) {
    ChargeGrading c;
    c.labels = std::move(labels);
    c.group = g;
    c.N = N;
    return c;
}

// spectral projectors Vhat(j) = (1/N) sum_k e^{-i 2 pi j k / N} V^k, Q = sum_j j Vhat(j)
inline ChargeGrading grading_from_unitary(const Mat& V, const Vec& Omega, int N, double tol = 1e-10) {
    if (N < 1) throw std::invalid_argument("grading_from_unitary: N must be positive");
    const int n = static_cast<int>(V.rows());
    if (V.cols() != n || Omega.size() != n) throw std::invalid_argument("grading_from_unitary: dimension mismatch");
    std::vector<Mat> pw(N + 1);
    pw[0] = Mat::Identity(n, n);
    for (int k = 1; k <= N; ++k) pw[k] = V * pw[k - 1];
    if (max_abs(Mat(pw[N] - Mat::Identity(n, n))) > tol)
        throw std::invalid_argument("grading_from_unitary: V is not of order N");
    if ((V * Omega - Omega).norm() > tol * std::max(1.0, Omega.norm()))
        throw std::invalid_argument("grading_from_unitary: vacuum vector is not fixed");
    std::vector<Mat> P(N, Mat::Zero(n, n));
    for (int j = 0; j < N; ++j)
        for (int k = 0; k < N; ++k) P[j] += expi(-2.0 * pi * j * k / N) * pw[k] / static_cast<double>(N);
    double dev = 0.0;
    Mat sum = Mat::Zero(n, n);
    for (int j = 0; j < N; ++j) {
        dev = std::max(dev, max_abs(Mat(P[j] - P[j].adjoint())));
        dev = std::max(dev, max_abs(Mat(P[j] * P[j] - P[j])));
        for (int i = j + 1; i < N; ++i) dev = std::max(dev, max_abs(Mat(P[j] * P[i])));
        sum += P[j];
    }
    dev = std::max(dev, max_abs(Mat(sum - Mat::Identity(n, n))));
    if (dev > tol) throw std::runtime_error("grading_from_unitary: spectral projectors inconsistent");
    Mat Q = Mat::Zero(n, n);
    for (int j = 0; j < N; ++j) Q += static_cast<double>(j) * P[j];
    Eigen::SelfAdjointEigenSolver<Mat> es(Mat(0.5 * (Q + Q.adjoint())));
    ChargeGrading g;
    g.group = GroupKind::Cyclic;
    g.N = N;
    g.labels.resize(n);
    for (int i = 0; i < n; ++i) g.labels[i] = static_cast<int>(std::lround(es.eigenvalues()(i)));
    g.basis = es.eigenvectors();
    g.projector_deviation = dev;
    return g;
}

// exp(i 2 pi kappa Q (x) Q), diagonal on the graded product basis
struct TwistUnitary {
    ChargeGrading a, b;
    double kappa = 0.0;
    Vec phases;  // index la * dim_b + lb

    Mat dense() const {
        Mat D = phases.asDiagonal();
        if (!a.basis && !b.basis) return D;
        Mat Ua = a.basis ? *a.basis : Mat::Identity(a.dim(), a.dim());
        Mat Ub = b.basis ? *b.basis : Mat::Identity(b.dim(), b.dim());
        Mat U = Eigen::kroneckerProduct(Ua, Ub).eval();
        return U * D * U.adjoint();
    }
    Mat adjoint_action(const Mat& X) const {
        Mat T = dense();
        return T * X * T.adjoint();
    }
};

inline TwistUnitary twist_unitary(const ChargeGrading& ga, const ChargeGrading& gb, double kappa) {
    TwistUnitary t;
    t.a = ga;
    t.b = gb;
    t.kappa = kappa;
    t.phases.resize(ga.dim() * gb.dim());
    for (int i = 0; i < ga.dim(); ++i)
        for (int j = 0; j < gb.dim(); ++j)
            t.phases(i * gb.dim() + j) = expi(2.0 * pi * kappa * ga.labels[i] * gb.labels[j]);
    return t;
}

inline TwistUnitary twist_unitary_cyclic(const ChargeGrading& ga, const ChargeGrading& gb, int k, int N) {
    return twist_unitary(ga, gb, static_cast<double>(k) / N);
}

// number of equally spaced kappa samples that resolve all frequencies exactly
inline int fourier_samples(const ChargeGrading& g) {
    if (g.group == GroupKind::Cyclic) return g.N;
    return 2 * g.spread() + 1;
}

// x_l = int_0^1 dkappa Ad V(kappa)(x) e^{-i 2 pi l kappa}, evaluated as an exact finite sum
inline Mat fourier_component(const Mat& x, const ChargeGrading& g, int l) {
    const int M = fourier_samples(g);
    Mat out = Mat::Zero(x.rows(), x.cols());
    for (int j = 0; j < M; ++j) {
        const double kappa = static_cast<double>(j) / M;
        Mat V = g.unitary(kappa);
        out += V * x * V.adjoint() * expi(-2.0 * pi * l * kappa);
    }
    return out / static_cast<double>(M);
}

// labels l that can carry a nonzero component
inline std::vector<int> component_range(const ChargeGrading& g) {
    std::vector<int> r;
    if (g.group == GroupKind::Cyclic) {
        for (int l = 0; l < g.N; ++l) r.push_back(l);
    } else {
        for (int l = -g.spread(); l <= g.spread(); ++l) r.push_back(l);
    }
    return r;
}

// double Fourier components x_{l,m} for the Z_N x Z_N action on A (x) B
inline std::map<std::pair<int, int>, Mat> bigraded_components(const Mat& xt, const ChargeGrading& ga,
                                                              const ChargeGrading& gb, int N) {
    std::vector<Mat> Va(N), Vb(N);
    for (int j = 0; j < N; ++j) {
        Va[j] = ga.unitary(static_cast<double>(j) / N);
        Vb[j] = gb.unitary(static_cast<double>(j) / N);
    }
    std::map<std::pair<int, int>, Mat> out;
    std::vector<std::vector<Mat>> ad(N, std::vector<Mat>(N));
    for (int j1 = 0; j1 < N; ++j1)
        for (int j2 = 0; j2 < N; ++j2) {
            Mat U = Eigen::kroneckerProduct(Va[j1], Vb[j2]).eval();
            ad[j1][j2] = U * xt * U.adjoint();
        }
    for (int l = 0; l < N; ++l)
        for (int m = 0; m < N; ++m) {
            Mat c = Mat::Zero(xt.rows(), xt.cols());
            for (int j1 = 0; j1 < N; ++j1)
                for (int j2 = 0; j2 < N; ++j2) c += expi(-2.0 * pi * (j1 * l + j2 * m) / N) * ad[j1][j2];
            out[{l, m}] = c / static_cast<double>(N * N);
        }
    return out;
}

// tau_k(x~) = sum_{l,m} x~_{l,m} (V^{km} (x) 1)
inline Mat tau_k(const Mat& xt, const ChargeGrading& ga, const ChargeGrading& gb, int N, int k) {
    auto comps = bigraded_components(xt, ga, gb, N);
    Mat out = Mat::Zero(xt.rows(), xt.cols());
    const Mat Ib = Mat::Identity(gb.dim(), gb.dim());
    for (const auto& [lm, c] : comps) {
        Mat Vkm = ga.unitary(static_cast<double>(k * lm.second) / N);
        out += c * Mat(Eigen::kroneckerProduct(Vkm, Ib));
    }
    return out;
}

// Diagonal of the twist operator on a truncated product Fock space:
// prod_{j in left, k in right} chi(q_k / p_j), p and q the lightlike momenta m e^theta.
inline Vec build_R_tilde(const ScatteringFunction& chi, const ProductFockSpace& P) {
    const FockSpace& A = P.left_space();
    const FockSpace& B = P.right_space();
    return P.diagonal([&](int ia, int ib) {
        cplx e = 1.0;
        for (int a : A.occupation(ia)) {
            const double p = A.grid().p_plus(A.point_of(a));
            for (int b : B.occupation(ib)) e *= chi(B.grid().p_plus(B.point_of(b)) / p);
        }
        return e;
    });
}

struct RTildeAudit {
    double left_form = 0.0;   // int prod_k Gamma(chi(q_k / P1)) (x) dE(q)
    double right_form = 0.0;  // int dE(p) (x) prod_j Gamma(chi(P1 / p_j))
};

// compare the direct diagonal against both disintegrations, each built from
// second quantization of one-particle multiplication operators
inline RTildeAudit audit_R_tilde(const ScatteringFunction& chi, const ProductFockSpace& P, const Vec& direct) {
    const FockSpace& A = P.left_space();
    const FockSpace& B = P.right_space();
    RTildeAudit au;
    std::map<int, Vec> left_cache, right_cache;
    for (int g = 0; g < P.dim(); ++g) {
        const int ia = P.left_index(g), ib = P.right_index(g);
        auto lit = left_cache.find(ib);
        if (lit == left_cache.end()) {
            Vec u(A.one_particle_dim());
            for (int a = 0; a < A.one_particle_dim(); ++a) {
                cplx e = 1.0;
                for (int b : B.occupation(ib)) e *= chi(B.grid().p_plus(B.point_of(b)) / A.grid().p_plus(A.point_of(a)));
                u(a) = e;
            }
            lit = left_cache.emplace(ib, Vec(A.second_quantize_diagonal(u).diagonal())).first;
        }
        auto rit = right_cache.find(ia);
        if (rit == right_cache.end()) {
            Vec w(B.one_particle_dim());
            for (int b = 0; b < B.one_particle_dim(); ++b) {
                cplx e = 1.0;
                for (int a : A.occupation(ia)) e *= chi(B.grid().p_plus(B.point_of(b)) / A.grid().p_plus(A.point_of(a)));
                w(b) = e;
            }
            rit = right_cache.emplace(ia, Vec(B.second_quantize_diagonal(w).diagonal())).first;
        }
        au.left_form = std::max(au.left_form, std::abs(lit->second(ia) - direct(g)));
        au.right_form = std::max(au.right_form, std::abs(rit->second(ib) - direct(g)));
    }
    return au;
}

}  // namespace wedgelab
