#pragma once

#include "wedgelab/core.hpp"
#include "wedgelab/twist.hpp"

#include <nlohmann/json.hpp>

namespace wedgelab {

inline cplx hs_inner(const Mat& a, const Mat& b) { return (a.conjugate().cwiseProduct(b)).sum(); }

// orthonormal (Hilbert-Schmidt) basis of a growing operator span, stored as
// flattened columns
class SpanBuilder {
public:
    explicit SpanBuilder(double tol = 1e-10) : tol_(tol) {}

    // returns true if x enlarged the span
    bool add(const Mat& x) {
        const double nx = x.norm();
        if (nx == 0.0) return false;
        if (k_ == 0) {
            rows_ = x.rows();
            cols_ = x.cols();
            B_.resize(rows_ * cols_, 8);
        } else if (x.rows() != rows_ || x.cols() != cols_) {
            throw std::invalid_argument("SpanBuilder: shape mismatch");
        }
        Vec r = project_out(x);
        double nr = r.norm();
        if (nr <= tol_ * nx) return false;
        r /= nr;
        Vec c = B_.leftCols(k_).adjoint() * r;  // second pass
        r -= B_.leftCols(k_) * c;
        nr = r.norm();
        if (k_ == B_.cols()) B_.conservativeResize(rows_ * cols_, std::max<Eigen::Index>(8, 2 * k_));
        B_.col(k_++) = r / nr;
        return true;
    }
    // relative distance of x from the span
    double residual(const Mat& x) const {
        const double nx = x.norm();
        if (nx == 0.0) return 0.0;
        if (k_ == 0) return 1.0;
        if (x.rows() != rows_ || x.cols() != cols_) return 1.0;
        Vec r = project_out(x);
        Vec c = B_.leftCols(k_).adjoint() * r;
        r -= B_.leftCols(k_) * c;
        return r.norm() / nx;
    }
    Mat element(int i) const { return Eigen::Map<const Mat>(B_.col(i).data(), rows_, cols_); }
    std::vector<Mat> basis() const {
        std::vector<Mat> out;
        out.reserve(k_);
        for (int i = 0; i < k_; ++i) out.push_back(element(i));
        return out;
    }
    int size() const { return k_; }

private:
    Vec project_out(const Mat& x) const {
        Vec v = Eigen::Map<const Vec>(x.data(), x.size());
        if (k_ == 0) return v;
        Vec c = B_.leftCols(k_).adjoint() * v;
        return v - B_.leftCols(k_) * c;
    }

    double tol_;
    Eigen::Index rows_ = 0, cols_ = 0;
    int k_ = 0;
    Mat B_;
};

struct FiniteAlgebra {
    std::vector<Mat> generators;
    std::vector<Mat> basis;  // Hilbert-Schmidt orthonormal
    int space_dim = 0;
    int degree_reached = 0;
    bool stabilized = false;

    int dim() const { return static_cast<int>(basis.size()); }
    double residual(const Mat& x) const {
        const double nx = x.norm();
        if (nx == 0.0) return 0.0;
        Mat r = x;
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& b : basis) r -= hs_inner(b, r) * b;
        return r.norm() / nx;
    }
};

// span of words in the generators and their adjoints, grown one degree at a time
inline FiniteAlgebra algebra_closure(const std::vector<Mat>& generators, int degree_bound = 16, double tol = 1e-10) {
    if (generators.empty()) throw std::invalid_argument("algebra_closure: no generators");
    const int D = static_cast<int>(generators[0].rows());
    std::vector<Mat> gens;
    for (const auto& g : generators) {
        if (g.rows() != D || g.cols() != D) throw std::invalid_argument("algebra_closure: generator shapes differ");
        gens.push_back(g);
        if (max_abs(Mat(g - g.adjoint())) > 0.0) gens.push_back(g.adjoint());
    }
    FiniteAlgebra A;
    A.generators = generators;
    A.space_dim = D;
    SpanBuilder sb(tol);
    sb.add(Mat::Identity(D, D));
    std::vector<Mat> fresh = {sb.element(0)};
    int deg = 0;
    while (!fresh.empty() && deg < degree_bound) {
        ++deg;
        std::vector<Mat> next;
        for (const auto& g : gens)
            for (const auto& w : fresh) {
                if (sb.add(g * w)) next.push_back(sb.element(sb.size() - 1));
                if (sb.size() == D * D) break;
            }
        fresh = std::move(next);
    }
    A.degree_reached = deg;
    A.stabilized = fresh.empty() || sb.size() == D * D;
    if (!A.stabilized) {
        // one more degree decides
        bool grew = false;
        for (const auto& g : gens)
            for (const auto& w : fresh) grew = sb.add(g * w) || grew;
        A.stabilized = !grew;
    }
    A.basis = sb.basis();
    return A;
}

struct ModularData {
    Mat Delta;
    Mat J;  // antiunitary v -> J * conj(v)
    Mat S;  // antilinear v -> S * conj(v)
    Vec Omega;
    // audit
    double delta_fixes_omega = 0.0, j_fixes_omega = 0.0, j_squared = 0.0, j_delta_j = 0.0, polar = 0.0,
           kms = 0.0, positivity = 0.0;
    int cyclic_rank = 0, separating_rank = 0;
    double max_deviation() const {
        return std::max({delta_fixes_omega, j_fixes_omega, j_squared, j_delta_j, polar, kms, positivity});
    }
};

inline Mat hermitian_power(const Mat& H, double p) {
    Eigen::SelfAdjointEigenSolver<Mat> es(Mat(0.5 * (H + H.adjoint())));
    RVec ev = es.eigenvalues();
    Vec pw(ev.size());
    for (int i = 0; i < ev.size(); ++i) pw(i) = std::pow(ev(i), p);
    return es.eigenvectors() * pw.asDiagonal() * es.eigenvectors().adjoint();
}

// S: x Omega -> x^* Omega, S = J Delta^{1/2}
inline ModularData modular_from_vector(const FiniteAlgebra& A, const Vec& Omega, double rank_tol = 1e-10) {
    const int D = A.space_dim, n = A.dim();
    if (Omega.size() != D) throw std::invalid_argument("modular_from_vector: vector dimension mismatch");
    Mat X(D, n), W(D, n);
    for (int k = 0; k < n; ++k) {
        X.col(k) = A.basis[k] * Omega;
        W.col(k) = A.basis[k].adjoint() * Omega;
    }
    Eigen::JacobiSVD<Mat> svd(X);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > rank_tol * sv(0)) ++rank;
    ModularData md;
    md.cyclic_rank = rank;
    md.separating_rank = rank;
    if (rank < D) throw std::runtime_error("modular_from_vector: vector is not cyclic (rank " + std::to_string(rank) + ")");
    if (rank < n) throw std::runtime_error("modular_from_vector: vector is not separating");
    Mat Ainv = X.conjugate().inverse();
    md.S = W * Ainv;
    md.Omega = Omega;
    md.Delta = md.S.transpose() * md.S.conjugate();
    md.Delta = 0.5 * (md.Delta + md.Delta.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat> es(md.Delta);
    md.positivity = std::max(0.0, -es.eigenvalues().minCoeff());
    Mat Dm = hermitian_power(md.Delta, -0.5);
    md.J = md.S * Dm.conjugate();
    const Mat Id = Mat::Identity(D, D);
    md.delta_fixes_omega = (md.Delta * Omega - Omega).norm();
    md.j_fixes_omega = (md.J * Omega.conjugate() - Omega).norm();
    md.j_squared = max_abs(Mat(md.J * md.J.conjugate() - Id));
    md.j_delta_j = max_abs(Mat(md.J * md.Delta.conjugate() * md.J.conjugate() - md.Delta.inverse()));
    Mat Dh = hermitian_power(md.Delta, 0.5);
    md.polar = max_abs(Mat(md.J * (Dh * X).conjugate() - W));
    // <Omega, x Delta y Omega> = <Omega, y x Omega>
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            cplx lhs = Omega.dot(A.basis[a] * (md.Delta * (A.basis[b] * Omega)));
            cplx rhs = Omega.dot(A.basis[b] * (A.basis[a] * Omega));
            md.kms = std::max(md.kms, std::abs(lhs - rhs));
        }
    return md;
}

// Commutant of a *-algebra. Small spaces: nullspace of Z -> [Z, g] over all
// generators. Larger spaces with a cyclic vector: every commutant element is
// Z(xi): b Omega -> b xi, so the commutant is parametrised by xi.
inline FiniteAlgebra commutant(const FiniteAlgebra& A, const Vec* cyclic = nullptr, double tol = 1e-9) {
    const int D = A.space_dim;
    FiniteAlgebra C;
    C.space_dim = D;
    SpanBuilder sb(1e-10);
    if (D * D <= 1024 || cyclic == nullptr) {
        if (D * D > 4096) throw std::invalid_argument("commutant: space too large without a cyclic vector");
        std::vector<Mat> gens = A.generators;
        for (const auto& g : A.generators) gens.push_back(g.adjoint());
        const Mat Id = Mat::Identity(D, D);
        Mat G = Mat::Zero(D * D, D * D);
        for (const auto& g : gens) {
            // vec(Z g - g Z) = (g^T (x) 1 - 1 (x) g) vec(Z)
            Mat L = Eigen::kroneckerProduct(Mat(g.transpose()), Id).eval() - Eigen::kroneckerProduct(Id, g).eval();
            G += L.adjoint() * L;
        }
        Eigen::SelfAdjointEigenSolver<Mat> es(G);
        const double scale = std::max(1.0, es.eigenvalues().maxCoeff());
        for (int i = 0; i < D * D; ++i) {
            if (es.eigenvalues()(i) > 1e-12 * scale) break;
            Vec v = es.eigenvectors().col(i);
            sb.add(Eigen::Map<Mat>(v.data(), D, D));
        }
    } else {
        const Vec& Om = *cyclic;
        const int n = A.dim();
        Mat X(D, n);
        for (int k = 0; k < n; ++k) X.col(k) = A.basis[k] * Om;
        if (n != D) throw std::runtime_error("commutant: algebra dimension differs from space dimension");
        Mat Xinv = X.inverse();
        for (int e = 0; e < D; ++e) {
            Mat Bx(D, n);
            for (int k = 0; k < n; ++k) Bx.col(k) = A.basis[k].col(e);  // b_k e_e
            sb.add(Bx * Xinv);
        }
    }
    C.basis = sb.basis();
    C.generators = C.basis;
    C.stabilized = true;
    // direct residual against the generators
    double res = 0.0;
    for (const auto& z : C.basis)
        for (const auto& g : A.generators) res = std::max(res, max_abs(Mat(z * g - g * z)));
    if (res > tol) throw std::runtime_error("commutant: residual " + std::to_string(res));
    return C;
}

struct SpanComparison {
    int dim_a = 0, dim_b = 0;
    double a_in_b = 0.0, b_in_a = 0.0;
    double max_deviation() const { return std::max(a_in_b, b_in_a); }
    bool equal(double tol) const { return dim_a == dim_b && max_deviation() <= tol; }
};

inline SpanComparison compare_spans(const FiniteAlgebra& a, const FiniteAlgebra& b) {
    SpanComparison c;
    c.dim_a = a.dim();
    c.dim_b = b.dim();
    SpanBuilder sa, sbd;
    for (const auto& x : a.basis) sa.add(x);
    for (const auto& x : b.basis) sbd.add(x);
    for (const auto& x : a.basis) c.a_in_b = std::max(c.a_in_b, sbd.residual(x));
    for (const auto& x : b.basis) c.b_in_a = std::max(c.b_in_a, sa.residual(x));
    return c;
}

// fixed pseudo-random combination of the basis; together with its adjoint it
// generates the whole algebra for all but a null set of coefficients
inline Mat generic_element(const FiniteAlgebra& A) {
    std::mt19937_64 rng(0x6e6e71c);
    std::normal_distribution<double> nd;
    Mat z = Mat::Zero(A.space_dim, A.space_dim);
    for (const auto& b : A.basis) z += cplx(nd(rng), nd(rng)) * b;
    return z;
}

inline Mat kron(const Mat& a, const Mat& b) { return Eigen::kroneckerProduct(a, b).eval(); }

// a single generator of M_n (with its adjoint): lower shift plus a diagonal
// with distinct entries
inline std::vector<Mat> full_matrix_generators(int n) {
    Mat g = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        if (i + 1 < n) g(i + 1, i) = 1.0;
        g(i, i) = static_cast<double>(i + 1);
    }
    return {g};
}

// Toy wedge algebra M = M_n (x) 1 on C^n (x) C^n, vector sum_i sqrt(lambda_i) e_i (x) e_i,
// symmetry V = u (x) conj(u) with u = diag(e^{i 2 pi q_i / N}).
struct ModularToy {
    int n = 2, N = 2, k = 1;
    std::vector<double> lambda;
    std::vector<int> q;
    FiniteAlgebra M;
    ChargeGrading grading;  // on C^n (x) C^n, labels (q_i - q_j) mod N
    Vec Omega;
    Mat V() const { return grading.unitary(1.0 / N); }
    double kappa() const { return static_cast<double>(k) / N; }
};

inline ModularToy make_modular_toy(int n, int N, int k, std::vector<double> lambda, std::vector<int> q) {
    if (static_cast<int>(lambda.size()) != n || static_cast<int>(q.size()) != n)
        throw std::invalid_argument("make_modular_toy: lambda and q need n entries");
    double s = 0.0;
    for (double l : lambda) {
        if (!(l > 0.0)) throw std::invalid_argument("make_modular_toy: lambda must be positive");
        s += l;
    }
    ModularToy t;
    t.n = n;
    t.N = N;
    t.k = k;
    t.lambda = lambda;
    t.q = q;
    const Mat In = Mat::Identity(n, n);
    std::vector<Mat> gens;
    for (const auto& g : full_matrix_generators(n)) gens.push_back(kron(g, In));
    t.M = algebra_closure(gens);
    std::vector<int> labels(n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) labels[i * n + j] = (((q[i] - q[j]) % N) + N) % N;
    t.grading = diagonal_grading(labels, GroupKind::Cyclic, N);
    t.Omega = Vec::Zero(n * n);
    for (int i = 0; i < n; ++i) t.Omega(i * n + i) = std::sqrt(lambda[i] / s);
    return t;
}

inline double adv_invariance_residual(const FiniteAlgebra& M, const ChargeGrading& g, double kappa) {
    Mat V = g.unitary(kappa);
    SpanBuilder sb;
    for (const auto& b : M.basis) sb.add(b);
    double r = 0.0;
    for (const auto& b : M.basis) r = std::max(r, sb.residual(Mat(V * b * V.adjoint())));
    return r;
}

// closure of {x (x) 1, Ad V~(1 (x) y)} with V~ = exp(i 2 pi kappa Q (x) Q)
inline FiniteAlgebra twisted_wedge_algebra(const FiniteAlgebra& M, const ChargeGrading& g, double kappa,
                                           double tol = 1e-10) {
    if (adv_invariance_residual(M, g, kappa) > tol)
        throw std::invalid_argument("twisted_wedge_algebra: grading does not preserve the algebra");
    const int D = M.space_dim;
    const Mat Id = Mat::Identity(D, D);
    Mat T = twist_unitary(g, g, kappa).dense();
    std::vector<Mat> gens;
    for (const auto& x : M.generators) gens.push_back(kron(x, Id));
    for (const auto& y : M.generators) gens.push_back(T * kron(Id, y) * T.adjoint());
    return algebra_closure(gens);
}

struct ModularTwistReport {
    double delta_deviation = 0.0;  // |Delta~ - Delta (x) Delta|
    double j_deviation = 0.0;      // |J~ (V~ (J (x) J))^{-1} - 1|
    double kms_deviation = 0.0;    // KMS with Delta (x) Delta on random pairs
    double modular_audit = 0.0;    // invariants of both modular data
    int dim_algebra = 0, dim_space = 0;
    double max_deviation() const { return std::max({delta_deviation, j_deviation, kms_deviation, modular_audit}); }
};

inline ModularTwistReport verify_modular_twisted(const ModularToy& toy, std::mt19937_64& rng, int kms_pairs = 20,
                                                 const FiniteAlgebra* twisted = nullptr) {
    ModularTwistReport r;
    const double kappa = toy.kappa();
    FiniteAlgebra Mt = twisted ? *twisted : twisted_wedge_algebra(toy.M, toy.grading, kappa);
    Vec Om2 = Eigen::kroneckerProduct(toy.Omega, toy.Omega).eval();
    ModularData md = modular_from_vector(toy.M, toy.Omega);
    ModularData mdt = modular_from_vector(Mt, Om2);
    r.dim_algebra = Mt.dim();
    r.dim_space = Mt.space_dim;
    Mat DD = kron(md.Delta, md.Delta);
    r.delta_deviation = max_abs(Mat(mdt.Delta - DD));
    Mat T = twist_unitary(toy.grading, toy.grading, kappa).dense();
    Mat cand = T * kron(md.J, md.J);
    r.j_deviation = max_abs(Mat(mdt.J * cand.inverse() - Mat::Identity(cand.rows(), cand.cols())));
    std::normal_distribution<double> nd;
    for (int p = 0; p < kms_pairs; ++p) {
        Mat x = Mat::Zero(r.dim_space, r.dim_space), y = x;
        for (const auto& b : Mt.basis) {
            x += cplx(nd(rng), nd(rng)) * b;
            y += cplx(nd(rng), nd(rng)) * b;
        }
        cplx lhs = Om2.dot(x * (DD * (y * Om2)));
        cplx rhs = Om2.dot(y * (x * Om2));
        r.kms_deviation = std::max(r.kms_deviation, std::abs(lhs - rhs) / std::max(1.0, x.norm() * y.norm()));
    }
    r.modular_audit = std::max(md.max_deviation(), mdt.max_deviation());
    return r;
}

struct CommutantReport {
    SpanComparison comparison;
    int dim_commutant = 0;
    double max_deviation() const { return comparison.max_deviation(); }
};

// brute-force commutant of M~ against the closure of {Ad V~(x' (x) 1), 1 (x) y'}
inline CommutantReport verify_commutant_twisted(const ModularToy& toy, const FiniteAlgebra* twisted = nullptr) {
    const double kappa = toy.kappa();
    const int D = toy.M.space_dim;
    const Mat Id = Mat::Identity(D, D);
    FiniteAlgebra Mt = twisted ? *twisted : twisted_wedge_algebra(toy.M, toy.grading, kappa);
    Vec Om2 = Eigen::kroneckerProduct(toy.Omega, toy.Omega).eval();
    FiniteAlgebra brute = commutant(Mt, &Om2);
    FiniteAlgebra Mp = commutant(toy.M, &toy.Omega);
    Mat T = twist_unitary(toy.grading, toy.grading, kappa).dense();
    std::vector<Mat> gens;
    const Mat z = generic_element(Mp);
    gens.push_back(T * kron(z, Id) * T.adjoint());
    gens.push_back(kron(Id, z));
    FiniteAlgebra formula = algebra_closure(gens);
    CommutantReport r;
    r.comparison = compare_spans(brute, formula);
    r.dim_commutant = brute.dim();
    return r;
}

struct FactorReport {
    int center_dim = 0;
    int fixed_point_dim = 0;
    double p_in_fixed_points = 0.0;
    int p_corner_in_fixed_points = 0;  // dim p R^alpha p
    double pp_in_twisted = 0.0;
    int pp_corner_in_twisted = 0;  // dim (p(x)p) R~ (p(x)p)
    double fixed_point_invariance = 0.0;  // |Ad V~(1 (x) y) - 1 (x) y| for y in R^alpha
    int dim_twisted = 0;
    bool factor() const { return center_dim == 1; }
    bool minimal() const { return p_corner_in_fixed_points == 1 && pp_corner_in_twisted == 1; }
};

inline int corner_dimension(const FiniteAlgebra& A, const Mat& p) {
    SpanBuilder sb;
    for (const auto& b : A.basis) sb.add(p * b * p);
    return sb.size();
}

// R a full matrix algebra on C^n with a diagonal grading; R~ = R (x) 1 v Ad V~(1 (x) R)
inline FactorReport factor_and_minimal_projection(const FiniteAlgebra& R, const ChargeGrading& g, double kappa,
                                                  int p_index = 0) {
    FactorReport rep;
    const int D = R.space_dim;
    const Mat Id = Mat::Identity(D, D);
    FiniteAlgebra Rt = twisted_wedge_algebra(R, g, kappa);
    rep.dim_twisted = Rt.dim();
    // center: z = sum c_k b_k with [z, generator] = 0
    {
        const int n = Rt.dim();
        std::vector<Mat> gens = Rt.generators;
        for (const auto& x : Rt.generators) gens.push_back(x.adjoint());
        Mat G = Mat::Zero(n, n);
        for (const auto& gen : gens) {
            Mat L(Rt.space_dim * Rt.space_dim, n);
            for (int k = 0; k < n; ++k) {
                Mat c = Rt.basis[k] * gen - gen * Rt.basis[k];
                L.col(k) = Eigen::Map<Vec>(c.data(), c.size());
            }
            G += L.adjoint() * L;
        }
        Eigen::SelfAdjointEigenSolver<Mat> es(G);
        const double scale = std::max(1.0, es.eigenvalues().maxCoeff());
        for (int i = 0; i < n; ++i)
            if (es.eigenvalues()(i) <= 1e-12 * scale) ++rep.center_dim;
    }
    // fixed points of Ad V
    SpanBuilder fp;
    for (const auto& b : R.basis) fp.add(fourier_component(b, g, 0));
    FiniteAlgebra Ra;
    Ra.basis = fp.basis();
    Ra.generators = Ra.basis;
    Ra.space_dim = D;
    rep.fixed_point_dim = Ra.dim();
    Mat p = Mat::Zero(D, D);
    p(p_index, p_index) = 1.0;
    rep.p_in_fixed_points = fp.residual(p);
    rep.p_corner_in_fixed_points = corner_dimension(Ra, p);
    Mat pp = kron(p, p);
    rep.pp_in_twisted = Rt.residual(pp);
    rep.pp_corner_in_twisted = corner_dimension(Rt, pp);
    Mat T = twist_unitary(g, g, kappa).dense();
    for (const auto& y : Ra.basis) {
        Mat oy = kron(Id, y);
        rep.fixed_point_invariance = std::max(rep.fixed_point_invariance, max_abs(Mat(T * oy * T.adjoint() - oy)));
    }
    return rep;
}

// [x (x) 1, Ad V~(x' (x) 1)] for x in M, x' in M'
inline double commutativity_lemma_residual(const ModularToy& toy) {
    const double kappa = toy.kappa();
    const int D = toy.M.space_dim;
    const Mat Id = Mat::Identity(D, D);
    FiniteAlgebra Mp = commutant(toy.M, &toy.Omega);
    Mat T = twist_unitary(toy.grading, toy.grading, kappa).dense();
    double r = 0.0;
    for (const auto& x : toy.M.basis) {
        Mat X = kron(x, Id);
        for (const auto& xp : Mp.basis) {
            Mat Y = T * kron(xp, Id) * T.adjoint();
            r = std::max(r, max_abs(Mat(X * Y - Y * X)));
        }
    }
    return r;
}

struct TauReport {
    int samples = 0;
    double max_ratio = 0.0;          // max |x~| / |tau_k(x~)|, bounded by N^2
    double bound = 0.0;              // N^2
    double vector_deviation = 0.0;   // |tau_k(x~) Omega~ - x~ Omega~|
    double membership = 0.0;         // distance of tau_k(x~) from M~
    double reconstruction = 0.0;     // |sum_{l,m} x~_{l,m} - x~|
    bool pass(double tol) const { return max_ratio <= bound && vector_deviation <= tol && membership <= 1e-8; }
};

// x~ random in M (x) M; tau_k(x~) = sum_{l,m} x~_{l,m} (V^{km} (x) 1)
inline TauReport tau_bound(const ModularToy& toy, std::mt19937_64& rng, int samples,
                           const FiniteAlgebra* twisted = nullptr) {
    TauReport r;
    r.samples = samples;
    r.bound = static_cast<double>(toy.N) * toy.N;
    FiniteAlgebra Mt = twisted ? *twisted : twisted_wedge_algebra(toy.M, toy.grading, toy.kappa());
    const Vec Om2 = Eigen::kroneckerProduct(toy.Omega, toy.Omega).eval();
    std::normal_distribution<double> nd;
    const int n = toy.M.dim();
    for (int s = 0; s < samples; ++s) {
        Mat a = Mat::Zero(toy.M.space_dim, toy.M.space_dim), b = a;
        for (int k = 0; k < n; ++k) {
            a += cplx(nd(rng), nd(rng)) * toy.M.basis[k];
            b += cplx(nd(rng), nd(rng)) * toy.M.basis[k];
        }
        Mat c = Mat::Zero(toy.M.space_dim, toy.M.space_dim);
        for (int k = 0; k < n; ++k) c += cplx(nd(rng), nd(rng)) * toy.M.basis[k];
        // a sum of two elementary tensors, so x~ is not a product
        Mat xt = kron(a, b) + kron(c, toy.M.basis[0]);
        auto comps = bigraded_components(xt, toy.grading, toy.grading, toy.N);
        Mat sum = Mat::Zero(xt.rows(), xt.cols());
        for (const auto& kv : comps) sum += kv.second;
        r.reconstruction = std::max(r.reconstruction, max_abs(Mat(sum - xt)));
        Mat tx = tau_k(xt, toy.grading, toy.grading, toy.N, toy.k);
        r.max_ratio = std::max(r.max_ratio, op_norm(xt) / op_norm(tx));
        r.vector_deviation = std::max(r.vector_deviation, (tx * Om2 - xt * Om2).norm());
        r.membership = std::max(r.membership, Mt.residual(tx));
    }
    return r;
}

}  // namespace wedgelab
