#pragma once

#include "wedgelab/core.hpp"
#include "wedgelab/scatfunc.hpp"

#include <nlohmann/json.hpp>

#include <functional>
#include <iomanip>
#include <numeric>
#include <sstream>

namespace wedgelab {

// Two-particle S-matrix on C^d (x) C^d, basis e_i (x) e_j at index i*d + j.
struct TwoParticleSMatrix {
    std::string name;
    int d = 0;
    std::vector<std::string> labels;
    std::vector<int> conjugation;  // one-particle charge conjugation as a permutation
    bool theta_constant = false;
    std::function<Mat(double)> eval;

    Mat operator()(double theta) const { return eval(theta); }
};

// Basis {e_{1,+}, e_{1,-}, e_{2,+}, e_{2,-}}. The matrix maps e_j (x) e_i to a
// multiple of e_i (x) e_j; the phase is 1 inside one copy and
// e^{+-i 2 pi kappa sigma_i sigma_j} across copies (+ when i is in copy 1).
inline TwoParticleSMatrix federbush_smatrix(double kappa) {
    TwoParticleSMatrix S;
    S.name = "federbush";
    S.d = 4;
    S.labels = {"1+", "1-", "2+", "2-"};
    S.conjugation = {1, 0, 3, 2};
    S.theta_constant = true;
    Mat M = Mat::Zero(16, 16);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const int ci = i / 2, cj = j / 2;
            const int si = (i % 2 == 0) ? 1 : -1, sj = (j % 2 == 0) ? 1 : -1;
            cplx v = 1.0;
            if (ci != cj) {
                const int eps = (ci == 0) ? 1 : -1;
                v = expi(2.0 * pi * kappa * si * sj * eps);
            }
            M(4 * i + j, 4 * j + i) = v;
        }
    S.eval = [M](double) { return M; };
    return S;
}

inline TwoParticleSMatrix longo_witten_smatrix(const ScatteringFunction& phi) {
    TwoParticleSMatrix S;
    S.name = "longo-witten";
    S.d = 2;
    S.labels = {"1", "2"};
    S.conjugation = {0, 1};
    S.theta_constant = false;
    auto f = phi.eval;
    S.eval = [f](double th) {
        Mat M = Mat::Zero(4, 4);
        M(0, 0) = 1.0;
        M(1, 2) = f(cplx(std::exp(th), 0.0));
        M(2, 1) = f(cplx(-std::exp(-th), 0.0));
        M(3, 3) = 1.0;
        return M;
    };
    return S;
}

// no interaction: e_j (x) e_i -> e_i (x) e_j with factor 1 (the kappa = 0 Federbush matrix for d = 4)
inline TwoParticleSMatrix free_smatrix(int d) {
    TwoParticleSMatrix S;
    S.name = "free";
    S.d = d;
    for (int i = 0; i < d; ++i) S.labels.push_back(std::to_string(i + 1));
    S.conjugation.resize(d);
    std::iota(S.conjugation.begin(), S.conjugation.end(), 0);
    S.theta_constant = true;
    Mat M = Mat::Zero(d * d, d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) M(i * d + j, j * d + i) = 1.0;
    S.eval = [M](double) { return M; };
    return S;
}

struct AxiomReport {
    double unitarity = 0.0;
    double yang_baxter = 0.0;
    double hermitian_analyticity = 0.0;
    double flip_pattern = 0.0;         // mass outside the e_i(x)e_j <- e_j(x)e_i slots
    double conjugation_pattern = 0.0;  // pattern change under charge conjugation
    int samples = 0;
    double tol = 0.0;
    bool pass = false;
    double max_deviation() const {
        return std::max({unitarity, yang_baxter, hermitian_analyticity, flip_pattern, conjugation_pattern});
    }
};

inline AxiomReport check_axioms(const TwoParticleSMatrix& S, const std::vector<double>& thetas, double tol) {
    AxiomReport r;
    r.tol = tol;
    const int d = S.d, d2 = d * d;
    const Mat Id = Mat::Identity(d, d), Id2 = Mat::Identity(d2, d2);
    auto pattern = [&](const Mat& M) {
        std::vector<char> nz(M.size());
        for (int i = 0; i < M.rows(); ++i)
            for (int j = 0; j < M.cols(); ++j) nz[i * M.cols() + j] = std::abs(M(i, j)) > 1e-14;
        return nz;
    };
    Mat C = Mat::Zero(d2, d2);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) C(S.conjugation[i] * d + S.conjugation[j], i * d + j) = 1.0;
    for (std::size_t k = 0; k < thetas.size(); ++k) {
        const double th = thetas[k];
        Mat M = S(th);
        r.unitarity = std::max(r.unitarity, max_abs(Mat(M.adjoint() * M - Id2)));
        r.hermitian_analyticity = std::max(r.hermitian_analyticity, max_abs(Mat(M.adjoint() - S(-th))));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                for (int c = 0; c < d2; ++c)
                    if (c != j * d + i) r.flip_pattern = std::max(r.flip_pattern, std::abs(M(i * d + j, c)));
        auto p0 = pattern(M), p1 = pattern(Mat(C * M * C.adjoint()));
        for (std::size_t q = 0; q < p0.size(); ++q)
            if (p0[q] != p1[q]) r.conjugation_pattern = 1.0;
        const double th2 = thetas[(k + 1) % thetas.size()];
        Mat A1 = Eigen::kroneckerProduct(M, Id).eval();
        Mat A2 = Eigen::kroneckerProduct(Id, S(th + th2)).eval();
        Mat A3 = Eigen::kroneckerProduct(S(th2), Id).eval();
        Mat B1 = Eigen::kroneckerProduct(Id, S(th2)).eval();
        Mat B2 = Eigen::kroneckerProduct(S(th + th2), Id).eval();
        Mat B3 = Eigen::kroneckerProduct(Id, M).eval();
        r.yang_baxter = std::max(r.yang_baxter, max_abs(Mat(A1 * A2 * A3 - B1 * B2 * B3)));
    }
    r.samples = static_cast<int>(thetas.size());
    r.pass = r.max_deviation() <= tol;
    return r;
}

inline std::string format_complex(cplx z) {
    std::ostringstream os;
    os << std::setprecision(17) << z.real() << (z.imag() < 0 || std::signbit(z.imag()) ? "-" : "+")
       << std::abs(z.imag()) << "i";
    return os.str();
}

inline std::string matrix_csv(const Mat& M) {
    std::ostringstream os;
    for (int i = 0; i < M.rows(); ++i) {
        for (int j = 0; j < M.cols(); ++j) os << (j ? "," : "") << format_complex(M(i, j));
        os << "\n";
    }
    return os.str();
}

inline nlohmann::json to_json(const AxiomReport& r) {
    return {{"unitarity", r.unitarity},
            {"yang_baxter", r.yang_baxter},
            {"hermitian_analyticity", r.hermitian_analyticity},
            {"flip_pattern", r.flip_pattern},
            {"conjugation_pattern", r.conjugation_pattern},
            {"samples", r.samples},
            {"tol", r.tol},
            {"max_deviation", r.max_deviation()},
            {"pass", r.pass}};
}

}  // namespace wedgelab
