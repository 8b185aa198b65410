#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace wedgelab {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<cplx>;
using SpMatR = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
using Triplet = Eigen::Triplet<cplx>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

inline cplx expi(double x) { return {std::cos(x), std::sin(x)}; }

inline SpMat speye(Eigen::Index n) {
    SpMat M(n, n);
    M.setIdentity();
    return M;
}

// keep only the columns flagged in mask
inline SpMat restrict_columns(const SpMat& A, const std::vector<char>& mask) {
    if (static_cast<Eigen::Index>(mask.size()) != A.cols())
        throw std::invalid_argument("restrict_columns: mask size mismatch");
    std::vector<Triplet> t;
    std::vector<int> newcol(mask.size(), -1);
    int nc = 0;
    for (std::size_t c = 0; c < mask.size(); ++c)
        if (mask[c]) newcol[c] = nc++;
    for (int c = 0; c < A.outerSize(); ++c) {
        if (newcol[c] < 0) continue;
        for (SpMat::InnerIterator it(A, c); it; ++it) t.emplace_back(it.row(), newcol[c], it.value());
    }
    SpMat R(A.rows(), nc);
    R.setFromTriplets(t.begin(), t.end());
    return R;
}

inline double op_norm(const Mat& A) {
    if (A.size() == 0) return 0.0;
    Eigen::JacobiSVD<Mat> svd(A);
    return svd.singularValues()(0);
}

// spectral norm; dense Gram eigenvalues when the column count is moderate,
// power iteration otherwise
inline double op_norm(const SpMat& A) {
    if (A.nonZeros() == 0) return 0.0;
    const Eigen::Index n = A.cols();
    if (n <= 1500) {
        SpMat G = SpMat(A.adjoint()) * A;
        Mat Gd = Mat(G);
        Eigen::SelfAdjointEigenSolver<Mat> es(Gd, Eigen::EigenvaluesOnly);
        double lmax = es.eigenvalues().maxCoeff();
        return std::sqrt(std::max(lmax, 0.0));
    }
    std::mt19937_64 rng(0x5eedULL);
    std::normal_distribution<double> nd;
    Vec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = cplx(nd(rng), nd(rng));
    v.normalize();
    double est = 0.0;
    for (int it = 0; it < 500; ++it) {
        Vec w = A.adjoint() * (A * v);
        double nw = w.norm();
        if (nw == 0.0) return 0.0;
        double next = std::sqrt(nw);
        v = w / nw;
        if (std::abs(next - est) <= 1e-12 * next) {
            est = next;
            break;
        }
        est = next;
    }
    return est;
}

inline double op_norm_restricted(const SpMat& A, const std::vector<char>& mask) {
    return op_norm(restrict_columns(A, mask));
}

inline double max_abs(const Mat& A) { return A.size() ? A.cwiseAbs().maxCoeff() : 0.0; }

inline double max_abs(const SpMat& A) {
    double m = 0.0;
    for (int k = 0; k < A.outerSize(); ++k)
        for (SpMat::InnerIterator it(A, k); it; ++it) m = std::max(m, std::abs(it.value()));
    return m;
}

inline Mat random_complex_matrix(int r, int c, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    Mat M(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) M(i, j) = cplx(nd(rng), nd(rng));
    return M;
}

inline Vec random_complex_vector(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    Vec v(n);
    for (int i = 0; i < n; ++i) v(i) = cplx(nd(rng), nd(rng));
    return v;
}

inline Mat random_unitary(int n, std::mt19937_64& rng) {
    Mat A = random_complex_matrix(n, n, rng);
    Eigen::HouseholderQR<Mat> qr(A);
    Mat Q = qr.householderQ();
    Mat R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < n; ++i) {
        cplx d = R(i, i);
        Q.col(i) *= (std::abs(d) > 0 ? d / std::abs(d) : cplx(1.0));
    }
    return Q;
}

// FNV-1a, used to derive per-check seeds
inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace wedgelab
