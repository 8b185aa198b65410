#pragma once

#include "wedgelab/core.hpp"
#include "wedgelab/onepspace.hpp"
#include "wedgelab/scatfunc.hpp"

#include <functional>
#include <numeric>
#include <iomanip>
#include <optional>
#include <sstream>

namespace wedgelab {

// D(tau_j) on the unsymmetrized n-particle space of a single-species grid
// (j is 1-based, slots j and j+1 are exchanged):
//   (D Psi)(t) = S2(theta_{t_{j+1}} - theta_{t_j}) Psi(t with slots swapped)
inline SpMat s2_permutation(const ScatteringFunction& S2, int n, int j, const RapidityGrid& grid, int n_species = 1) {
    if (n < 2 || j < 1 || j > n - 1) throw std::invalid_argument("s2_permutation: j out of range");
    const int d = grid.size(), D = d * n_species;
    long dim = 1;
    for (int k = 0; k < n; ++k) dim *= D;
    if (dim > 4'000'000) throw std::invalid_argument("s2_permutation: unsymmetrized sector too large");
    std::vector<Triplet> t;
    t.reserve(dim);
    std::vector<int> tup(n);
    for (long flat = 0; flat < dim; ++flat) {
        long r = flat;
        for (int k = n - 1; k >= 0; --k) {
            tup[k] = static_cast<int>(r % D);
            r /= D;
        }
        std::vector<int> sw = tup;
        std::swap(sw[j - 1], sw[j]);
        long col = 0;
        for (int k = 0; k < n; ++k) col = col * D + sw[k];
        const double th_next = grid.theta[tup[j] % d], th_prev = grid.theta[tup[j - 1] % d];
        t.emplace_back(static_cast<int>(flat), static_cast<int>(col), S2(th_next - th_prev));
    }
    SpMat M(dim, dim);
    M.setFromTriplets(t.begin(), t.end());
    return M;
}

struct SectorAudit {
    double hermitian = 0.0;       // |Q - Q*|
    double idempotent = 0.0;      // |Q^2 - Q|
    double involution = 0.0;      // |D(tau_j)^2 - 1|
    double braid = 0.0;           // braid and far-commutation relations
    double representation = 0.0;  // different words for one permutation
    double max() const { return std::max({hermitian, idempotent, involution, braid, representation}); }
};

namespace detail {

// monomial operator on an orbit: e_b -> ph[b] e_{img[b]}
struct Monomial {
    std::vector<int> img;
    std::vector<cplx> ph;
    Monomial compose(const Monomial& B) const {  // this * B
        Monomial r;
        r.img.resize(B.img.size());
        r.ph.resize(B.img.size());
        for (std::size_t b = 0; b < B.img.size(); ++b) {
            r.img[b] = img[B.img[b]];
            r.ph[b] = ph[B.img[b]] * B.ph[b];
        }
        return r;
    }
    double distance(const Monomial& o) const {
        double m = 0.0;
        for (std::size_t b = 0; b < img.size(); ++b) {
            if (img[b] != o.img[b]) m = std::max(m, std::abs(ph[b]) + std::abs(o.ph[b]));
            else m = std::max(m, std::abs(ph[b] - o.ph[b]));
        }
        return m;
    }
    static Monomial identity(std::size_t k) {
        Monomial r;
        r.img.resize(k);
        std::iota(r.img.begin(), r.img.end(), 0);
        r.ph.assign(k, 1.0);
        return r;
    }
};

inline void enumerate_multisets(int D, int n, int start, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (static_cast<int>(cur.size()) == n) {
        out.push_back(cur);
        return;
    }
    for (int a = start; a < D; ++a) {
        cur.push_back(a);
        enumerate_multisets(D, n, a, cur, out);
        cur.pop_back();
    }
}

}  // namespace detail

class FockSpace {
public:
    FockSpace(RapidityGrid grid, int n_species, int n_max, std::optional<ScatteringFunction> s2 = std::nullopt,
              double rep_tol = 1e-10)
        : grid_(std::move(grid)), n_species_(n_species), n_max_(n_max), s2_(std::move(s2)) {
        if (n_species_ < 1) throw std::invalid_argument("FockSpace: need at least one species");
        if (n_max_ < 0) throw std::invalid_argument("FockSpace: negative particle cutoff");
        D_ = grid_.size() * n_species_;
        build_sectors(rep_tol);
        build_creation();
    }

    const RapidityGrid& grid() const { return grid_; }
    int n_species() const { return n_species_; }
    int n_max() const { return n_max_; }
    int one_particle_dim() const { return D_; }
    bool bosonic() const { return !s2_.has_value(); }
    const std::optional<ScatteringFunction>& s2() const { return s2_; }

    int dim() const { return total_; }
    int sector_dim(int n) const { return dims_.at(n); }
    int offset(int n) const { return offsets_.at(n); }
    int particle_number(int idx) const { return number_.at(idx); }
    int alpha(int species, int i) const { return species * grid_.size() + i; }
    int species_of(int a) const { return a / grid_.size(); }
    int point_of(int a) const { return a % grid_.size(); }

    // isometry from the symmetrized sector basis into the unsymmetrized D^n space
    const SpMatR& sector_isometry(int n) const { return B_.at(n); }
    const std::vector<std::vector<int>>& occupations(int n) const { return occ_.at(n); }
    const std::vector<int>& occupation(int idx) const {
        const int n = number_.at(idx);
        return occ_[n][idx - offsets_[n]];
    }
    const SectorAudit& audit(int n) const { return audit_.at(n); }

    // Q_n = B_n B_n^* on the unsymmetrized sector
    SpMat sector_projection(int n) const {
        SpMat B = SpMat(B_.at(n));
        return SpMat(B * SpMat(B.adjoint()));
    }

    Vec vacuum() const {
        Vec v = Vec::Zero(total_);
        v(0) = 1.0;
        return v;
    }

    std::vector<char> mask_upto(int k) const {
        std::vector<char> m(total_);
        for (int i = 0; i < total_; ++i) m[i] = number_[i] <= k;
        return m;
    }

    // a^dagger of a coordinate unit vector
    const SpMat& create_basis(int a) const { return create_.at(a); }

    // a^dagger(c) for a coordinate vector c of length D (linear in c)
    SpMat create_coords(const Vec& c) const {
        if (c.size() != D_) throw std::invalid_argument("create_coords: wrong length");
        SpMat out(total_, total_);
        for (int a = 0; a < D_; ++a)
            if (c(a) != cplx(0.0)) out += c(a) * create_[a];
        return out;
    }

    SpMat create(const Vec& psi, int species = 0) const {
        if (species < 0 || species >= n_species_) throw std::invalid_argument("create: species out of range");
        Vec c = Vec::Zero(D_);
        c.segment(species * grid_.size(), grid_.size()) = grid_.to_coords(psi);
        return create_coords(c);
    }
    SpMat annihilate(const Vec& psi, int species = 0) const { return SpMat(create(psi, species).adjoint()); }

    // phi(f) = a^dagger(f^+) + a(conj f^-)
    SpMat field(const PmTransform& t, int species = 0) const {
        Vec jm = t.minus.conjugate();
        return create(t.plus, species) + SpMat(create(jm, species).adjoint());
    }
    SpMat field(const TestFunction& f, int species = 0) const { return field(pm_transform(f, grid_), species); }

    // Gamma(V) for a diagonal one-particle operator with entries v (length D)
    SpMat second_quantize_diagonal(const Vec& v) const {
        if (v.size() != D_) throw std::invalid_argument("second_quantize_diagonal: wrong length");
        std::vector<Triplet> t;
        t.reserve(total_);
        for (int idx = 0; idx < total_; ++idx) {
            cplx e = 1.0;
            for (int a : occupation(idx)) e *= v(a);
            t.emplace_back(idx, idx, e);
        }
        SpMat M(total_, total_);
        M.setFromTriplets(t.begin(), t.end());
        return M;
    }

    // Gamma(V) = V^{(x)n} restricted to each sector; dense path only for small D^n
    SpMat second_quantize(const Mat& V) const {
        if (V.rows() != D_ || V.cols() != D_) throw std::invalid_argument("second_quantize: wrong dimension");
        Mat off = V;
        off.diagonal().setZero();
        if (off.cwiseAbs().maxCoeff() == 0.0) return second_quantize_diagonal(V.diagonal());
        std::vector<Triplet> t;
        t.emplace_back(0, 0, 1.0);
        for (int n = 1; n <= n_max_; ++n) {
            long full = 1;
            for (int k = 0; k < n; ++k) full *= D_;
            if (full > 4096) throw std::invalid_argument("second_quantize: dense path limited to D^n <= 4096");
            Mat B = Mat(SpMat(B_[n]));
            Mat VB = B;
            for (int s = 0; s < n; ++s) VB = apply_slot(V, VB, n, s);
            Mat blk = B.adjoint() * VB;
            for (int i = 0; i < blk.rows(); ++i)
                for (int j = 0; j < blk.cols(); ++j)
                    if (blk(i, j) != cplx(0.0)) t.emplace_back(offsets_[n] + i, offsets_[n] + j, blk(i, j));
        }
        SpMat M(total_, total_);
        M.setFromTriplets(t.begin(), t.end());
        return M;
    }

    // sum of per-particle labels, e.g. charges per species
    std::vector<int> additive_labels(const std::function<int(int)>& per_particle) const {
        std::vector<int> out(total_);
        for (int idx = 0; idx < total_; ++idx) {
            int s = 0;
            for (int a : occupation(idx)) s += per_particle(a);
            out[idx] = s;
        }
        return out;
    }

    // joint eigenvalues (p0, p1) of the translation generators
    std::vector<std::pair<double, double>> momenta() const {
        std::vector<std::pair<double, double>> out(total_);
        for (int idx = 0; idx < total_; ++idx) {
            double p0 = 0.0, p1 = 0.0;
            for (int a : occupation(idx)) {
                p0 += grid_.p0(point_of(a));
                p1 += grid_.p1(point_of(a));
            }
            out[idx] = {p0, p1};
        }
        return out;
    }

private:
    Mat apply_slot(const Mat& V, const Mat& X, int n, int slot) const {
        long stride = 1;
        for (int k = slot + 1; k < n; ++k) stride *= D_;
        Mat Y = Mat::Zero(X.rows(), X.cols());
        const long block = stride * D_;
        for (long base = 0; base < X.rows(); base += block)
            for (long r = 0; r < stride; ++r)
                for (int a = 0; a < D_; ++a)
                    for (int b = 0; b < D_; ++b) {
                        cplx v = V(a, b);
                        if (v == cplx(0.0)) continue;
                        Y.row(base + a * stride + r) += v * X.row(base + b * stride + r);
                    }
        return Y;
    }

    double theta_of(int a) const { return grid_.theta[point_of(a)]; }
    cplx exchange(int a_prev, int a_next) const {
        // D e_s = S2(theta_{s_j-1} - theta_{s_j}) e_swap(s)
        if (!s2_) return 1.0;
        return (*s2_)(theta_of(a_prev) - theta_of(a_next));
    }

    void build_sectors(double rep_tol) {
        dims_.assign(n_max_ + 1, 0);
        offsets_.assign(n_max_ + 1, 0);
        B_.resize(n_max_ + 1);
        occ_.resize(n_max_ + 1);
        audit_.assign(n_max_ + 1, SectorAudit{});
        total_ = 0;
        for (int n = 0; n <= n_max_; ++n) {
            long full = 1;
            for (int k = 0; k < n; ++k) full *= D_;
            if (full > 50'000'000) throw std::invalid_argument("FockSpace: sector too large");
            std::vector<std::vector<int>> msets;
            std::vector<int> cur;
            detail::enumerate_multisets(D_, n, 0, cur, msets);
            std::vector<Triplet> trip;
            int col = 0;
            SectorAudit& au = audit_[n];
            for (const auto& ms : msets) {
                std::vector<std::vector<int>> orbit;
                std::vector<int> t = ms;
                do orbit.push_back(t);
                while (std::next_permutation(t.begin(), t.end()));
                const int k = static_cast<int>(orbit.size());
                auto index_of = [&](const std::vector<int>& x) {
                    return static_cast<int>(std::lower_bound(orbit.begin(), orbit.end(), x) - orbit.begin());
                };
                // generators on the orbit
                std::vector<detail::Monomial> gen(std::max(0, n - 1));
                for (int j = 1; j < n; ++j) {
                    auto& g = gen[j - 1];
                    g.img.resize(k);
                    g.ph.resize(k);
                    for (int b = 0; b < k; ++b) {
                        std::vector<int> s = orbit[b];
                        cplx val = exchange(s[j - 1], s[j]);
                        std::swap(s[j - 1], s[j]);
                        g.img[b] = index_of(s);
                        g.ph[b] = val;
                    }
                }
                for (const auto& g : gen) {
                    auto sq = g.compose(g);
                    au.involution = std::max(au.involution, sq.distance(detail::Monomial::identity(k)));
                }
                for (int a = 0; a + 1 < static_cast<int>(gen.size()); ++a) {
                    auto l = gen[a].compose(gen[a + 1]).compose(gen[a]);
                    auto r = gen[a + 1].compose(gen[a]).compose(gen[a + 1]);
                    au.braid = std::max(au.braid, l.distance(r));
                }
                for (int a = 0; a < static_cast<int>(gen.size()); ++a)
                    for (int b = a + 2; b < static_cast<int>(gen.size()); ++b)
                        au.braid = std::max(au.braid, gen[a].compose(gen[b]).distance(gen[b].compose(gen[a])));

                // group average over all n! words, breadth first over slot arrangements
                Mat P = Mat::Zero(k, k);
                std::map<std::vector<int>, detail::Monomial> seen;
                std::vector<std::pair<std::vector<int>, detail::Monomial>> frontier;
                std::vector<int> id(n);
                std::iota(id.begin(), id.end(), 0);
                seen.emplace(id, detail::Monomial::identity(k));
                frontier.emplace_back(id, detail::Monomial::identity(k));
                while (!frontier.empty()) {
                    std::vector<std::pair<std::vector<int>, detail::Monomial>> next;
                    for (const auto& [perm, M] : frontier) {
                        for (int j = 1; j < n; ++j) {
                            std::vector<int> p2 = perm;
                            std::swap(p2[j - 1], p2[j]);
                            auto M2 = gen[j - 1].compose(M);
                            auto it = seen.find(p2);
                            if (it != seen.end()) {
                                au.representation = std::max(au.representation, it->second.distance(M2));
                                continue;
                            }
                            seen.emplace(p2, M2);
                            next.emplace_back(std::move(p2), std::move(M2));
                        }
                    }
                    frontier = std::move(next);
                }
                const double inv = 1.0 / static_cast<double>(seen.size());
                for (const auto& [perm, M] : seen)
                    for (int b = 0; b < k; ++b) P(M.img[b], b) += M.ph[b] * inv;
                au.hermitian = std::max(au.hermitian, max_abs(Mat(P - P.adjoint())));
                au.idempotent = std::max(au.idempotent, max_abs(Mat(P * P - P)));

                std::vector<Vec> range;
                if (k == 1) {
                    if (std::abs(P(0, 0) - 1.0) < 0.5) range.push_back(Vec::Ones(1));
                } else {
                    Eigen::SelfAdjointEigenSolver<Mat> es(Mat(0.5 * (P + P.adjoint())));
                    for (int e = k - 1; e >= 0; --e) {
                        if (es.eigenvalues()(e) < 0.5) break;
                        Vec v = es.eigenvectors().col(e);
                        for (int b = 0; b < k; ++b)
                            if (std::abs(v(b)) > 1e-8) {
                                v *= std::conj(v(b)) / std::abs(v(b));
                                break;
                            }
                        range.push_back(v);
                    }
                }
                for (const auto& v : range) {
                    for (int b = 0; b < k; ++b) {
                        if (std::abs(v(b)) < 1e-15) continue;
                        long flat = 0;
                        for (int x : orbit[b]) flat = flat * D_ + x;
                        trip.emplace_back(static_cast<int>(flat), col, v(b));
                    }
                    occ_[n].push_back(ms);
                    ++col;
                }
            }
            if (au.max() > rep_tol)
                throw std::runtime_error("FockSpace: exchange operators violate the permutation group relations (" +
                                         std::to_string(au.max()) + ")");
            B_[n].resize(full, col);
            B_[n].setFromTriplets(trip.begin(), trip.end());
            dims_[n] = col;
            offsets_[n] = total_;
            total_ += col;
        }
        number_.resize(total_);
        for (int n = 0; n <= n_max_; ++n)
            for (int i = 0; i < dims_[n]; ++i) number_[offsets_[n] + i] = n;
    }

    // a^dagger(e_a): sector n-1 -> n as sqrt(n) B_n^* (e_a (x) .) B_{n-1}
    void build_creation() {
        create_.assign(D_, SpMat(total_, total_));
        std::vector<std::vector<Triplet>> trip(D_);
        for (int n = 1; n <= n_max_; ++n) {
            long sub = 1;
            for (int k = 0; k < n - 1; ++k) sub *= D_;
            SpMat Bprev = SpMat(B_[n - 1]);
            const double sq = std::sqrt(static_cast<double>(n));
            for (int a = 0; a < D_; ++a) {
                SpMatR rows = B_[n].middleRows(a * sub, sub);
                SpMat blk = SpMat(SpMat(rows).adjoint()) * Bprev;
                for (int c = 0; c < blk.outerSize(); ++c)
                    for (SpMat::InnerIterator it(blk, c); it; ++it)
                        if (std::abs(it.value()) > 1e-15)
                            trip[a].emplace_back(offsets_[n] + it.row(), offsets_[n - 1] + it.col(), sq * it.value());
            }
        }
        for (int a = 0; a < D_; ++a) create_[a].setFromTriplets(trip[a].begin(), trip[a].end());
    }

    RapidityGrid grid_;
    int n_species_, n_max_;
    std::optional<ScatteringFunction> s2_;
    int D_ = 0, total_ = 0;
    std::vector<int> dims_, offsets_, number_;
    std::vector<SpMatR> B_;
    std::vector<std::vector<std::vector<int>>> occ_;
    std::vector<SectorAudit> audit_;
    std::vector<SpMat> create_;
};

// A (x) B truncated to nA + nB <= n_total, ordered by blocks (nA, nB) with
// nA + nB increasing, then nA increasing; inside a block index iA * dimB + iB.
class ProductFockSpace {
public:
    struct Block {
        int nA, nB, offset, dimA, dimB;
    };

    ProductFockSpace(const FockSpace& A, const FockSpace& B, int n_total) : A_(A), B_(B), n_total_(n_total) {
        block_of_.assign(A.n_max() + 1, std::vector<int>(B.n_max() + 1, -1));
        int off = 0;
        for (int tot = 0; tot <= n_total; ++tot)
            for (int nA = 0; nA <= tot; ++nA) {
                int nB = tot - nA;
                if (nA > A.n_max() || nB > B.n_max()) continue;
                Block b{nA, nB, off, A.sector_dim(nA), B.sector_dim(nB)};
                block_of_[nA][nB] = static_cast<int>(blocks_.size());
                blocks_.push_back(b);
                off += b.dimA * b.dimB;
            }
        dim_ = off;
        ia_.resize(dim_);
        ib_.resize(dim_);
        total_.resize(dim_);
        for (const auto& b : blocks_)
            for (int i = 0; i < b.dimA; ++i)
                for (int j = 0; j < b.dimB; ++j) {
                    int g = b.offset + i * b.dimB + j;
                    ia_[g] = A.offset(b.nA) + i;
                    ib_[g] = B.offset(b.nB) + j;
                    total_[g] = b.nA + b.nB;
                }
    }

    const FockSpace& left_space() const { return A_; }
    const FockSpace& right_space() const { return B_; }
    int dim() const { return dim_; }
    int n_total() const { return n_total_; }
    const std::vector<Block>& blocks() const { return blocks_; }
    int left_index(int g) const { return ia_[g]; }
    int right_index(int g) const { return ib_[g]; }
    int total_number(int g) const { return total_[g]; }

    Vec vacuum() const {
        Vec v = Vec::Zero(dim_);
        v(0) = 1.0;
        return v;
    }

    std::vector<char> mask_upto(int k) const {
        std::vector<char> m(dim_);
        for (int g = 0; g < dim_; ++g) m[g] = total_[g] <= k;
        return m;
    }

    // X (x) 1, optionally only on source columns with nA + nB <= max_source_total
    SpMat left(const SpMat& X, int max_source_total = -1) const {
        std::vector<Triplet> t;
        for (int c = 0; c < X.outerSize(); ++c) {
            const int nA = A_.particle_number(c);
            for (SpMat::InnerIterator it(X, c); it; ++it) {
                const int r = static_cast<int>(it.row());
                const int nA2 = A_.particle_number(r);
                for (int nB = 0; nB <= B_.n_max(); ++nB) {
                    if (max_source_total >= 0 && nA + nB > max_source_total) break;
                    int bs = block(nA, nB), bt = block(nA2, nB);
                    if (bs < 0 || bt < 0) continue;
                    const auto& S = blocks_[bs];
                    const auto& T = blocks_[bt];
                    const int ls = c - A_.offset(nA), lt = r - A_.offset(nA2);
                    for (int j = 0; j < S.dimB; ++j)
                        t.emplace_back(T.offset + lt * T.dimB + j, S.offset + ls * S.dimB + j, it.value());
                }
            }
        }
        SpMat M(dim_, dim_);
        M.setFromTriplets(t.begin(), t.end());
        return M;
    }

    // 1 (x) Y
    SpMat right(const SpMat& Y, int max_source_total = -1) const {
        std::vector<Triplet> t;
        for (int c = 0; c < Y.outerSize(); ++c) {
            const int nB = B_.particle_number(c);
            for (SpMat::InnerIterator it(Y, c); it; ++it) {
                const int r = static_cast<int>(it.row());
                const int nB2 = B_.particle_number(r);
                for (int nA = 0; nA <= A_.n_max(); ++nA) {
                    if (max_source_total >= 0 && nA + nB > max_source_total) break;
                    int bs = block(nA, nB), bt = block(nA, nB2);
                    if (bs < 0 || bt < 0) continue;
                    const auto& S = blocks_[bs];
                    const auto& T = blocks_[bt];
                    const int ls = c - B_.offset(nB), lt = r - B_.offset(nB2);
                    for (int i = 0; i < S.dimA; ++i)
                        t.emplace_back(T.offset + i * T.dimB + lt, S.offset + i * S.dimB + ls, it.value());
                }
            }
        }
        SpMat M(dim_, dim_);
        M.setFromTriplets(t.begin(), t.end());
        return M;
    }

    // diagonal operator with entries fn(left basis index, right basis index)
    Vec diagonal(const std::function<cplx(int, int)>& fn) const {
        Vec v(dim_);
        for (int g = 0; g < dim_; ++g) v(g) = fn(ia_[g], ib_[g]);
        return v;
    }

    // Ad(diag(u))(X) = U X U^*
    static SpMat conjugate_by_diagonal(const Vec& u, const SpMat& X) {
        SpMat Y = X;
        for (int c = 0; c < Y.outerSize(); ++c)
            for (SpMat::InnerIterator it(Y, c); it; ++it) it.valueRef() *= u(it.row()) * std::conj(u(c));
        return Y;
    }

private:
    int block(int nA, int nB) const {
        if (nA < 0 || nB < 0 || nA > A_.n_max() || nB > B_.n_max()) return -1;
        return block_of_[nA][nB];
    }

    const FockSpace& A_;
    const FockSpace& B_;
    int n_total_;
    int dim_ = 0;
    std::vector<Block> blocks_;
    std::vector<std::vector<int>> block_of_;
    std::vector<int> ia_, ib_, total_;
};

// Sector-blocked dump of an operator: one line per nonzero entry,
// "row_sector,col_sector,row,col,re,im" with row/col local to their sector.
inline std::string sector_blocks_csv(const FockSpace& F, const SpMat& X, double drop = 0.0) {
    if (X.rows() != F.dim() || X.cols() != F.dim()) throw std::invalid_argument("sector_blocks_csv: wrong dimension");
    struct E {
        int rs, cs, r, c;
        cplx v;
    };
    std::vector<E> es;
    for (int k = 0; k < X.outerSize(); ++k)
        for (SpMat::InnerIterator it(X, k); it; ++it) {
            if (std::abs(it.value()) <= drop) continue;
            const int r = static_cast<int>(it.row()), c = static_cast<int>(it.col());
            const int rs = F.particle_number(r), cs = F.particle_number(c);
            es.push_back({rs, cs, r - F.offset(rs), c - F.offset(cs), it.value()});
        }
    std::sort(es.begin(), es.end(), [](const E& a, const E& b) {
        return std::tie(a.rs, a.cs, a.r, a.c) < std::tie(b.rs, b.cs, b.r, b.c);
    });
    std::ostringstream os;
    os << "row_sector,col_sector,row,col,re,im\n" << std::setprecision(17);
    for (const auto& e : es) os << e.rs << "," << e.cs << "," << e.r << "," << e.c << "," << e.v.real() << "," << e.v.imag() << "\n";
    return os.str();
}

}  // namespace wedgelab
