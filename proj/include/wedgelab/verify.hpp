#pragma once

#include "wedgelab/core.hpp"
#include "wedgelab/fock.hpp"
#include "wedgelab/onepspace.hpp"
#include "wedgelab/scatfunc.hpp"
#include "wedgelab/smatrix.hpp"
#include "wedgelab/twist.hpp"

#include <nlohmann/json.hpp>

#include <memory>

namespace wedgelab {

// keep only masked columns, packed to the left
inline SpMat compact_columns(const SpMat& A, const std::vector<char>& mask) {
    std::vector<int> cols;
    for (int c = 0; c < A.cols(); ++c)
        if (mask[c]) cols.push_back(c);
    std::vector<Triplet> t;
    for (std::size_t k = 0; k < cols.size(); ++k)
        for (SpMat::InnerIterator it(A, cols[k]); it; ++it) t.emplace_back(it.row(), static_cast<int>(k), it.value());
    SpMat out(A.rows(), static_cast<Eigen::Index>(cols.size()));
    out.setFromTriplets(t.begin(), t.end());
    return out;
}

inline double norm_on(const SpMat& A, const std::vector<char>& mask) { return op_norm(compact_columns(A, mask)); }

// ---------------------------------------------------------------- charged spaces

// Two charged species per copy: species 0 carries charge +1, species 1 charge -1.
// The real components are psi (+) 0 = (e_+ + e_-)/sqrt2 and 0 (+) psi = (e_+ - e_-)/(sqrt2 i).
inline Vec real_component(int component) {
    const double r = 1.0 / std::sqrt(2.0);
    Vec a(2);
    if (component == 1) {
        a << r, r;
    } else if (component == 2) {
        a << cplx(0.0, -r), cplx(0.0, r);
    } else {
        throw std::invalid_argument("real_component: component must be 1 or 2");
    }
    return a;
}

// phi(f) for the one-particle vector alpha (x) f, alpha a species vector
inline SpMat species_field(const FockSpace& F, const PmTransform& t, const Vec& alpha) {
    if (alpha.size() != F.n_species()) throw std::invalid_argument("species_field: wrong species vector");
    const int d = F.grid().size();
    Vec cp = Vec::Zero(F.one_particle_dim()), cm = cp;
    Vec fp = F.grid().to_coords(t.plus), jm = F.grid().to_coords(Vec(t.minus.conjugate()));
    for (int s = 0; s < F.n_species(); ++s) {
        cp.segment(s * d, d) = alpha(s) * fp;
        cm.segment(s * d, d) = alpha(s) * jm;
    }
    return F.create_coords(cp) + SpMat(F.create_coords(cm).adjoint());
}

inline std::vector<int> charge_labels(const FockSpace& F) {
    return F.additive_labels([&](int a) { return F.species_of(a) == 0 ? 1 : -1; });
}

// two copies of the charged space, truncated jointly
struct TwinSpace {
    FockSpace A, B;
    std::unique_ptr<ProductFockSpace> P;
    std::vector<int> qA, qB;

    TwinSpace(const RapidityGrid& grid, int n_species, int n_max)
        : A(grid, n_species, n_max), B(grid, n_species, n_max) {
        P = std::make_unique<ProductFockSpace>(A, B, n_max);
        if (n_species == 2) {
            qA = charge_labels(A);
            qB = charge_labels(B);
        }
    }
    TwinSpace(const TwinSpace&) = delete;
    TwinSpace& operator=(const TwinSpace&) = delete;

    // V~ = exp(i 2 pi kappa Q (x) Q) as a diagonal
    Vec federbush_twist(double kappa) const {
        if (qA.empty()) throw std::logic_error("federbush_twist: space carries no charge");
        return P->diagonal([&](int ia, int ib) { return expi(2.0 * pi * kappa * qA[ia] * qB[ib]); });
    }
};

// ---------------------------------------------------------------- Federbush ZF

struct ZFPhase {
    std::string x, y;  // e.g. "a+*(psi1)", "a-(psi2)"
    int label_x = 0, label_y = 0;
    cplx expected, measured, smatrix_entry;
    double residual = 0.0;
};

// residuals are Frobenius norms on the subspace, an upper bound for the operator norm
struct FederbushZFReport {
    double kappa = 0.0;
    std::vector<ZFPhase> twisted;
    double twisted_residual = 0.0;
    double untwisted_residual = 0.0;
    double phase_deviation = 0.0;
    double smatrix_deviation = 0.0;
    double tol = 0.0;
    bool pass = false;
};

inline int federbush_index(int copy, int sigma) { return 2 * (copy - 1) + (sigma > 0 ? 0 : 1); }

// x (x) 1 and Ad V~(1 (x) y) for charged creators/annihilators, checked on
// the subspace n <= n_max - 2
inline FederbushZFReport zf_relations_federbush(const TwinSpace& S, double kappa, const Vec& psi1, const Vec& psi2,
                                                double tol) {
    const ProductFockSpace& P = *S.P;
    const int cap = P.n_total() - 2;
    // two annihilators need two particles below the cap, or the pair is identically zero
    if (cap < 2) throw std::invalid_argument("zf_relations_federbush: need n_max >= 4");
    const auto mask = P.mask_upto(cap);
    const Vec u = S.federbush_twist(kappa);
    TwoParticleSMatrix Sm = federbush_smatrix(kappa);
    const Mat Sk = Sm(0.0);

    struct Op {
        std::string name;
        int label;
        SpMat full, low;
    };
    auto ops_on = [&](const FockSpace& F, const Vec& psi, const std::string& tag, bool left) {
        std::vector<Op> out;
        for (int sigma : {1, -1}) {
            const int sp = sigma > 0 ? 0 : 1;
            SpMat c = F.create(psi, sp);
            SpMat a = SpMat(c.adjoint());
            std::string s = sigma > 0 ? "+" : "-";
            for (int dag = 1; dag >= 0; --dag) {
                const SpMat& one = dag ? c : a;
                Op o;
                o.name = std::string("a") + s + (dag ? "*" : "") + "(" + tag + ")";
                o.label = dag ? sigma : -sigma;
                o.full = left ? P.left(one, cap + 1) : ProductFockSpace::conjugate_by_diagonal(u, P.right(one, cap + 1));
                o.low = compact_columns(o.full, mask);
                out.push_back(std::move(o));
            }
        }
        return out;
    };
    std::vector<Op> X = ops_on(S.A, psi1, "psi1", true);
    std::vector<Op> Y = ops_on(S.B, psi2, "psi2", false);

    FederbushZFReport r;
    r.kappa = kappa;
    r.tol = tol;
    for (const auto& x : X)
        for (const auto& y : Y) {
            SpMat xy = x.full * y.low, yx = y.full * x.low;
            ZFPhase ph;
            ph.x = x.name;
            ph.y = y.name;
            ph.label_x = x.label;
            ph.label_y = y.label;
            ph.expected = expi(-2.0 * pi * kappa * x.label * y.label);
            const int i = federbush_index(2, y.label), j = federbush_index(1, x.label);
            ph.smatrix_entry = Sk(4 * i + j, 4 * j + i);
            const double den = yx.squaredNorm();
            const cplx num = SpMat(yx.conjugate().cwiseProduct(xy)).sum();
            ph.residual = SpMat(xy - ph.expected * yx).norm();
            r.twisted_residual = std::max(r.twisted_residual, ph.residual);
            if (den > 0.0) {
                ph.measured = num / den;
                r.phase_deviation = std::max(r.phase_deviation, std::abs(ph.measured - ph.expected));
                r.smatrix_deviation = std::max(r.smatrix_deviation, std::abs(ph.measured - ph.smatrix_entry));
            } else {
                // psi vanishing on the grid: no phase to read off
                ph.measured = cplx(std::nan(""), 0.0);
                r.phase_deviation = r.smatrix_deviation = std::numeric_limits<double>::infinity();
            }
            r.twisted.push_back(std::move(ph));
        }
    // within one copy the charged fields obey the plain CCR
    const SpMat id_low = compact_columns(speye(P.dim()), mask);
    auto ccr = [&](const std::vector<Op>& ops, const std::vector<Op>& ops2, const Vec& f, const Vec& g,
                   const RapidityGrid& grid) {
        double worst = 0.0;
        for (const auto& x : ops)
            for (const auto& y : ops2) {
                SpMat c = SpMat(x.full * y.low) - SpMat(y.full * x.low);
                cplx scalar = 0.0;
                const bool xa = x.name.find('*') == std::string::npos, ya = y.name.find('*') == std::string::npos;
                if (x.label == -y.label && xa != ya) {
                    // [a(f), a*(g)] = <f, g>;  [a*(f), a(g)] = -<g, f>
                    scalar = xa ? grid.inner(f, g) : -grid.inner(g, f);
                }
                worst = std::max(worst, SpMat(c - scalar * id_low).norm());
            }
        return worst;
    };
    std::vector<Op> X2 = ops_on(S.A, psi2, "psi2", true);
    std::vector<Op> Y1 = ops_on(S.B, psi1, "psi1", false);
    r.untwisted_residual = std::max(ccr(X, X2, psi1, psi2, S.A.grid()), ccr(Y1, Y, psi1, psi2, S.B.grid()));
    r.pass = r.twisted_residual <= tol && r.untwisted_residual <= tol && r.smatrix_deviation <= tol &&
             r.phase_deviation <= tol;
    return r;
}

inline nlohmann::json to_json(const FederbushZFReport& r) {
    nlohmann::json ph = nlohmann::json::array();
    for (const auto& p : r.twisted)
        ph.push_back({{"x", p.x},
                      {"y", p.y},
                      {"expected", format_complex(p.expected)},
                      {"measured", format_complex(p.measured)},
                      {"smatrix_entry", format_complex(p.smatrix_entry)},
                      {"residual", p.residual}});
    return {{"kappa", r.kappa},
            {"phases", ph},
            {"twisted_residual", r.twisted_residual},
            {"untwisted_residual", r.untwisted_residual},
            {"phase_deviation", r.phase_deviation},
            {"smatrix_deviation", r.smatrix_deviation},
            {"tol", r.tol},
            {"pass", r.pass}};
}

// ---------------------------------------------------------------- Longo-Witten ZF

// The twist is built from chi = reflected(phi); then
// a*(theta) (x) 1 . Ad R~(1 (x) a*(theta')) = phi(e^{theta' - theta}) Ad R~(1 (x) a*(theta')) . a*(theta) (x) 1.
inline cplx lw_exchange_factor(const ScatteringFunction& chi, double theta, double theta2) {
    return std::conj(chi(std::exp(theta2 - theta)));
}

struct LWPair {
    int i = 0, j = 0;
    double theta = 0.0, theta2 = 0.0;
    cplx expected, measured;
    double residual = 0.0;
};

struct LWZFReport {
    std::vector<LWPair> pairs;
    double max_residual = 0.0;
    double max_factor_deviation = 0.0;
    double smeared_residual = -1.0;  // < 0 when not evaluated
    double tol = 0.0;
    bool pass = false;
};

inline cplx ratio_fit(const SpMat& num, const SpMat& den) {
    const double d = den.squaredNorm();
    return d > 0.0 ? SpMat(den.conjugate().cwiseProduct(num)).sum() / d : cplx(std::nan(""), 0.0);
}

// pointwise relation for every grid pair, plus a smeared version with (fplus, gplus)
inline LWZFReport zf_relation_longo_witten(const TwinSpace& S, const ScatteringFunction& chi,
                                           const std::function<cplx(double, double)>& expected, double tol,
                                           const Vec* fplus = nullptr, const Vec* gplus = nullptr) {
    const ProductFockSpace& P = *S.P;
    const int cap = P.n_total() - 2;
    if (cap < 0) throw std::invalid_argument("zf_relation_longo_witten: need n_max >= 2");
    if (S.A.n_species() != 1) throw std::invalid_argument("zf_relation_longo_witten: single species expected");
    const auto mask = P.mask_upto(cap);
    const Vec R = build_R_tilde(chi, P);
    const int d = S.A.one_particle_dim();
    const RapidityGrid& grid = S.A.grid();
    std::vector<SpMat> Xf(d), Xl(d), Yf(d), Yl(d);
    for (int a = 0; a < d; ++a) {
        Xf[a] = P.left(S.A.create_basis(a), cap + 1);
        Xl[a] = compact_columns(Xf[a], mask);
        Yf[a] = ProductFockSpace::conjugate_by_diagonal(R, P.right(S.B.create_basis(a), cap + 1));
        Yl[a] = compact_columns(Yf[a], mask);
    }
    LWZFReport r;
    r.tol = tol;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            SpMat xy = Xf[i] * Yl[j], yx = Yf[j] * Xl[i];
            LWPair p;
            p.i = i;
            p.j = j;
            p.theta = grid.theta[i];
            p.theta2 = grid.theta[j];
            p.expected = expected(p.theta, p.theta2);
            p.measured = ratio_fit(xy, yx);
            p.residual = max_abs(SpMat(xy - p.expected * yx));
            r.max_residual = std::max(r.max_residual, p.residual);
            r.max_factor_deviation = std::max(r.max_factor_deviation, std::abs(p.measured - p.expected));
            r.pairs.push_back(p);
        }
    if (fplus && gplus) {
        Vec cf = grid.to_coords(*fplus), cg = grid.to_coords(*gplus);
        SpMat X = P.left(S.A.create_coords(cf), cap + 1);
        SpMat Y = ProductFockSpace::conjugate_by_diagonal(R, P.right(S.B.create_coords(cg), cap + 1));
        SpMat lhs = X * compact_columns(Y, mask);
        SpMat rhs(lhs.rows(), lhs.cols());
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                cplx c = cf(i) * cg(j) * expected(grid.theta[i], grid.theta[j]);
                if (c != cplx(0.0)) rhs += c * SpMat(Yf[j] * Xl[i]);
            }
        const double scale = std::max(1e-300, max_abs(lhs));
        r.smeared_residual = max_abs(SpMat(lhs - rhs)) / scale;
    }
    r.pass = r.max_residual <= tol && r.max_factor_deviation <= tol && (r.smeared_residual < 0 || r.smeared_residual <= tol);
    return r;
}

inline nlohmann::json to_json(const LWZFReport& r) {
    return {{"pairs", static_cast<int>(r.pairs.size())},
            {"max_residual", r.max_residual},
            {"max_factor_deviation", r.max_factor_deviation},
            {"smeared_residual", r.smeared_residual},
            {"tol", r.tol},
            {"pass", r.pass}};
}

// ---------------------------------------------------------------- locality

enum class TwistKind { None, Federbush, LongoWitten };

inline std::string to_string(TwistKind k) {
    switch (k) {
        case TwistKind::None: return "none";
        case TwistKind::Federbush: return "federbush";
        case TwistKind::LongoWitten: return "longo-witten";
    }
    return "?";
}

struct LocalitySetup {
    TwistKind twist = TwistKind::None;
    double kappa = 0.0;                     // Federbush
    std::optional<ScatteringFunction> chi;  // Longo-Witten twist function
    double theta_half_width = 3.0;
    double mass = 1.0;
    int n_max = 2;
    std::vector<int> resolutions = {16, 32, 64};
    int reference_resolution = 32;
    double tol = 1e-6;  // relative to |x| |x'|
    bool require_spacelike = true;
    double wedge_margin = 0.0;
    double roundoff_floor = 1e-14;  // relative level treated as exact zero
};

struct LocalityPoint {
    int n_points = 0;
    double commutator_norm = 0.0;
    double norm_x = 0.0, norm_y = 0.0;
    double relative = 0.0;
    cplx vacuum_scalar;         // <Omega, [x, x'] Omega>
    cplx contraction;           // sum w (f^- g^+ - g^- f^+) from the transforms
    double scalar_deviation = 0.0;  // free only: |[x, x'] - c 1| on the subspace
};

struct LocalityReport {
    std::string twist;
    std::string f_desc, g_desc;
    std::vector<LocalityPoint> series;  // increasing resolution
    double tol = 0.0;
    int reference_resolution = 0;
    bool below_tol_at_reference = false;
    bool monotone = false;
    double min_refinement_ratio = 0.0;
    bool pass = false;
};

// signed distance of the support from the wedge boundary (positive inside)
inline double wedge_depth(const TestFunction& f, int side) {
    const auto& p = f.params;
    if (f.family == "bump" && p.count("c0") && p.count("c1") && p.count("radius")) {
        const double c0 = p.at("c0"), c1 = p.at("c1"), R = p.at("radius");
        const double s = side > 0 ? c1 : -c1;
        return (s - std::abs(c0)) / std::sqrt(2.0) - R;
    }
    const auto& b = f.support;
    const double e = std::max(std::abs(b.a0_min), std::abs(b.a0_max));
    return side > 0 ? (b.a1_min - e) / std::sqrt(2.0) : (-b.a1_max - e) / std::sqrt(2.0);
}

inline std::string describe(const TestFunction& f) {
    std::ostringstream os;
    os << f.family;
    for (const auto& [k, v] : f.params) os << " " << k << "=" << v;
    return os.str();
}

inline LocalityPoint locality_point(const LocalitySetup& s, const TestFunction& f, const TestFunction& g, int n) {
    RapidityGrid grid = make_grid(s.theta_half_width, n, s.mass);
    PmTransform tf = pm_transform(f, grid), tg = pm_transform(g, grid);
    LocalityPoint pt;
    pt.n_points = n;
    cplx c = 0.0;
    for (int i = 0; i < n; ++i)
        c += grid.weights[i] * (tf.minus(i) * tg.plus(i) - tg.minus(i) * tf.plus(i));
    pt.contraction = c;
    const int cap = s.n_max - 1;
    if (s.twist == TwistKind::None) {
        FockSpace F(grid, 1, s.n_max);
        SpMat x = F.field(tf), y = F.field(tg);
        auto mask = F.mask_upto(cap);
        SpMat C = SpMat(x * y) - SpMat(y * x);
        SpMat Cl = compact_columns(C, mask);
        pt.vacuum_scalar = Mat(Cl)(0, 0);
        pt.commutator_norm = op_norm(Cl);
        pt.scalar_deviation = op_norm(SpMat(Cl - compact_columns(SpMat(pt.vacuum_scalar * speye(C.rows())), mask)));
        pt.norm_x = norm_on(x, mask);
        pt.norm_y = norm_on(y, mask);
    } else {
        const bool fed = s.twist == TwistKind::Federbush;
        TwinSpace T(grid, fed ? 2 : 1, s.n_max);
        const ProductFockSpace& P = *T.P;
        Vec u;
        if (fed) {
            u = T.federbush_twist(s.kappa);
        } else {
            if (!s.chi) throw std::invalid_argument("locality: twist function missing");
            u = build_R_tilde(*s.chi, P);
        }
        SpMat fx, fy;
        if (fed) {
            Vec al = real_component(1);
            fx = species_field(T.A, tf, al);
            fy = species_field(T.A, tg, al);
        } else {
            fx = T.A.field(tf);
            fy = T.A.field(tg);
        }
        SpMat X = P.left(fx, cap + 1);
        SpMat Y = ProductFockSpace::conjugate_by_diagonal(u, P.left(fy, cap + 1));
        auto mask = P.mask_upto(cap);
        SpMat C = SpMat(X * compact_columns(Y, mask)) - SpMat(Y * compact_columns(X, mask));
        pt.vacuum_scalar = Mat(C.col(0))(0, 0);
        pt.commutator_norm = op_norm(C);
        pt.norm_x = norm_on(X, mask);
        pt.norm_y = norm_on(Y, mask);
    }
    pt.relative = pt.commutator_norm / std::max(1e-300, pt.norm_x * pt.norm_y);
    return pt;
}

// [x (x) 1, Ad twist(x' (x) 1)] with x = phi(f), x' = phi(g), over a refinement series
inline LocalityReport wedge_commutativity(const LocalitySetup& s, const TestFunction& f, const TestFunction& g) {
    if (s.require_spacelike) {
        if (wedge_depth(f, +1) <= s.wedge_margin || wedge_depth(g, -1) <= s.wedge_margin)
            throw std::invalid_argument("wedge_commutativity: supports are not spacelike separated (f in W_R, g in W_L)");
    }
    std::vector<int> res = s.resolutions;
    std::sort(res.begin(), res.end());
    LocalityReport r;
    r.twist = to_string(s.twist);
    r.f_desc = describe(f);
    r.g_desc = describe(g);
    r.tol = s.tol;
    r.reference_resolution = s.reference_resolution;
    for (int n : res) r.series.push_back(locality_point(s, f, g, n));
    r.monotone = true;
    r.min_refinement_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < r.series.size(); ++k) {
        const double a = r.series[k - 1].commutator_norm, b = r.series[k].commutator_norm;
        // both at round-off: nothing left to decrease
        const bool converged = r.series[k - 1].relative <= s.roundoff_floor && r.series[k].relative <= s.roundoff_floor;
        if (!(b < a) && !converged) r.monotone = false;
        r.min_refinement_ratio = std::min(r.min_refinement_ratio, b > 0.0 ? a / b : std::numeric_limits<double>::infinity());
    }
    r.below_tol_at_reference = false;
    bool found = false;
    for (const auto& p : r.series)
        if (p.n_points == s.reference_resolution) {
            found = true;
            r.below_tol_at_reference = p.relative <= s.tol;
        }
    if (!found && !r.series.empty()) r.below_tol_at_reference = r.series.back().relative <= s.tol;
    r.pass = r.below_tol_at_reference && r.monotone;
    return r;
}

inline nlohmann::json to_json(const LocalityReport& r) {
    nlohmann::json s = nlohmann::json::array();
    for (const auto& p : r.series)
        s.push_back({{"n_points", p.n_points},
                     {"commutator_norm", p.commutator_norm},
                     {"relative", p.relative},
                     {"norm_x", p.norm_x},
                     {"norm_y", p.norm_y},
                     {"vacuum_scalar", format_complex(p.vacuum_scalar)},
                     {"contraction", format_complex(p.contraction)},
                     {"scalar_deviation", p.scalar_deviation}});
    return {{"twist", r.twist},
            {"f", r.f_desc},
            {"g", r.g_desc},
            {"series", s},
            {"tol", r.tol},
            {"reference_resolution", r.reference_resolution},
            {"below_tol_at_reference", r.below_tol_at_reference},
            {"monotone", r.monotone},
            {"min_refinement_ratio", std::isfinite(r.min_refinement_ratio) ? nlohmann::json(r.min_refinement_ratio)
                                                                           : nlohmann::json(nullptr)},
            {"pass", r.pass}};
}

inline std::string locality_csv(const LocalityReport& r) {
    std::ostringstream os;
    os << std::setprecision(17) << "n_points,commutator_norm,relative,norm_x,norm_y,scalar_abs,contraction_abs\n";
    for (const auto& p : r.series)
        os << p.n_points << "," << p.commutator_norm << "," << p.relative << "," << p.norm_x << "," << p.norm_y << ","
           << std::abs(p.vacuum_scalar) << "," << std::abs(p.contraction) << "\n";
    return os.str();
}

// ---------------------------------------------------------------- spectrum

struct SpectrumReport {
    long states = 0;
    long violations = 0;
    long first_violation = -1;
    double min_margin = std::numeric_limits<double>::infinity();  // min (p0 - |p1|) over non-vacuum states
    bool pass = false;
};

inline SpectrumReport spectrum_condition(const std::vector<std::pair<double, double>>& momenta) {
    SpectrumReport r;
    r.states = static_cast<long>(momenta.size());
    for (std::size_t i = 0; i < momenta.size(); ++i) {
        const auto [p0, p1] = momenta[i];
        const double m = p0 - std::abs(p1);
        if (!(m >= 0.0)) {
            ++r.violations;
            if (r.first_violation < 0) r.first_violation = static_cast<long>(i);
        }
        if (p0 != 0.0 || p1 != 0.0) r.min_margin = std::min(r.min_margin, m);
    }
    r.pass = r.violations == 0;
    return r;
}

inline SpectrumReport spectrum_condition(const FockSpace& F) { return spectrum_condition(F.momenta()); }

inline SpectrumReport spectrum_condition(const ProductFockSpace& P) {
    auto ma = P.left_space().momenta(), mb = P.right_space().momenta();
    std::vector<std::pair<double, double>> m(P.dim());
    for (int g = 0; g < P.dim(); ++g) {
        const auto& a = ma[P.left_index(g)];
        const auto& b = mb[P.right_index(g)];
        m[g] = {a.first + b.first, a.second + b.second};
    }
    return spectrum_condition(m);
}

inline nlohmann::json to_json(const SpectrumReport& r) {
    return {{"states", r.states},
            {"violations", r.violations},
            {"first_violation", r.first_violation},
            {"min_margin", std::isfinite(r.min_margin) ? nlohmann::json(r.min_margin) : nlohmann::json(nullptr)},
            {"pass", r.pass}};
}

// ---------------------------------------------------------------- cyclicity

struct CyclicityReport {
    int rank = 0;
    int target_dim = 0;
    int deficiency = 0;
    int degree = 0;
    int words_applied = 0;
    int independent_words = -1;   // operator rank of the words, when computed
    int separating_rank = -1;     // rank of those words applied to the vector
    bool pass = false;
};

// span of words in the generators applied to omega, restricted to the masked subspace
inline CyclicityReport cyclicity_rank(const std::vector<SpMat>& gens, const Vec& omega, const std::vector<char>& mask,
                                      int degree_bound, double tol = 1e-10, bool check_separation = false) {
    CyclicityReport r;
    std::vector<int> idx;
    for (std::size_t i = 0; i < mask.size(); ++i)
        if (mask[i]) idx.push_back(static_cast<int>(i));
    r.target_dim = static_cast<int>(idx.size());
    auto restrict = [&](const Vec& v) {
        Vec o(idx.size());
        for (std::size_t k = 0; k < idx.size(); ++k) o(k) = v(idx[k]);
        return o;
    };
    // orthonormal columns of Q, projections as two gemv passes
    const Eigen::Index m = static_cast<Eigen::Index>(idx.size());
    Mat Q(m, std::min<Eigen::Index>(m, 64));
    int k = 0;
    auto add = [&](const Vec& full) {
        if (k == m) return false;
        Vec v = restrict(full);
        const double nv = v.norm();
        if (nv == 0.0) return false;
        for (int pass = 0; pass < 2 && k > 0; ++pass) v -= Q.leftCols(k) * (Q.leftCols(k).adjoint() * v);
        if (v.norm() <= tol * nv) return false;
        if (k == Q.cols()) Q.conservativeResize(Eigen::NoChange, std::min<Eigen::Index>(m, 2 * Q.cols()));
        Q.col(k++) = v / v.norm();
        return true;
    };
    // grow with words applied to the vector; fresh vectors only feed the next degree
    std::vector<Vec> fresh;
    if (add(omega)) fresh.push_back(omega);
    int deg = 0;
    while (!fresh.empty() && deg < degree_bound && k < r.target_dim) {
        ++deg;
        std::vector<Vec> next;
        for (const auto& g : gens)
            for (const auto& v : fresh) {
                if (k == r.target_dim) break;
                Vec w = g * v;
                ++r.words_applied;
                if (add(w)) next.push_back(w);
            }
        fresh = std::move(next);
    }
    r.degree = deg;
    r.rank = k;
    r.deficiency = r.target_dim - r.rank;
    r.pass = r.deficiency == 0;
    if (check_separation) {
        // words up to the same degree as operators; x -> x omega injective on their span?
        std::vector<SpMat> words = {speye(omega.size())};
        std::vector<SpMat> layer = words;
        for (int k = 0; k < deg; ++k) {
            std::vector<SpMat> nl;
            for (const auto& g : gens)
                for (const auto& w : layer) nl.push_back(SpMat(g * w));
            words.insert(words.end(), nl.begin(), nl.end());
            layer = std::move(nl);
        }
        std::vector<Vec> ob, vb;
        auto add_to = [&](std::vector<Vec>& B, Vec v) {
            const double nv = v.norm();
            if (nv == 0.0) return;
            for (int pass = 0; pass < 2; ++pass)
                for (const auto& b : B) v -= b.dot(v) * b;
            if (v.norm() > tol * nv) B.push_back(v / v.norm());
        };
        for (const auto& w : words) {
            Mat dw = Mat(w);
            add_to(ob, Eigen::Map<Vec>(dw.data(), dw.size()));
            add_to(vb, Vec(w * omega));
        }
        r.independent_words = static_cast<int>(ob.size());
        r.separating_rank = static_cast<int>(vb.size());
    }
    return r;
}

inline nlohmann::json to_json(const CyclicityReport& r) {
    nlohmann::json j = {{"rank", r.rank},
                        {"target_dim", r.target_dim},
                        {"deficiency", r.deficiency},
                        {"degree", r.degree},
                        {"words_applied", r.words_applied},
                        {"pass", r.pass}};
    if (r.independent_words >= 0) {
        j["independent_words"] = r.independent_words;
        j["separating_rank"] = r.separating_rank;
    }
    return j;
}

// ---------------------------------------------------------------- S2 exchange

struct ExchangeReport {
    double projector_hermitian = 0.0, projector_idempotent = 0.0;
    double exchange = 0.0;  // max |z*(t')z*(t)Omega - S2(t'-t) z*(t)z*(t')Omega|
    int pairs = 0;
    int sector_rank = 0;
    bool pass(double tol) const { return std::max({projector_hermitian, projector_idempotent, exchange}) <= tol; }
};

inline ExchangeReport s2_fock_exchange(const FockSpace& F) {
    if (!F.s2()) throw std::invalid_argument("s2_fock_exchange: space has no scattering function");
    if (F.n_max() < 2) throw std::invalid_argument("s2_fock_exchange: need n_max >= 2");
    ExchangeReport r;
    r.projector_hermitian = F.audit(2).hermitian;
    r.projector_idempotent = F.audit(2).idempotent;
    r.sector_rank = F.sector_dim(2);
    const Vec om = F.vacuum();
    const auto& S2 = *F.s2();
    const int d = F.grid().size();
    for (int s = 0; s < F.n_species(); ++s)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                const int a = F.alpha(s, i), b = F.alpha(s, j);
                Vec lhs = F.create_basis(b) * (F.create_basis(a) * om);  // z*(t_j) z*(t_i) Omega
                Vec rhs = F.create_basis(a) * (F.create_basis(b) * om);
                const cplx ph = S2(F.grid().theta[j] - F.grid().theta[i]);
                r.exchange = std::max(r.exchange, (lhs - ph * rhs).cwiseAbs().maxCoeff());
                ++r.pairs;
            }
    return r;
}

inline nlohmann::json to_json(const ExchangeReport& r) {
    return {{"projector_hermitian", r.projector_hermitian},
            {"projector_idempotent", r.projector_idempotent},
            {"exchange", r.exchange},
            {"pairs", r.pairs},
            {"sector_rank", r.sector_rank}};
}

}  // namespace wedgelab
