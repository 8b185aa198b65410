#include "oracles.hpp"
#include "wedgelab/experiment.hpp"
#include "wedgelab/modular.hpp"

#include <gtest/gtest.h>

using namespace wedgelab;

namespace {

std::vector<double> random_weights(std::mt19937_64& rng, int n) {
    std::vector<double> l(n);
    for (auto& x : l) x = oracle::uniform(rng, 0.05, 1.0);
    return l;
}

double closure_defect(const FiniteAlgebra& A) {
    double worst = 0.0;
    for (const auto& a : A.basis) {
        worst = std::max(worst, A.residual(a.adjoint()));
        for (const auto& b : A.basis) worst = std::max(worst, A.residual(Mat(a * b)));
    }
    return worst;
}

}  // namespace

// ---------------------------------------------------------------- closure

TEST(Closure, FullMatrixAlgebra) {
    for (int n : {1, 2, 3, 4}) {
        FiniteAlgebra A = algebra_closure(full_matrix_generators(n));
        EXPECT_EQ(A.dim(), n * n);
        EXPECT_TRUE(A.stabilized);
        EXPECT_LE(closure_defect(A), 1e-10);
    }
}

TEST(Closure, DiagonalGeneratorsStayAbelian) {
    Mat d = Mat::Zero(3, 3);
    d.diagonal() << 1.0, 2.0, 2.0;
    FiniteAlgebra A = algebra_closure({d});
    EXPECT_EQ(A.dim(), 2);  // spanned by two spectral projections
    EXPECT_LE(closure_defect(A), 1e-10);
}

TEST(Closure, SpanResidual) {
    SpanBuilder sb;
    EXPECT_TRUE(sb.add(Mat::Identity(2, 2)));
    EXPECT_FALSE(sb.add(Mat(3.0 * Mat::Identity(2, 2))));
    Mat x = Mat::Zero(2, 2);
    x(0, 1) = 1.0;
    EXPECT_NEAR(sb.residual(x), 1.0, 1e-15);
    EXPECT_TRUE(sb.add(x));
    EXPECT_NEAR(sb.residual(Mat(x + 2.0 * Mat::Identity(2, 2))), 0.0, 1e-15);
    EXPECT_THROW(sb.add(Mat::Identity(3, 3)), std::invalid_argument);
}

// ---------------------------------------------------------------- modular data

TEST(Modular, MatrixAlgebraAgainstClosedForm) {
    oracle::for_seeds(12, 30, [](std::mt19937_64& rng, int) {
        const int n = 2 + static_cast<int>(rng() % 3);
        auto lambda = random_weights(rng, n);
        ModularToy toy = make_modular_toy(n, 2, 1, lambda, std::vector<int>(n, 0));
        ModularData md = modular_from_vector(toy.M, toy.Omega);
        EXPECT_LE(max_abs(Mat(md.Delta - oracle::matrix_modular_delta(lambda))), 1e-10);
        EXPECT_LE(max_abs(Mat(md.J - oracle::flip(n))), 1e-10);
        EXPECT_LE(md.max_deviation(), 1e-10);
        EXPECT_LE(md.delta_fixes_omega, 1e-12);
        EXPECT_LE(md.j_fixes_omega, 1e-12);
        EXPECT_LE(md.j_squared, 1e-12);
        Eigen::SelfAdjointEigenSolver<Mat> es(md.Delta);
        EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
    });
}

TEST(Modular, PolarDecompositionOnRandomElements) {
    std::mt19937_64 rng(31);
    ModularToy toy = make_modular_toy(3, 3, 1, {0.5, 0.3, 0.2}, {0, 1, 2});
    ModularData md = modular_from_vector(toy.M, toy.Omega);
    Mat Dh = hermitian_power(md.Delta, 0.5);
    for (int s = 0; s < 10; ++s) {
        Mat x = Mat::Zero(9, 9);
        for (const auto& b : toy.M.basis) x += cplx(oracle::uniform(rng, -1, 1), oracle::uniform(rng, -1, 1)) * b;
        // J Delta^{1/2} x Omega = x* Omega
        Vec lhs = md.J * (Dh * x * toy.Omega).conjugate();
        EXPECT_NEAR((lhs - x.adjoint() * toy.Omega).norm(), 0.0, 1e-12);
    }
}

TEST(Modular, RejectsBadVectors) {
    ModularToy toy = make_modular_toy(2, 2, 1, {0.5, 0.5}, {0, 1});
    Vec product = Vec::Zero(4);
    product(0) = 1.0;  // e_0 (x) e_0 is neither cyclic nor separating
    EXPECT_THROW(modular_from_vector(toy.M, product), std::runtime_error);
    EXPECT_THROW(modular_from_vector(toy.M, Vec::Ones(3)), std::invalid_argument);
    EXPECT_THROW(make_modular_toy(2, 2, 1, {1.0, -1.0}, {0, 1}), std::invalid_argument);
}

TEST(Modular, CommutantBothPaths) {
    ModularToy toy = make_modular_toy(3, 3, 1, {0.5, 0.3, 0.2}, {0, 1, 2});
    FiniteAlgebra dense = commutant(toy.M);
    FiniteAlgebra viaVector = commutant(toy.M, &toy.Omega);
    EXPECT_EQ(dense.dim(), 9);
    EXPECT_TRUE(compare_spans(dense, viaVector).equal(1e-10));
    // M' = 1 (x) M_3
    const Mat I3 = Mat::Identity(3, 3);
    for (const auto& y : algebra_closure(full_matrix_generators(3)).basis) EXPECT_LE(dense.residual(kron(I3, y)), 1e-10);
}

TEST(Modular, CyclicVectorCommutantOnLargeSpace) {
    ModularToy toy = make_modular_toy(3, 3, 1, {0.5, 0.3, 0.2}, {0, 1, 2});
    FiniteAlgebra Mt = twisted_wedge_algebra(toy.M, toy.grading, toy.kappa());
    EXPECT_EQ(Mt.space_dim, 81);
    EXPECT_EQ(Mt.dim(), 81);
    Vec Om2 = Eigen::kroneckerProduct(toy.Omega, toy.Omega).eval();
    FiniteAlgebra C = commutant(Mt, &Om2);
    EXPECT_EQ(C.dim(), 81);  // a factor M_9 on C^81 has commutant M_9
    for (const auto& z : C.basis)
        for (const auto& g : Mt.generators) EXPECT_LE(max_abs(Mat(z * g - g * z)), 1e-10);
}

// ---------------------------------------------------------------- twisted propositions

TEST(Twisted, ModularOperatorIsProduct) {
    oracle::for_seeds(6, 32, [](std::mt19937_64& rng, int s) {
        const int n = 2 + (s % 2), N = 2 + static_cast<int>(rng() % 2);
        std::vector<int> q(n);
        for (int i = 0; i < n; ++i) q[i] = static_cast<int>(rng() % N);
        q[0] = 0;
        q[1] = 1;  // keep the grading nontrivial
        ModularToy toy = make_modular_toy(n, N, 1 + static_cast<int>(rng() % (N - 1)), random_weights(rng, n), q);
        auto r = verify_modular_twisted(toy, rng);
        EXPECT_LE(r.delta_deviation, 1e-10);
        EXPECT_LE(r.j_deviation, 1e-10);
        EXPECT_LE(r.kms_deviation, 1e-10);
        EXPECT_LE(r.modular_audit, 1e-10);
    });
}

TEST(Twisted, CommutantFormula) {
    for (auto [n, N] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {3, 2}}) {
        std::vector<int> q(n);
        for (int i = 0; i < n; ++i) q[i] = i % N;
        ModularToy toy = make_modular_toy(n, N, 1, std::vector<double>(n == 2 ? std::vector<double>{0.7, 0.3}
                                                                               : std::vector<double>{0.6, 0.3, 0.1}),
                                          q);
        auto r = verify_commutant_twisted(toy);
        EXPECT_TRUE(r.comparison.equal(1e-10)) << n << " " << N;
        EXPECT_EQ(r.dim_commutant, n * n * n * n);  // M_{n^2} acting on C^{n^4}
    }
}

TEST(Twisted, GradingMustPreserveAlgebra) {
    // a grading with labels (0, 1) on C^2 (x) C^2 that does not respect M_2 (x) 1
    FiniteAlgebra M = algebra_closure({kron(full_matrix_generators(2)[0], Mat::Identity(2, 2))});
    auto g = diagonal_grading({0, 1, 0, 0}, GroupKind::Cyclic, 2);
    EXPECT_THROW(twisted_wedge_algebra(M, g, 0.5), std::invalid_argument);
}

TEST(Twisted, CommutativityLemma) {
    for (int n : {2, 3})
        for (int N : {2, 3}) {
            std::vector<int> q(n);
            for (int i = 0; i < n; ++i) q[i] = i % N;
            ModularToy toy = make_modular_toy(n, N, 1, std::vector<double>(n, 1.0), q);
            EXPECT_LE(commutativity_lemma_residual(toy), 1e-12);
        }
}

TEST(Twisted, TauBound) {
    for (int N : {2, 3}) {
        std::mt19937_64 rng(33 + N);
        ModularToy toy = make_modular_toy(2, N, 1, {0.8, 0.2}, {0, 1});
        auto r = tau_bound(toy, rng, 30);
        EXPECT_LE(r.max_ratio, r.bound);
        EXPECT_EQ(r.bound, N * N);
        EXPECT_LE(r.vector_deviation, 1e-12);
        EXPECT_LE(r.membership, 1e-8);
        EXPECT_LE(r.reconstruction, 1e-12);
    }
}

TEST(Twisted, FactorWithMinimalProjection) {
    for (int n : {2, 3})
        for (int N : {2, 3}) {
            std::vector<int> labels(n);
            for (int i = 0; i < n; ++i) labels[i] = i % N;
            auto g = diagonal_grading(labels, GroupKind::Cyclic, N);
            auto rep = factor_and_minimal_projection(algebra_closure(full_matrix_generators(n)), g, 1.0 / N);
            EXPECT_TRUE(rep.factor()) << n << " " << N << " center " << rep.center_dim;
            EXPECT_TRUE(rep.minimal());
            EXPECT_LE(rep.p_in_fixed_points, 1e-10);
            EXPECT_LE(rep.pp_in_twisted, 1e-10);
            EXPECT_LE(rep.fixed_point_invariance, 1e-12);
        }
}

TEST(Twisted, NonMinimalProjectionIsDetected) {
    FiniteAlgebra R = algebra_closure(full_matrix_generators(3));
    // the projection onto two basis vectors is not minimal
    Mat p = Mat::Zero(3, 3);
    p(0, 0) = p(1, 1) = 1.0;
    EXPECT_GT(corner_dimension(R, p), 1);
    Mat e = Mat::Zero(3, 3);
    e(2, 2) = 1.0;
    EXPECT_EQ(corner_dimension(R, e), 1);
}

// ---------------------------------------------------------------- experiment configs

namespace {

ExperimentConfig parse(const std::string& text) { return parse_config(toml::parse(text)); }

}  // namespace

TEST(Config, ParsesAllModels) {
    auto c = parse(R"(
seed = 42
checks = ["type-i-factor"]
[model]
kind = "modular-toy"
n = 3
N = 3
lambda = [0.5, 0.3, 0.2]
)");
    EXPECT_EQ(c.seed, 42u);
    EXPECT_EQ(c.model.toy_q, (std::vector<int>{0, 1, 2}));
    EXPECT_NO_THROW(validate_checks(c));
    auto l = parse("[model]\nkind = \"lechner\"\ns2 = { family = \"s2-blaschke\", params = [0.5] }\n");
    EXPECT_EQ(l.model.function_family, "s2-blaschke");
    auto f = parse("[model]\nkind = \"federbush\"\nkappa = 0.3\n[locality]\nf = { family = \"bump\", c0 = 0, c1 = 3 }\n");
    EXPECT_DOUBLE_EQ(f.model.kappa, 0.3);
    EXPECT_EQ(f.locality.f.params.at("c1"), 3.0);
}

TEST(Config, RejectsInvalidInput) {
    const std::vector<std::string> bad = {
        "checks = []",                                                                     // no model
        "[model]\nkind = \"sine-gordon\"\n",                                               // unknown kind
        "[model]\nkind = \"modular-toy\"\nn = 9\n",                                        // out of range
        "[model]\nkind = \"modular-toy\"\nlambda = [1.0]\n",                               // wrong length
        "[model]\nkind = \"modular-toy\"\nlambda = [1.0, -1.0]\n",                         // not positive
        "[model]\nkind = \"lechner\"\n",                                                   // missing function
        "[model]\nkind = \"lechner\"\ns2 = { family = \"s2-blaschke\", params = [4.0] }\n",  // parameter outside (0, pi)
        "[model]\nkind = \"free\"\n[grid]\nn_points = 1\n",
        "[model]\nkind = \"free\"\n[tolerances]\nno-such-check = 1e-3\n",
        "[model]\nkind = \"free\"\n[tolerances]\ncyclicity = -1.0\n",
        "[model]\nkind = \"free\"\n[locality]\nresolutions = []\n",
        "[model]\nkind = \"free\"\n[locality]\nf = { family = \"wavelet\" }\n",
        "seed = -4\n[model]\nkind = \"free\"\n",
        "[model]\nkind = \"federbush\"\n[zf]\nn_max = 3\n",
    };
    for (const auto& text : bad) EXPECT_THROW(parse(text), ConfigError) << text;
    auto c = parse("checks = [\"s2-axioms\"]\n[model]\nkind = \"free\"\n");
    EXPECT_THROW(validate_checks(c), ConfigError);  // not defined for the free model
    c.checks = {"cyclicity", "cyclicity"};
    EXPECT_THROW(validate_checks(c), ConfigError);
    c.checks = {};
    EXPECT_THROW(validate_checks(c), ConfigError);
}

TEST(Registry, NamesAreSortedAndDescribed) {
    const auto& reg = check_registry();
    EXPECT_EQ(reg.size(), 16u);
    for (std::size_t i = 1; i < reg.size(); ++i) EXPECT_LT(reg[i - 1].name, reg[i].name);
    for (const auto& c : reg) {
        EXPECT_FALSE(c.anchor.empty());
        EXPECT_FALSE(c.models.empty());
    }
    EXPECT_TRUE(find_check("negative-locality")->negative);
    EXPECT_EQ(find_check("bogus"), nullptr);
}

TEST(Runner, DeterministicAcrossThreadCounts) {
    auto c = parse(R"(
seed = 9
checks = ["tau-bound", "modular-twisted", "commutativity-lemma", "type-i-factor"]
[model]
kind = "modular-toy"
lambda = [0.8, 0.2]
)");
    auto a = report_json(c, run_checks(c, 1)).dump();
    auto b = report_json(c, run_checks(c, 3)).dump();
    EXPECT_EQ(a, b);
    // a check's random stream does not depend on which other checks run
    auto single = c;
    single.checks = {"tau-bound"};
    auto ra = run_checks(c, 1), rs = run_checks(single, 1);
    auto it = std::find_if(ra.begin(), ra.end(), [](const auto& r) { return r.name == "tau-bound"; });
    EXPECT_EQ(it->details.dump(), rs[0].details.dump());
    // the seed changes the random draws
    auto other = single;
    other.seed = 10;
    EXPECT_NE(run_checks(other, 1)[0].details.dump(), rs[0].details.dump());
}

TEST(Runner, NegativeControlsInvertTheVerdict) {
    auto c = parse(R"(
checks = ["negative-cyclicity", "cyclicity"]
n_max = 2
[model]
kind = "free"
[grid]
n_points = 3
)");
    auto rs = run_checks(c, 1);
    ASSERT_EQ(rs.size(), 2u);
    EXPECT_EQ(rs[1].name, "negative-cyclicity");
    EXPECT_FALSE(rs[1].property_holds);
    EXPECT_TRUE(rs[1].ok);
    EXPECT_TRUE(rs[0].ok);
    EXPECT_EQ(exit_code(rs), 0);
    // a control whose property holds must fail the run
    CheckResult bad = rs[1];
    bad.property_holds = true;
    bad.ok = false;
    EXPECT_EQ(exit_code({rs[0], bad}), 1);
    // a single field over a small grid stays non-cyclic at every truncation
    auto d = c;
    d.n_max = 1;
    d.grid.n_points = 2;
    d.checks = {"negative-cyclicity"};
    auto rd = run_checks(d, 1);
    EXPECT_EQ(rd[0].error, "");
    EXPECT_FALSE(rd[0].property_holds);
    EXPECT_TRUE(rd[0].ok);
}

TEST(Runner, ExceptionsBecomeFailures) {
    auto c = parse(R"(
checks = ["locality-free"]
[model]
kind = "free"
[locality]
f = { family = "bump", c0 = 0.0, c1 = 0.5, radius = 1.0 }
)");
    auto rs = run_checks(c, 1);
    EXPECT_FALSE(rs[0].ok);
    EXPECT_NE(rs[0].error.find("spacelike"), std::string::npos);
    EXPECT_EQ(exit_code(rs), 1);
    EXPECT_EQ(report_json(c, rs)["checks"][0]["error"], rs[0].error);
}

TEST(Runner, WritesReports) {
    auto c = parse(R"(
checks = ["smatrix-axioms"]
[model]
kind = "federbush"
kappa = 0.2
)");
    auto dir = std::filesystem::temp_directory_path() / "wedgelab_report_test";
    std::filesystem::remove_all(dir);
    write_reports(dir, c, run_checks(c, 1));
    EXPECT_TRUE(std::filesystem::exists(dir / "report.json"));
    EXPECT_TRUE(std::filesystem::exists(dir / "smatrix-axioms.matrix_theta0.csv"));
    std::ifstream is(dir / "report.json");
    auto j = nlohmann::json::parse(is);
    EXPECT_EQ(j["seed"], 1);
    EXPECT_EQ(j["summary"]["exit_code"], 0);
    std::filesystem::remove_all(dir);
}
