#pragma once

#include "wedgelab/modular.hpp"
#include "wedgelab/smatrix.hpp"
#include "wedgelab/verify.hpp"

#include <toml.hpp>
#include <nlohmann/json.hpp>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

namespace wedgelab {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ModelConfig {
    std::string kind = "free";  // free | lechner | federbush | longo-witten | modular-toy
    std::string function_family;
    std::vector<double> function_params;
    double kappa = 0.0;
    int toy_n = 2, toy_N = 2, toy_k = 1;
    std::vector<double> toy_lambda;
    std::vector<int> toy_q;

    ScatteringFunction function() const { return make_scattering_function(function_family, function_params); }
    ModularToy toy() const { return make_modular_toy(toy_n, toy_N, toy_k, toy_lambda, toy_q); }
};

struct GridConfig {
    double theta_half_width = 2.0;
    int n_points = 8;
    double mass = 1.0;
    RapidityGrid make() const { return make_grid(theta_half_width, n_points, mass); }
};

struct LocalityConfig {
    double theta_half_width = 3.0;
    std::vector<int> resolutions = {16, 32, 64};
    int reference_resolution = 32;
    int n_max = 2;
    TestFunction f = bump(0.3, 2.6, 1.0);
    TestFunction g = bump(-0.4, -2.2, 1.0);
};

struct ExperimentConfig {
    std::uint64_t seed = 1;
    std::vector<std::string> checks;
    ModelConfig model;
    GridConfig grid;
    int n_max = 2;
    std::map<std::string, double> tolerances;
    LocalityConfig locality;
    int zf_draws = 20;
    int zf_n_max = 4;  // truncation of the product space for the exchange relations
    int samples = 1000;  // random theta samples for scalar identities
};

struct CheckResult {
    std::string name;
    std::string anchor;
    bool expect_failure = false;
    bool property_holds = false;
    bool ok = false;  // property_holds, or its negation for a negative control
    double max_deviation = 0.0;
    double tol = 0.0;
    double seconds = 0.0;
    std::string error;
    nlohmann::json details = nlohmann::json::object();
    std::vector<std::pair<std::string, std::string>> csv;  // (suffix, content)
};

struct CheckSpec {
    std::string name;
    std::string anchor;
    std::vector<std::string> models;
    bool negative = false;
    double default_tol = 1e-10;
    std::function<void(const ExperimentConfig&, std::mt19937_64&, double, CheckResult&)> run;
};

// ---------------------------------------------------------------- checks

namespace detail {

inline std::vector<double> random_thetas(std::mt19937_64& rng, int n, double width = 5.0) {
    std::uniform_real_distribution<double> u(-width, width);
    std::vector<double> t(n);
    for (auto& x : t) x = u(rng);
    return t;
}

inline LocalitySetup locality_setup(const ExperimentConfig& c, double tol) {
    LocalitySetup s;
    s.theta_half_width = c.locality.theta_half_width;
    s.mass = c.grid.mass;
    s.n_max = c.locality.n_max;
    s.resolutions = c.locality.resolutions;
    s.reference_resolution = c.locality.reference_resolution;
    s.tol = tol;
    if (c.model.kind == "federbush") {
        s.twist = TwistKind::Federbush;
        s.kappa = c.model.kappa;
    } else if (c.model.kind == "longo-witten") {
        s.twist = TwistKind::LongoWitten;
        s.chi = reflected(c.model.function());
    }
    return s;
}

// bumps inside the right wedge with distinct centres
inline std::vector<TestFunction> wedge_family(int count) {
    std::vector<TestFunction> out;
    for (int j = 0; j < count; ++j) out.push_back(bump(0.15 * j - 0.2, 2.4 + 0.37 * j, 0.9));
    return out;
}

inline void s2_axioms(const ExperimentConfig& c, std::mt19937_64& rng, double tol, CheckResult& r) {
    auto S = c.model.function();
    auto rep = validate_s2(S, random_thetas(rng, c.samples), tol);
    r.property_holds = rep.pass;
    r.max_deviation = rep.max_deviation();
    r.details = {{"family", S.family},
                 {"samples", c.samples},
                 {"inverse_vs_conjugate", rep.inverse_vs_conjugate},
                 {"conjugate_vs_reflection", rep.conjugate_vs_reflection},
                 {"reflection_vs_crossing", rep.reflection_vs_crossing},
                 {"inverse_vs_crossing", rep.inverse_vs_crossing}};
}

inline void s2_fock(const ExperimentConfig& c, std::mt19937_64&, double tol, CheckResult& r) {
    FockSpace F(c.grid.make(), 1, std::max(2, c.n_max), c.model.function());
    auto rep = s2_fock_exchange(F);
    r.property_holds = rep.pass(tol);
    r.max_deviation = std::max({rep.projector_hermitian, rep.projector_idempotent, rep.exchange});
    r.details = to_json(rep);
}

inline void zf_federbush(const ExperimentConfig& c, std::mt19937_64& rng, double tol, CheckResult& r) {
    RapidityGrid grid = c.grid.make();
    TwinSpace S(grid, 2, c.zf_n_max);
    std::uniform_real_distribution<double> uk(0.0, 1.0);
    nlohmann::json draws = nlohmann::json::array();
    bool all = true;
    std::ostringstream csv;
    csv << "draw,kappa,x,y,expected,measured,smatrix_entry,residual\n";
    for (int k = 0; k < c.zf_draws; ++k) {
        const double kappa = k == 0 ? c.model.kappa : uk(rng);
        Vec p1 = random_complex_vector(grid.size(), rng), p2 = random_complex_vector(grid.size(), rng);
        auto rep = zf_relations_federbush(S, kappa, p1, p2, tol);
        all = all && rep.pass;
        r.max_deviation = std::max({r.max_deviation, rep.twisted_residual, rep.untwisted_residual,
                                    rep.smatrix_deviation, rep.phase_deviation});
        if (k == 0) r.details["model_kappa"] = to_json(rep);
        draws.push_back({{"kappa", kappa},
                         {"twisted_residual", rep.twisted_residual},
                         {"untwisted_residual", rep.untwisted_residual},
                         {"smatrix_deviation", rep.smatrix_deviation},
                         {"pass", rep.pass}});
        for (const auto& p : rep.twisted)
            csv << k << "," << std::setprecision(17) << kappa << "," << p.x << "," << p.y << ","
                << format_complex(p.expected) << "," << format_complex(p.measured) << ","
                << format_complex(p.smatrix_entry) << "," << p.residual << "\n";
    }
    r.details["draws"] = draws;
    r.details["dim"] = S.P->dim();
    r.property_holds = all;
    r.csv.emplace_back("phases", csv.str());
}

inline void zf_lw(const ExperimentConfig& c, std::mt19937_64&, double tol, CheckResult& r) {
    auto phi = c.model.function();
    auto chi = reflected(phi);
    RapidityGrid grid = c.grid.make();
    TwinSpace S(grid, 1, c.zf_n_max);
    PmTransform tf = pm_transform(c.locality.f, grid), tg = pm_transform(c.locality.g, grid);
    auto rep = zf_relation_longo_witten(
        S, chi, [&](double t, double t2) { return phi(std::exp(t2 - t)); }, tol, &tf.plus, &tg.plus);
    r.property_holds = rep.pass;
    r.max_deviation = std::max({rep.max_residual, rep.max_factor_deviation, rep.smeared_residual});
    r.details = to_json(rep);
    std::ostringstream csv;
    csv << "theta,theta_prime,expected,measured,residual\n" << std::setprecision(17);
    for (const auto& p : rep.pairs)
        csv << p.theta << "," << p.theta2 << "," << format_complex(p.expected) << "," << format_complex(p.measured)
            << "," << p.residual << "\n";
    r.csv.emplace_back("pairs", csv.str());
}

inline void smatrix_axioms(const ExperimentConfig& c, std::mt19937_64& rng, double tol, CheckResult& r) {
    TwoParticleSMatrix S = c.model.kind == "federbush" ? federbush_smatrix(c.model.kappa)
                                                        : longo_witten_smatrix(c.model.function());
    auto rep = check_axioms(S, random_thetas(rng, 20, 3.0), tol);
    r.property_holds = rep.pass;
    r.max_deviation = rep.max_deviation();
    r.details = to_json(rep);
    r.details["name"] = S.name;
    r.csv.emplace_back("matrix_theta0", matrix_csv(S(0.0)));
}

inline void modular_twisted(const ExperimentConfig& c, std::mt19937_64& rng, double tol, CheckResult& r) {
    ModularToy toy = c.model.toy();
    auto rep = verify_modular_twisted(toy, rng);
    r.property_holds = rep.max_deviation() <= tol;
    r.max_deviation = rep.max_deviation();
    r.details = {{"delta_deviation", rep.delta_deviation},
                 {"j_deviation", rep.j_deviation},
                 {"kms_deviation", rep.kms_deviation},
                 {"modular_audit", rep.modular_audit},
                 {"dim_algebra", rep.dim_algebra},
                 {"dim_space", rep.dim_space}};
}

inline void commutant_twisted(const ExperimentConfig& c, std::mt19937_64&, double tol, CheckResult& r) {
    ModularToy toy = c.model.toy();
    auto rep = verify_commutant_twisted(toy);
    r.property_holds = rep.comparison.equal(tol);
    r.max_deviation = rep.max_deviation();
    r.details = {{"dim_brute_force", rep.comparison.dim_a},
                 {"dim_formula", rep.comparison.dim_b},
                 {"brute_in_formula", rep.comparison.a_in_b},
                 {"formula_in_brute", rep.comparison.b_in_a}};
}

inline void tau_check(const ExperimentConfig& c, std::mt19937_64& rng, double tol, CheckResult& r) {
    ModularToy toy = c.model.toy();
    auto rep = tau_bound(toy, rng, 100);
    r.property_holds = rep.pass(tol);
    r.max_deviation = rep.vector_deviation;
    r.details = {{"samples", rep.samples},
                 {"max_ratio", rep.max_ratio},
                 {"bound", rep.bound},
                 {"vector_deviation", rep.vector_deviation},
                 {"membership", rep.membership},
                 {"reconstruction", rep.reconstruction}};
}

inline void type_i(const ExperimentConfig& c, std::mt19937_64&, double tol, CheckResult& r) {
    const ModelConfig& m = c.model;
    FiniteAlgebra R = algebra_closure(full_matrix_generators(m.toy_n));
    std::vector<int> labels(m.toy_n);
    for (int i = 0; i < m.toy_n; ++i) labels[i] = ((m.toy_q[i] % m.toy_N) + m.toy_N) % m.toy_N;
    auto g = diagonal_grading(labels, GroupKind::Cyclic, m.toy_N);
    auto rep = factor_and_minimal_projection(R, g, static_cast<double>(m.toy_k) / m.toy_N);
    r.max_deviation = std::max({rep.p_in_fixed_points, rep.pp_in_twisted, rep.fixed_point_invariance});
    r.property_holds = rep.factor() && rep.minimal() && r.max_deviation <= tol;
    r.details = {{"center_dim", rep.center_dim},
                 {"fixed_point_dim", rep.fixed_point_dim},
                 {"p_in_fixed_points", rep.p_in_fixed_points},
                 {"p_corner_dim", rep.p_corner_in_fixed_points},
                 {"pp_in_twisted", rep.pp_in_twisted},
                 {"pp_corner_dim", rep.pp_corner_in_twisted},
                 {"fixed_point_invariance", rep.fixed_point_invariance},
                 {"dim_twisted", rep.dim_twisted}};
}

inline void lemma_check(const ExperimentConfig& c, std::mt19937_64&, double tol, CheckResult& r) {
    ModularToy toy = c.model.toy();
    r.max_deviation = commutativity_lemma_residual(toy);
    r.property_holds = r.max_deviation <= tol;
    r.details = {{"residual", r.max_deviation}, {"dim_algebra", toy.M.dim()}};
}

inline void locality_free(const ExperimentConfig& c, std::mt19937_64&, double tol, CheckResult& r) {
    LocalitySetup s = locality_setup(c, 1.0);
    s.twist = TwistKind::None;
    auto rep = wedge_commutativity(s, c.locality.f, c.locality.g);
    double oracle = 0.0, scalar = 0.0;
    for (const auto& p : rep.series) {
        oracle = std::max(oracle, std::abs(p.vacuum_scalar - p.contraction));
        scalar = std::max(scalar, p.scalar_deviation);
    }
    r.max_deviation = std::max(oracle, scalar);
    r.property_holds = rep.monotone && r.max_deviation <= tol;
    r.details = to_json(rep);
    r.details["contraction_deviation"] = oracle;
    r.details["c_number_deviation"] = scalar;
    r.csv.emplace_back("series", locality_csv(rep));
}

inline void locality_twisted(const ExperimentConfig& c, std::mt19937_64&, double tol, CheckResult& r) {
    auto rep = wedge_commutativity(locality_setup(c, tol), c.locality.f, c.locality.g);
    r.property_holds = rep.pass;
    for (const auto& p : rep.series)
        if (p.n_points == rep.reference_resolution) r.max_deviation = p.relative;
    r.details = to_json(rep);
    r.csv.emplace_back("series", locality_csv(rep));
}

inline void negative_locality(const ExperimentConfig& c, std::mt19937_64&, double tol, CheckResult& r) {
    LocalitySetup s = locality_setup(c, tol);
    s.twist = TwistKind::None;
    s.require_spacelike = false;
    // g is f moved in time: the supports overlap and are timelike to each other
    const auto& p = c.locality.f.params;
    TestFunction g = c.locality.f.family == "bump"
                         ? bump(p.at("c0") + 0.5, p.at("c1"), p.at("radius"), p.count("amplitude") ? p.at("amplitude") : 1.0)
                         : c.locality.g;
    auto rep = wedge_commutativity(s, c.locality.f, g);
    r.property_holds = rep.pass;
    for (const auto& q : rep.series)
        if (q.n_points == rep.reference_resolution) r.max_deviation = q.relative;
    r.details = to_json(rep);
    r.csv.emplace_back("series", locality_csv(rep));
}

inline void spectrum(const ExperimentConfig& c, std::mt19937_64&, double, CheckResult& r) {
    SpectrumReport rep;
    if (c.model.kind == "lechner") {
        rep = spectrum_condition(FockSpace(c.grid.make(), 1, c.n_max, c.model.function()));
    } else {
        // the product space carries the twisted models; free uses it as well
        TwinSpace S(c.grid.make(), c.model.kind == "federbush" ? 2 : 1, c.n_max);
        rep = spectrum_condition(*S.P);
    }
    r.property_holds = rep.pass;
    r.max_deviation = static_cast<double>(rep.violations);
    r.details = to_json(rep);
}

inline void cyclicity(const ExperimentConfig& c, std::mt19937_64&, double tol, CheckResult& r) {
    RapidityGrid grid = c.grid.make();
    auto fam = wedge_family(grid.size());
    if (c.model.kind == "federbush") {
        TwinSpace S(grid, 2, c.n_max);
        const ProductFockSpace& P = *S.P;
        Vec u = S.federbush_twist(c.model.kappa);
        std::vector<SpMat> twisted, plain;
        for (const auto& f : fam) {
            PmTransform t = pm_transform(f, grid);
            for (int comp : {1, 2}) {
                SpMat x = species_field(S.A, t, real_component(comp));
                SpMat y = species_field(S.B, t, real_component(comp));
                SpMat X = P.left(x), Y = P.right(y);
                plain.push_back(X);
                plain.push_back(Y);
                twisted.push_back(X);
                twisted.push_back(ProductFockSpace::conjugate_by_diagonal(u, Y));
            }
        }
        std::vector<char> all(P.dim(), 1);
        auto rt = cyclicity_rank(twisted, P.vacuum(), all, c.n_max, tol);
        auto rp = cyclicity_rank(plain, P.vacuum(), all, c.n_max, tol);
        r.property_holds = rt.pass && rt.rank == rp.rank;
        r.max_deviation = rt.deficiency;
        r.details = {{"twisted", to_json(rt)}, {"untwisted", to_json(rp)}};
    } else {
        FockSpace F(grid, 1, c.n_max);
        std::vector<SpMat> gens;
        for (const auto& f : fam) gens.push_back(F.field(f));
        std::vector<char> all(F.dim(), 1);
        auto rep = cyclicity_rank(gens, F.vacuum(), all, c.n_max, tol, F.dim() <= 64);
        r.property_holds = rep.pass;
        r.max_deviation = rep.deficiency;
        r.details = to_json(rep);
    }
}

inline void negative_cyclicity(const ExperimentConfig& c, std::mt19937_64&, double tol, CheckResult& r) {
    FockSpace F(c.grid.make(), 1, c.n_max);
    std::vector<SpMat> gens = {F.field(c.locality.f)};
    std::vector<char> all(F.dim(), 1);
    auto rep = cyclicity_rank(gens, F.vacuum(), all, c.n_max + 2, tol);
    r.property_holds = rep.pass;
    r.max_deviation = rep.deficiency;
    r.details = to_json(rep);
}

}  // namespace detail

inline const std::vector<CheckSpec>& check_registry() {
    static const std::vector<CheckSpec> reg = [] {
        using namespace detail;
        std::vector<CheckSpec> v = {
            {"commutant-twisted", "commutant of the twisted wedge algebra: Ad V~(M' (x) 1) v 1 (x) M'",
             {"modular-toy"}, false, 1e-10, commutant_twisted},
            {"commutativity-lemma", "commutativity lemma: [x (x) 1, Ad V~(x' (x) 1)] = 0", {"modular-toy"}, false,
             1e-12, lemma_check},
            {"cyclicity", "vacuum cyclicity at truncation (Reeh-Schlieder step)", {"free", "federbush"}, false, 1e-10,
             cyclicity},
            {"locality-free", "free field wedge commutator against the contraction <J f^-, g^+> - <J g^-, f^+>",
             {"free"}, false, 1e-10, locality_free},
            {"locality-twisted", "twisted wedge locality: [x (x) 1, Ad twist(x' (x) 1)] = 0",
             {"federbush", "longo-witten"}, false, 1e-6, locality_twisted},
            {"modular-twisted", "modular operator of the twisted algebra is Delta (x) Delta, conjugation V~(J (x) J)",
             {"modular-toy"}, false, 1e-10, modular_twisted},
            {"negative-cyclicity", "control: one field operator cannot be cyclic", {"free"}, true, 1e-10,
             negative_cyclicity},
            {"negative-locality", "control: fields with timelike overlapping supports do not commute", {"free"}, true,
             1e-6, negative_locality},
            {"s2-axioms", "scattering function identities S2^-1 = conj S2 = S2(-t) = S2(t + i pi)", {"lechner"},
             false, 1e-10, s2_axioms},
            {"s2-fock-exchange", "S2-symmetric Fock space: projector and exchange z*(t')z*(t) = S2(t'-t) z*(t)z*(t')",
             {"lechner"}, false, 1e-12, s2_fock},
            {"smatrix-axioms", "two-particle S-matrix: unitarity, Yang-Baxter, hermitian analyticity",
             {"federbush", "longo-witten"}, false, 1e-12, smatrix_axioms},
            {"spectrum-condition", "joint spectrum of the translations inside the forward cone",
             {"free", "lechner", "federbush", "longo-witten"}, false, 0.0, spectrum},
            {"tau-bound", "tau_k bound |x~| <= N^2 |tau_k(x~)| and tau_k(x~) Omega~ = x~ Omega~", {"modular-toy"},
             false, 1e-12, tau_check},
            {"type-i-factor", "twisted algebra is a factor with minimal projection p (x) p", {"modular-toy"}, false,
             1e-10, type_i},
            {"zf-federbush", "twisted Zamolodchikov-Faddeev relations of the Federbush model", {"federbush"}, false,
             1e-10, zf_federbush},
            {"zf-longo-witten", "Zamolodchikov-Faddeev relation with the Longo-Witten twist", {"longo-witten"}, false,
             1e-12, zf_lw},
        };
        std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
        return v;
    }();
    return reg;
}

inline const CheckSpec* find_check(const std::string& name) {
    for (const auto& c : check_registry())
        if (c.name == name) return &c;
    return nullptr;
}

// ---------------------------------------------------------------- config

namespace detail {

inline double num(const toml::node& n, const std::string& where) {
    if (auto v = n.value<double>()) return *v;
    throw ConfigError(where + ": expected a number");
}

inline std::vector<double> num_array(const toml::node* n, const std::string& where) {
    std::vector<double> out;
    if (!n) return out;
    const auto* arr = n->as_array();
    if (!arr) throw ConfigError(where + ": expected an array of numbers");
    for (const auto& e : *arr) out.push_back(num(e, where));
    return out;
}

inline void parse_function(const toml::table& t, const std::string& key, ModelConfig& m) {
    const auto* f = t.get_as<toml::table>(key);
    if (!f) throw ConfigError("model." + key + " must be a table {family = ..., params = [...]}");
    auto fam = (*f)["family"].value<std::string>();
    if (!fam) throw ConfigError("model." + key + ".family missing");
    m.function_family = *fam;
    m.function_params = num_array(f->get("params"), "model." + key + ".params");
}

inline TestFunction parse_test_function(const toml::table& t, const std::string& where) {
    auto fam = t["family"].value<std::string>();
    if (!fam) throw ConfigError(where + ".family missing");
    std::map<std::string, double> p;
    for (const auto& [k, v] : t) {
        if (k.str() == "family") continue;
        p[std::string(k.str())] = num(v, where + "." + std::string(k.str()));
    }
    try {
        return make_test_function(*fam, p);
    } catch (const std::exception& e) {
        throw ConfigError(where + ": " + e.what());
    }
}

}  // namespace detail

inline ExperimentConfig parse_config(const toml::table& t) {
    using namespace detail;
    ExperimentConfig c;
    if (auto s = t["seed"].value<std::int64_t>()) {
        if (*s < 0) throw ConfigError("seed must be non-negative");
        c.seed = static_cast<std::uint64_t>(*s);
    }
    if (const auto* arr = t.get_as<toml::array>("checks")) {
        for (const auto& e : *arr) {
            auto s = e.value<std::string>();
            if (!s) throw ConfigError("checks: expected strings");
            c.checks.push_back(*s);
        }
    }
    if (auto v = t["n_max"].value<std::int64_t>()) c.n_max = static_cast<int>(*v);
    if (auto v = t["samples"].value<std::int64_t>()) c.samples = static_cast<int>(*v);
    if (c.n_max < 1 || c.n_max > 6) throw ConfigError("n_max must lie in [1, 6]");
    if (c.samples < 1) throw ConfigError("samples must be positive");

    const auto* model = t.get_as<toml::table>("model");
    if (!model) throw ConfigError("missing [model] table");
    auto kind = (*model)["kind"].value<std::string>();
    if (!kind) throw ConfigError("model.kind missing");
    c.model.kind = *kind;
    auto& m = c.model;
    if (m.kind == "free") {
    } else if (m.kind == "lechner") {
        parse_function(*model, "s2", m);
    } else if (m.kind == "federbush") {
        if (const auto* k = model->get("kappa")) m.kappa = num(*k, "model.kappa");
    } else if (m.kind == "longo-witten") {
        parse_function(*model, "phi", m);
    } else if (m.kind == "modular-toy") {
        if (auto v = (*model)["n"].value<std::int64_t>()) m.toy_n = static_cast<int>(*v);
        if (auto v = (*model)["N"].value<std::int64_t>()) m.toy_N = static_cast<int>(*v);
        if (auto v = (*model)["k"].value<std::int64_t>()) m.toy_k = static_cast<int>(*v);
        if (m.toy_n < 1 || m.toy_n > 4) throw ConfigError("model.n must lie in [1, 4]");
        if (m.toy_N < 2 || m.toy_N > 6) throw ConfigError("model.N must lie in [2, 6]");
        if (m.toy_k < 0 || m.toy_k >= m.toy_N) throw ConfigError("model.k must lie in [0, N)");
        m.toy_lambda = num_array(model->get("lambda"), "model.lambda");
        if (m.toy_lambda.empty()) m.toy_lambda.assign(m.toy_n, 1.0);
        for (int i = 0; i < m.toy_n; ++i)
            if (static_cast<int>(m.toy_lambda.size()) != m.toy_n || !(m.toy_lambda[i] > 0.0))
                throw ConfigError("model.lambda needs n positive entries");
        auto q = num_array(model->get("q"), "model.q");
        if (q.empty())
            for (int i = 0; i < m.toy_n; ++i) q.push_back(i % m.toy_N);
        if (static_cast<int>(q.size()) != m.toy_n) throw ConfigError("model.q needs n entries");
        for (double x : q) m.toy_q.push_back(static_cast<int>(std::lround(x)));
    } else {
        throw ConfigError("unknown model kind '" + m.kind + "'");
    }
    if (!m.function_family.empty()) {
        try {
            (void)m.function();
        } catch (const std::exception& e) {
            throw ConfigError(std::string("model function: ") + e.what());
        }
    }

    if (const auto* g = t.get_as<toml::table>("grid")) {
        if (const auto* v = g->get("theta_half_width")) c.grid.theta_half_width = num(*v, "grid.theta_half_width");
        if (auto v = (*g)["n_points"].value<std::int64_t>()) c.grid.n_points = static_cast<int>(*v);
        if (const auto* v = g->get("mass")) c.grid.mass = num(*v, "grid.mass");
    }
    try {
        (void)c.grid.make();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("grid: ") + e.what());
    }
    if (c.grid.n_points > 64) throw ConfigError("grid.n_points above 64 is out of range");

    if (const auto* tol = t.get_as<toml::table>("tolerances")) {
        for (const auto& [k, v] : *tol) {
            const std::string key(k.str());
            if (!find_check(key)) throw ConfigError("tolerances: unknown check '" + key + "'");
            double x = num(v, "tolerances." + key);
            if (!(x >= 0.0)) throw ConfigError("tolerances." + key + " must be non-negative");
            c.tolerances[key] = x;
        }
    }
    if (const auto* l = t.get_as<toml::table>("locality")) {
        auto& L = c.locality;
        if (const auto* v = l->get("theta_half_width")) L.theta_half_width = num(*v, "locality.theta_half_width");
        if (const auto* v = l->get("resolutions")) {
            L.resolutions.clear();
            for (double x : num_array(v, "locality.resolutions")) L.resolutions.push_back(static_cast<int>(x));
        }
        if (auto v = (*l)["reference_resolution"].value<std::int64_t>()) L.reference_resolution = static_cast<int>(*v);
        if (auto v = (*l)["n_max"].value<std::int64_t>()) L.n_max = static_cast<int>(*v);
        if (const auto* f = l->get_as<toml::table>("f")) L.f = parse_test_function(*f, "locality.f");
        if (const auto* g = l->get_as<toml::table>("g")) L.g = parse_test_function(*g, "locality.g");
        if (L.resolutions.empty()) throw ConfigError("locality.resolutions must not be empty");
        for (int n : L.resolutions)
            if (n < 2 || n > 128) throw ConfigError("locality.resolutions entries must lie in [2, 128]");
        if (L.n_max < 1 || L.n_max > 3) throw ConfigError("locality.n_max must lie in [1, 3]");
        if (!(L.theta_half_width > 0.0)) throw ConfigError("locality.theta_half_width must be positive");
    }
    if (const auto* z = t.get_as<toml::table>("zf")) {
        if (auto v = (*z)["draws"].value<std::int64_t>()) c.zf_draws = static_cast<int>(*v);
        if (auto v = (*z)["n_max"].value<std::int64_t>()) c.zf_n_max = static_cast<int>(*v);
        if (c.zf_draws < 1) throw ConfigError("zf.draws must be positive");
        if (c.zf_n_max < 4 || c.zf_n_max > 6) throw ConfigError("zf.n_max must lie in [4, 6]");
    }
    return c;
}

inline ExperimentConfig load_config(const std::string& path) {
    toml::table t;
    try {
        t = toml::parse_file(path);
    } catch (const toml::parse_error& e) {
        std::ostringstream os;
        os << path << ":" << e.source().begin.line << ":" << e.source().begin.column << ": " << e.description();
        throw ConfigError(os.str());
    }
    return parse_config(t);
}

// checks named in the config exist and accept the model
inline void validate_checks(const ExperimentConfig& c) {
    if (c.checks.empty()) throw ConfigError("no checks requested");
    std::set<std::string> seen;
    for (const auto& name : c.checks) {
        const CheckSpec* s = find_check(name);
        if (!s) throw ConfigError("unknown check '" + name + "'");
        if (std::find(s->models.begin(), s->models.end(), c.model.kind) == s->models.end())
            throw ConfigError("check '" + name + "' does not apply to model '" + c.model.kind + "'");
        if (!seen.insert(name).second) throw ConfigError("check '" + name + "' listed twice");
    }
}

// ---------------------------------------------------------------- run

inline CheckResult run_check(const CheckSpec& spec, const ExperimentConfig& c) {
    CheckResult r;
    r.name = spec.name;
    r.anchor = spec.anchor;
    r.expect_failure = spec.negative;
    auto it = c.tolerances.find(spec.name);
    r.tol = it != c.tolerances.end() ? it->second : spec.default_tol;
    std::mt19937_64 rng(c.seed ^ fnv1a(spec.name));
    const auto t0 = std::chrono::steady_clock::now();
    try {
        spec.run(c, rng, r.tol, r);
        r.ok = spec.negative ? !r.property_holds : r.property_holds;
    } catch (const std::exception& e) {
        r.error = e.what();
        r.property_holds = false;
        r.ok = false;
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

inline std::vector<CheckResult> run_checks(const ExperimentConfig& c, int jobs = 1) {
    validate_checks(c);
    std::vector<std::string> names = c.checks;
    std::sort(names.begin(), names.end());
    std::vector<CheckResult> out(names.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < names.size(); i = next++) out[i] = run_check(*find_check(names[i]), c);
    };
    const int n = std::max(1, std::min<int>(jobs, static_cast<int>(names.size())));
    std::vector<std::thread> pool;
    for (int k = 1; k < n; ++k) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return out;
}

inline int exit_code(const std::vector<CheckResult>& rs) {
    for (const auto& r : rs)
        if (!r.ok) return 1;
    return 0;
}

inline nlohmann::json model_json(const ModelConfig& m) {
    nlohmann::json j = {{"kind", m.kind}};
    if (!m.function_family.empty()) j["function"] = {{"family", m.function_family}, {"params", m.function_params}};
    if (m.kind == "federbush") j["kappa"] = m.kappa;
    if (m.kind == "modular-toy")
        j.update({{"n", m.toy_n}, {"N", m.toy_N}, {"k", m.toy_k}, {"lambda", m.toy_lambda}, {"q", m.toy_q}});
    return j;
}

// no timings and no wall-clock data, so identical inputs give identical bytes
inline nlohmann::json report_json(const ExperimentConfig& c, const std::vector<CheckResult>& rs) {
    nlohmann::json checks = nlohmann::json::array();
    int ok = 0;
    for (const auto& r : rs) {
        nlohmann::json j = {{"check", r.name},
                            {"anchor", r.anchor},
                            {"expect_failure", r.expect_failure},
                            {"property_holds", r.property_holds},
                            {"ok", r.ok},
                            {"max_deviation", r.max_deviation},
                            {"tol", r.tol},
                            {"details", r.details}};
        if (!r.error.empty()) j["error"] = r.error;
        checks.push_back(j);
        ok += r.ok;
    }
    return {{"seed", c.seed},
            {"model", model_json(c.model)},
            {"grid", {{"theta_half_width", c.grid.theta_half_width}, {"n_points", c.grid.n_points}, {"mass", c.grid.mass}}},
            {"n_max", c.n_max},
            {"checks", checks},
            {"summary", {{"total", static_cast<int>(rs.size())}, {"ok", ok}, {"exit_code", exit_code(rs)}}}};
}

inline void write_reports(const std::filesystem::path& dir, const ExperimentConfig& c,
                          const std::vector<CheckResult>& rs) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream os(dir / "report.json");
        if (!os) throw std::runtime_error("cannot write " + (dir / "report.json").string());
        os << report_json(c, rs).dump(2) << "\n";
    }
    for (const auto& r : rs)
        for (const auto& [suffix, content] : r.csv) {
            std::ofstream os(dir / (r.name + "." + suffix + ".csv"));
            os << content;
        }
}

}  // namespace wedgelab
