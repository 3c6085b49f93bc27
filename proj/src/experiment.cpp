#include "tristab/experiment.hpp"

#include "tristab/hyers.hpp"
#include "tristab/rng.hpp"

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace tristab {

namespace {

using nlohmann::json;

// Stage streams, all derived from the experiment seed.
enum Stream : std::uint64_t {
    kBound = 2,
    kTriadditive,
    kTrilinear,
    kUnique,
    kHyper,
    kFixedScaling,
    kExactMatch,
    kUnitary,
    kCancellation,
    kHypothesisTheta,
    kTensor,
    kGenerator,
};

std::uint64_t stream(const ExperimentConfig& cfg, Stream s)
{
    return derive_seed(cfg.seed, s);
}

CheckRecord check(std::string name, double value, double threshold, Comparison cmp = Comparison::AtMost,
                  bool gating = true, std::vector<std::string> flags = {})
{
    CheckRecord c;
    c.name = std::move(name);
    c.value = value;
    c.threshold = threshold;
    c.comparison = cmp;
    c.gating = gating;
    c.flags = std::move(flags);
    return c;
}

std::string regime_flag(double r)
{
    if (r < 1.0) return "regime:dilate(r<1)";
    if (r <= 2.0) return "regime:contract(1<r<=2)";
    return "regime:contract(r>2)";
}

// Converged-limit bookkeeping: a check computed on a non-converged limit is kept
// in the report but cannot gate the verdict.
struct LimitGate {
    bool gating;
    std::vector<std::string> flags;
};

LimitGate gate_for(const HyersLimit& L, bool in_scope, std::vector<std::string> flags)
{
    bool gating = in_scope;
    if (!in_scope)
        flags.push_back("exploratory:out-of-theorem-scope");
    if (L.unconverged() > 0) {
        gating = false;
        flags.push_back("unconverged-limit:" + std::to_string(L.unconverged()) + "/" +
                        std::to_string(L.evaluations()));
        flags.push_back("max-tail-bound:" + format_double(L.max_tail_bound()));
    }
    return {gating, std::move(flags)};
}

using MatrixXc = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

MatrixXc as_matrix(const Element& e)
{
    const auto n = static_cast<Eigen::Index>(e.algebra().dim);
    return Eigen::Map<const MatrixXc>(e.coeffs().data(), n, n);
}

double op_norm(const MatrixXc& m)
{
    if (m.size() == 0 || m.isZero(0.0))
        return 0.0;
    return Eigen::JacobiSVD<MatrixXc>(m).singularValues()(0);
}

// Direct-evaluation oracles for the unitary suite: products and norms through Eigen,
// independent of the algebra module's arithmetic and of the defect operations.
double oracle_leibniz(const TriFn& f, const Element& u, const Element& y, const Element& z, const Element& a)
{
    const auto& alg = u.algebra();
    const MatrixXc U = as_matrix(u), Y = as_matrix(y);
    const MatrixXc uy = U * Y;
    const Element uy_el(alg, std::vector<cplx>(uy.data(), uy.data() + uy.size()));
    const MatrixXc d = as_matrix(f(uy_el, z, a)) - as_matrix(f(u, z, a)) * Y - U * as_matrix(f(y, z, a));
    return op_norm(d);
}

double oracle_hom(const TriFn& f, const std::array<Element, 6>& v)
{
    const auto& alg = v[0].algebra();
    auto prod = [&](const Element& p, const Element& q) {
        const MatrixXc m = as_matrix(p) * as_matrix(q);
        return Element(alg, std::vector<cplx>(m.data(), m.data() + m.size()));
    };
    const MatrixXc d = as_matrix(f(prod(v[0], v[1]), prod(v[2], v[3]), prod(v[4], v[5]))) -
                       as_matrix(f(v[0], v[2], v[4])) * as_matrix(f(v[1], v[3], v[5]));
    return op_norm(d);
}

struct Pipeline {
    const ExperimentConfig& cfg;
    TrilinearTensor exact;
    TriMap f;
    VerificationReport& rep;
    double theta_hat = 0.0;
    double theta = 0.0;

    StabilityParams params() const
    {
        StabilityParams p = cfg.params;
        p.theta = theta;
        return p;
    }

    HyersConfig hyers_config() const
    {
        return HyersConfig::for_regime(cfg.params.r, theta, cfg.variant, cfg.n_max);
    }

    void estimate_and_premise()
    {
        StabilityParams bare = cfg.params;
        bare.theta = 0.0;
        theta_hat = estimate_theta(f, bare, cfg.variant, cfg.seed, cfg.estimator_samples(), cfg.workers);
        theta = cfg.theta_override ? *cfg.theta_override : cfg.theta_factor * theta_hat;
        rep.estimates["theta_hat"] = theta_hat;
        rep.estimates["theta"] = theta;
        const SlackSummary s = hypothesis_slack(TriFn(f), f.domain(), params(), cfg.variant, cfg.seed,
                                                cfg.estimator_samples(), cfg.tol.slack, cfg.workers);
        rep.estimates["hypothesis_violations"] = static_cast<double>(s.violations);
        rep.checks.push_back(check("hypothesis_premise", s.min_slack, -cfg.tol.slack, Comparison::AtLeast, true,
                                   {"variant:" + to_string(cfg.variant)}));
    }

    void cancellation()
    {
        const TriFn d(TriMap{exact});
        const auto n = cfg.sample_count;
        const auto seed = stream(cfg, kCancellation);
        double worst_a = 0.0, worst_b = 0.0, worst_scaled = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const SampleTuple t = sample_tuple(f.domain(), seed, i, true, 1.0, 1.0);
            worst_a = std::max(worst_a, norm(combo_A(d, t)));
            worst_b = std::max(worst_b, norm(combo_B(d, t)));
            worst_scaled = std::max({worst_scaled, norm(scaled_combo_A(d, t)), norm(scaled_combo_B(d, t))});
        }
        rep.checks.push_back(check("cancellation_A", worst_a, cfg.tol.cancellation, Comparison::AtMost, true,
                                   {"exact-part", "unit-norm-tuples"}));
        rep.checks.push_back(check("cancellation_B", worst_b, cfg.tol.cancellation, Comparison::AtMost, true,
                                   {"exact-part", "unit-norm-tuples"}));
        rep.checks.push_back(check("cancellation_scaled", worst_scaled, cfg.tol.cancellation, Comparison::AtMost,
                                   true, {"exact-part", "unit-norm-tuples", "unit-circle-scalars"}));
    }

    void curves(const HyersConfig& hc)
    {
        const auto seed = stream(cfg, kBound);
        for (std::size_t k = 0; k < cfg.curve_probes; ++k) {
            const SampleTuple t = sample_tuple(f.domain(), seed, k, false);
            const HyersResult res = hyers_limit(TriFn(f), hc, t.x, t.z, t.a);
            rep.curves.push_back({"bound-sample-" + std::to_string(k), res.converged, res.curve});
        }
    }

    void stability_bound(const HyersConfig& hc)
    {
        const BoundKind kind = bound_kind_for(cfg.variant, cfg.params.r);
        const BoundVerification v =
            verify_bound(f, hc, params(), kind, stream(cfg, kBound), cfg.sample_count, std::nullopt, cfg.workers);
        std::vector<std::string> flags{"bound:" + to_string(kind), regime_flag(cfg.params.r),
                                       "empirical tail certificate"};
        if (v.unconverged)
            flags.push_back("tail-included:" + std::to_string(v.unconverged) + "/" + std::to_string(cfg.sample_count));
        if (v.skipped)
            flags.push_back("skipped:" + std::to_string(v.skipped));
        rep.estimates["bound_constant"] = bound_constant(kind, theta, cfg.params.r);
        rep.checks.push_back(
            check("stability_bound", v.max_ratio, 1.0 + cfg.tol.bound_ratio, Comparison::AtMost, true, flags));
        rep.checks.push_back(check("limit_convergence", static_cast<double>(v.unconverged), 0.0, Comparison::AtMost,
                                   false, {"non-converged limit evaluations in the bound check"}));
    }

    void limit_structure(const HyersConfig& hc)
    {
        const auto n = cfg.sample_count;
        {
            const HyersLimit L(TriFn(f), hc);
            const double v = check_triadditivity(L, f.domain(), stream(cfg, kTriadditive), n, cfg.workers);
            auto g = gate_for(L, true, {});
            rep.checks.push_back(check("triadditivity", v, cfg.tol.limit, Comparison::AtMost, g.gating, g.flags));
        }
        {
            const HyersLimit L(TriFn(f), hc);
            const double v = check_trilinearity(L, f.domain(), stream(cfg, kTrilinear), n, cfg.workers);
            auto g = gate_for(L, true, {"unit-circle and general complex scalars"});
            rep.checks.push_back(check("trilinearity", v, cfg.tol.limit, Comparison::AtMost, g.gating, g.flags));
        }
        {
            PerturbationSpec a{PerturbationKind::Radial, cfg.theta0, cfg.params.r, cfg.direction_seed};
            PerturbationSpec b{PerturbationKind::SeededNoise, cfg.theta0, cfg.params.r, cfg.direction_seed};
            const TriMap f1(exact, a), f2(exact, b);
            const HyersLimit probe(TriFn(f2), hc);
            const double v = check_uniqueness(f1, f2, f.domain(), hc, stream(cfg, kUnique), n, cfg.workers);
            // Convergence of the noisy variant on the same triples, for gating.
            for (std::size_t i = 0; i < std::min<std::size_t>(n, 32); ++i) {
                const SampleTuple t = sample_tuple(f.domain(), stream(cfg, kUnique), i, false);
                probe(t.x, t.z, t.a);
            }
            auto g = gate_for(probe, true, {"radial-vs-seeded-noise"});
            rep.checks.push_back(check("uniqueness", v, cfg.tol.limit, Comparison::AtMost, g.gating, g.flags));
        }
        {
            const HyersLimit L(TriFn(f), hc);
            TriMap d(exact);
            double worst = 0.0;
            const auto m = std::min<std::size_t>(n, 100);
            for (std::size_t i = 0; i < m; ++i) {
                const SampleTuple t = sample_tuple(f.domain(), stream(cfg, kExactMatch), i, false, 1.0, 1.0);
                worst = std::max(worst, norm(sub(L(t.x, t.z, t.a), d(t.x, t.z, t.a))));
            }
            auto g = gate_for(L, true, {"unit-norm-triples"});
            rep.checks.push_back(
                check("limit_matches_exact_part", worst, cfg.tol.exact_match, Comparison::AtMost, g.gating, g.flags));
        }
    }

    void derivation(const HyersConfig& hc)
    {
        const double r = cfg.params.r;
        rep.estimates["theta_hat_leibniz"] =
            estimate_leibniz_theta(TriFn(f), f.domain(), r, stream(cfg, kHypothesisTheta), cfg.sample_count);
        rep.estimates["theta_hat_permuting"] =
            estimate_permuting_theta(TriFn(f), f.domain(), r, stream(cfg, kHypothesisTheta), cfg.sample_count);
        const HyersLimit L(TriFn(f), hc);
        const auto h = check_hyperstability_derivation(L, f.domain(), r, stream(cfg, kHyper), cfg.sample_count,
                                                       cfg.workers);
        auto gd = gate_for(L, h.derivation_in_scope, {regime_flag(r), "all-three-slots"});
        auto gp = gate_for(L, h.permuting_in_scope, {regime_flag(r)});
        rep.checks.push_back(
            check("derivation_identity", h.derivation_residual, cfg.tol.limit, Comparison::AtMost, gd.gating, gd.flags));
        rep.checks.push_back(
            check("permuting_identity", h.permuting_residual, cfg.tol.limit, Comparison::AtMost, gp.gating, gp.flags));
        fixed_scaling();
    }

    void homomorphism(const HyersConfig& hc)
    {
        const double r = cfg.params.r;
        rep.estimates["theta_hat_multiplicative"] =
            estimate_hom_theta(TriFn(f), f.domain(), r, stream(cfg, kHypothesisTheta), cfg.sample_count);
        const HyersLimit L(TriFn(f), hc);
        const auto h =
            check_hyperstability_hom(L, f.domain(), r, stream(cfg, kHyper), cfg.sample_count, cfg.workers);
        auto gh = gate_for(L, h.in_scope, {regime_flag(r)});
        auto gp = gate_for(L, true, {regime_flag(r)});
        rep.checks.push_back(check("hom_identity", h.hom_residual, cfg.tol.limit, Comparison::AtMost, gh.gating, gh.flags));
        rep.checks.push_back(
            check("permuting_identity", h.permuting_residual, cfg.tol.limit, Comparison::AtMost, gp.gating, gp.flags));
        fixed_scaling();
    }

    void fixed_scaling()
    {
        const double v = check_fixed_scaling(TriFn(f), f.domain(), stream(cfg, kFixedScaling), cfg.sample_count);
        rep.checks.push_back(check("fixed_scaling", v, cfg.tol.fixed_scaling, Comparison::AtMost, false,
                                   {"PASS means the limit may be identified with f"}));
    }

    void unitary(const HyersConfig& hc)
    {
        const auto& alg = f.domain();
        const auto seed = stream(cfg, kUnitary);
        const std::size_t n = std::min<std::size_t>(cfg.sample_count, 100);
        const TriFn fn(f);

        double roundtrip = 0.0, term_unitarity = 0.0;
        double single_gap = 0.0, pair_gap = 0.0, first_hom_gap = 0.0, six_max = 0.0;
        std::size_t six_errors = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const SampleTuple t = sample_tuple(alg, seed, i, false);
            for (const auto& term : unitary_decompose(t.x)) {
                const Element& u = term.unitary;
                const Element e = Element::one(alg);
                term_unitarity = std::max(term_unitarity, norm(sub(mul(u, adjoint(u)), e)));
            }
            roundtrip = std::max(roundtrip, norm(sub(reconstruct(unitary_decompose(t.x), alg), t.x)));

            std::array<Element, 6> us{random_unitary(alg, derive_seed(seed + 1, 6 * i)),
                                      random_unitary(alg, derive_seed(seed + 1, 6 * i + 1)),
                                      random_unitary(alg, derive_seed(seed + 1, 6 * i + 2)),
                                      random_unitary(alg, derive_seed(seed + 1, 6 * i + 3)),
                                      random_unitary(alg, derive_seed(seed + 1, 6 * i + 4)),
                                      random_unitary(alg, derive_seed(seed + 1, 6 * i + 5))};
            const double d1 = unitary_derivation_defect(fn, us[0], t.y, t.z, t.a);
            single_gap = std::max(single_gap, std::abs(d1 - oracle_leibniz(fn, us[0], t.y, t.z, t.a)));
            const double d2 = unitary_pair_derivation_defect(fn, us[0], us[1], t.z, t.a);
            pair_gap = std::max(pair_gap, std::abs(d2 - oracle_leibniz(fn, us[0], us[1], t.z, t.a)));
            const std::array<Element, 6> mixed{us[0], t.y, t.z, t.w, t.a, t.b};
            const double d3 = unitary_hom_defect(fn, UnitaryHomMode::FirstUnitary, mixed);
            first_hom_gap = std::max(first_hom_gap, std::abs(d3 - oracle_hom(fn, mixed)));
            try {
                const double d6 = unitary_hom_defect(fn, UnitaryHomMode::SixUnitaries, us);
                if (!std::isfinite(d6))
                    ++six_errors;
                six_max = std::max(six_max, d6);
            } catch (const std::exception&) {
                ++six_errors;
            }
        }
        rep.estimates["six_unitary_hom_defect_max"] = six_max;
        rep.estimates["six_unitary_implied_theta"] = six_max / 8.0;
        rep.checks.push_back(check("unitary_decompose_roundtrip", roundtrip, cfg.tol.roundtrip));
        rep.checks.push_back(check("unitary_terms_unitary", term_unitarity, cfg.tol.roundtrip));
        rep.checks.push_back(check("unitary_derivation_oracle", single_gap, cfg.tol.oracle));
        rep.checks.push_back(check("unitary_pair_derivation_oracle", pair_gap, cfg.tol.oracle));
        rep.checks.push_back(check("unitary_hom_oracle", first_hom_gap, cfg.tol.oracle));
        rep.checks.push_back(check("six_unitary_hom_evaluation", static_cast<double>(six_errors), 0.0));

        const HyersLimit L(fn, hc);
        const UnitaryExtension ext = check_unitary_derivation_extension(L, alg, stream(cfg, kHyper), n);
        auto ga = gate_for(L, true, {});
        const bool is_derivation = cfg.recipe == MapRecipe::InnerDerivation;
        const double r = cfg.params.r;
        auto gr = gate_for(L, is_derivation && (r > 2.0 || r < 1.0), {regime_flag(r)});
        if (!is_derivation)
            gr.flags.push_back("map-not-a-first-slot-derivation");
        rep.estimates["extension_reconstructed_residual"] = ext.reconstructed_residual;
        rep.checks.push_back(
            check("derivation_extension_agreement", ext.disagreement, cfg.tol.oracle, Comparison::AtMost, ga.gating, ga.flags));
        rep.checks.push_back(
            check("derivation_extension_residual", ext.direct_residual, cfg.tol.limit, Comparison::AtMost, gr.gating, gr.flags));
    }
};

} // namespace

std::string to_string(MapRecipe m)
{
    switch (m) {
    case MapRecipe::ExactTrilinear: return "exact";
    case MapRecipe::PolyTriderivation: return "poly-derivation";
    case MapRecipe::PolyTrihom: return "poly-hom";
    case MapRecipe::PointwiseTrihom: return "pointwise-hom";
    case MapRecipe::InnerDerivation: return "inner-derivation";
    }
    return "?";
}

MapRecipe map_recipe_from_string(const std::string& name)
{
    for (auto m : {MapRecipe::ExactTrilinear, MapRecipe::PolyTriderivation, MapRecipe::PolyTrihom,
                   MapRecipe::PointwiseTrihom, MapRecipe::InnerDerivation})
        if (to_string(m) == name)
            return m;
    throw std::invalid_argument("unknown map recipe '" + name +
                                "' (expected exact, poly-derivation, poly-hom, pointwise-hom or inner-derivation)");
}

std::string to_string(Suite s)
{
    switch (s) {
    case Suite::Inequality: return "inequality";
    case Suite::Stability: return "stability";
    case Suite::Derivation: return "derivation";
    case Suite::Homomorphism: return "homomorphism";
    case Suite::Unitary: return "unitary";
    }
    return "?";
}

MapRecipe default_recipe(Suite suite, AlgebraKind kind)
{
    switch (kind) {
    case AlgebraKind::TruncatedPoly:
        return suite == Suite::Homomorphism ? MapRecipe::PolyTrihom : MapRecipe::PolyTriderivation;
    case AlgebraKind::PointwiseCn:
        return suite == Suite::Derivation ? MapRecipe::ExactTrilinear : MapRecipe::PointwiseTrihom;
    case AlgebraKind::MatrixCStar:
        return MapRecipe::InnerDerivation;
    }
    return MapRecipe::ExactTrilinear;
}

void ExperimentConfig::validate() const
{
    params.validate();
    const double r = params.r;
    if (r == 1.0)
        throw std::invalid_argument("r = 1 is excluded: the stability bounds need r > 1 or r < 1 (both geometric series "
                                    "diverge at r = 1)");
    if (!(r >= 0.0))
        throw std::invalid_argument("r must be >= 0");
    if (!(theta0 >= 0.0))
        throw std::invalid_argument("theta0 must be >= 0");
    if (sample_count < 1)
        throw std::invalid_argument("sample count must be >= 1");
    if (n_max < 2 || n_max > kMaxIterations)
        throw std::invalid_argument("n_max must lie in [2, 48]");
    if (!(theta_factor >= 0.0))
        throw std::invalid_argument("theta factor must be >= 0");
    if (theta_override && !(*theta_override >= 0.0))
        throw std::invalid_argument("theta must be >= 0");
    if (workers < 1)
        throw std::invalid_argument("workers must be >= 1");

    const auto kind = algebra.kind;
    switch (recipe) {
    case MapRecipe::PolyTriderivation:
        if (kind != AlgebraKind::TruncatedPoly || algebra.dim < 2)
            throw std::invalid_argument("poly-derivation needs --algebra poly with --dim >= 2");
        break;
    case MapRecipe::PolyTrihom:
        if (kind != AlgebraKind::TruncatedPoly)
            throw std::invalid_argument("poly-hom needs --algebra poly");
        break;
    case MapRecipe::PointwiseTrihom:
        if (kind != AlgebraKind::PointwiseCn)
            throw std::invalid_argument("pointwise-hom needs --algebra pointwise");
        break;
    case MapRecipe::InnerDerivation:
        if (kind != AlgebraKind::MatrixCStar)
            throw std::invalid_argument("inner-derivation needs --algebra matrix");
        break;
    case MapRecipe::ExactTrilinear: break;
    }
    if (suite == Suite::Unitary && kind != AlgebraKind::MatrixCStar)
        throw std::invalid_argument("the unitary suite needs --algebra matrix");
    const double n = static_cast<double>(algebra.size());
    if (n * n * n * n > 4.0e6)
        throw std::invalid_argument("algebra " + describe(algebra) + " is too large for a dense trilinear tensor");
}

json config_to_json(const ExperimentConfig& cfg)
{
    return {{"algebra", {{"kind", to_string(cfg.algebra.kind)}, {"dim", cfg.algebra.dim}}},
            {"map", to_string(cfg.recipe)},
            {"perturbation",
             {{"kind", to_string(cfg.perturbation)}, {"theta0", cfg.theta0}, {"direction_seed", cfg.direction_seed}}},
            {"s", {cfg.params.s.real(), cfg.params.s.imag()}},
            {"r", cfg.params.r},
            {"theta_override", cfg.theta_override ? json(*cfg.theta_override) : json(nullptr)},
            {"theta_factor", cfg.theta_factor},
            {"variant", to_string(cfg.variant)},
            {"suite", to_string(cfg.suite)},
            {"seed", cfg.seed},
            {"sample_count", cfg.sample_count},
            {"estimate_count", cfg.estimator_samples()},
            {"n_max", cfg.n_max},
            {"curve_probes", cfg.curve_probes},
            {"rng", CounterRng::kName},
            {"tolerances",
             {{"cancellation", cfg.tol.cancellation},
              {"slack", cfg.tol.slack},
              {"bound_ratio", cfg.tol.bound_ratio},
              {"limit", cfg.tol.limit},
              {"exact_match", cfg.tol.exact_match},
              {"roundtrip", cfg.tol.roundtrip},
              {"oracle", cfg.tol.oracle},
              {"fixed_scaling", cfg.tol.fixed_scaling}}}};
}

TrilinearTensor build_exact(const ExperimentConfig& cfg)
{
    const auto& alg = cfg.algebra;
    switch (cfg.recipe) {
    case MapRecipe::PolyTriderivation: return make_poly_triderivation(alg.dim);
    case MapRecipe::PolyTrihom: return make_poly_trihomomorphism(alg.dim);
    case MapRecipe::PointwiseTrihom: {
        std::vector<int> perm(static_cast<std::size_t>(alg.dim));
        std::iota(perm.rbegin(), perm.rend(), 0);
        return make_pointwise_trihomomorphism(alg.dim, perm);
    }
    case MapRecipe::InnerDerivation:
        return make_inner_first_slot_derivation(alg.dim, random_element(alg, stream(cfg, kGenerator), 1.0));
    case MapRecipe::ExactTrilinear: return make_random_tensor(alg, alg, stream(cfg, kTensor));
    }
    throw std::logic_error("unhandled map recipe");
}

TriMap build_map(const ExperimentConfig& cfg)
{
    PerturbationSpec spec{cfg.perturbation, cfg.theta0, cfg.params.r, cfg.direction_seed};
    return TriMap(build_exact(cfg), spec);
}

VerificationReport run_suite(const ExperimentConfig& cfg)
{
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();

    VerificationReport rep;
    rep.config = config_to_json(cfg);
    Pipeline pipe{cfg, build_exact(cfg), build_map(cfg), rep};

    switch (cfg.suite) {
    case Suite::Inequality:
        pipe.cancellation();
        pipe.estimate_and_premise();
        break;
    case Suite::Stability: {
        pipe.estimate_and_premise();
        const HyersConfig hc = pipe.hyers_config();
        pipe.stability_bound(hc);
        pipe.limit_structure(hc);
        pipe.curves(hc);
        break;
    }
    case Suite::Derivation: {
        pipe.estimate_and_premise();
        const HyersConfig hc = pipe.hyers_config();
        pipe.stability_bound(hc);
        pipe.limit_structure(hc);
        pipe.derivation(hc);
        pipe.curves(hc);
        break;
    }
    case Suite::Homomorphism: {
        pipe.estimate_and_premise();
        const HyersConfig hc = pipe.hyers_config();
        pipe.stability_bound(hc);
        pipe.limit_structure(hc);
        pipe.homomorphism(hc);
        pipe.curves(hc);
        break;
    }
    case Suite::Unitary: {
        pipe.estimate_and_premise();
        const HyersConfig hc = pipe.hyers_config();
        pipe.unitary(hc);
        pipe.curves(hc);
        break;
    }
    }
    rep.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

} // namespace tristab
