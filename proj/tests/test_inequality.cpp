#include "oracles.hpp"

#include "tristab/inequality.hpp"

#include <doctest.h>

using namespace tristab;

namespace {

const AlgebraDescriptor kPoly3{AlgebraKind::TruncatedPoly, 3};

TriMap radial_map(double theta0 = 0.1, double r = 3.0)
{
    return TriMap(make_poly_triderivation(3), PerturbationSpec{PerturbationKind::Radial, theta0, r, 7});
}

// Term-by-term combination built directly on coefficient vectors.
oracle::Coeffs naive_combo(const TriMap& f, const SampleTuple& t, bool halved, bool scaled)
{
    const auto& alg = f.domain();
    auto el = [&](const oracle::Coeffs& c) { return Element(alg, c); };
    const auto& x = t.x.coeffs();
    const auto& y = t.y.coeffs();
    const auto& z = t.z.coeffs();
    const auto& w = t.w.coeffs();
    const auto& a = t.a.coeffs();
    const auto& b = t.b.coeffs();
    const cplx l = scaled ? t.lambda : 1.0, m = scaled ? t.mu : 1.0, e = scaled ? t.eta : 1.0;
    const cplx h = halved ? 0.5 : 1.0, outer = halved ? 2.0 : 1.0;
    auto F = [&](const oracle::Coeffs& p, const oracle::Coeffs& q, const oracle::Coeffs& r) {
        return f(el(p), el(q), el(r)).coeffs();
    };
    // same association as the evaluated arguments: s * (h * (p +/- q)); the seeded
    // perturbation hashes exact bits, so lambda x + lambda y would not do
    auto arg = [](cplx s, cplx h, const oracle::Coeffs& p, cplx sign, const oracle::Coeffs& q) {
        const oracle::Coeffs sum = oracle::lin(1.0, p, sign, q);
        const oracle::Coeffs half = h == 1.0 ? sum : oracle::lin(h, sum, 0.0, sum);
        return s == 1.0 ? half : oracle::lin(s, half, 0.0, half);
    };
    oracle::Coeffs out = oracle::lin(outer, F(arg(l, h, x, 1.0, y), arg(m, 1.0, z, -1.0, w), arg(e, 1.0, a, 1.0, b)),
                                     outer, F(arg(l, h, x, -1.0, y), arg(m, 1.0, z, 1.0, w), arg(e, 1.0, a, -1.0, b)));
    const cplx k = l * m * e;
    out = oracle::lin(1.0, out, -2.0 * k, F(x, z, a));
    out = oracle::lin(1.0, out, 2.0 * k, F(x, w, b));
    out = oracle::lin(1.0, out, -2.0 * k, F(y, z, b));
    out = oracle::lin(1.0, out, 2.0 * k, F(y, w, a));
    return out;
}

std::vector<TrilinearTensor> exact_tensors()
{
    std::vector<TrilinearTensor> out;
    for (int n = 2; n <= 4; ++n) {
        out.push_back(make_random_tensor({AlgebraKind::PointwiseCn, n}, {AlgebraKind::PointwiseCn, n}, 10 + n));
        out.push_back(make_random_tensor({AlgebraKind::TruncatedPoly, n}, {AlgebraKind::TruncatedPoly, n}, 20 + n));
        out.push_back(make_random_tensor({AlgebraKind::MatrixCStar, n}, {AlgebraKind::MatrixCStar, n}, 30 + n));
    }
    return out;
}

} // namespace

TEST_SUITE("inequality") {

TEST_CASE("params validation")
{
    StabilityParams p;
    CHECK_NOTHROW(p.validate());
    p.s = cplx(1.5, 0.0);
    CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("|s| < 1"), std::invalid_argument);
    p.s = 0.0;
    CHECK_THROWS(p.validate());
    p.s = cplx(0.0, 0.9);
    p.theta = -1.0;
    CHECK_THROWS(p.validate());
    const TriMap f = radial_map();
    const SampleTuple t = sample_tuple(kPoly3, 1, 0, false);
    CHECK_THROWS(eval_ineq_01(f, StabilityParams{cplx(1.0, 0.0), 3.0, 0.0}, t));
}

TEST_CASE("sample tuples")
{
    for (std::uint64_t i = 0; i < 200; ++i) {
        const SampleTuple t = sample_tuple(kPoly3, 3, i, true);
        for (const Element* e : {&t.x, &t.y, &t.z, &t.w, &t.a, &t.b}) {
            CHECK(norm(*e) >= kSampleNormMin * (1 - 1e-12));
            CHECK(norm(*e) <= kSampleNormMax * (1 + 1e-12));
        }
        for (cplx c : {t.lambda, t.mu, t.eta})
            CHECK(std::abs(std::abs(c) - 1.0) <= 1e-14);
    }
    const SampleTuple a = sample_tuple(kPoly3, 3, 7, false), b = sample_tuple(kPoly3, 3, 7, false);
    CHECK(a.x.coeffs() == b.x.coeffs());
    CHECK(a.lambda == cplx(1.0));
}

TEST_CASE("cancellation for exact trilinear maps")
{
    for (const auto& tensor : exact_tensors()) {
        const TriFn d(TriMap{tensor});
        double worst = 0.0;
        for (std::uint64_t i = 0; i < 1000; ++i) {
            const SampleTuple t = sample_tuple(tensor.domain(), 42, i, true, 1.0, 1.0);
            worst = std::max({worst, norm(combo_A(d, t)), norm(combo_B(d, t)), norm(scaled_combo_A(d, t)),
                              norm(scaled_combo_B(d, t))});
        }
        CHECK(worst <= 1e-12);
    }
}

TEST_CASE("all-zero tuple gives zero")
{
    const TriFn f(radial_map());
    const Element o = Element::zero(kPoly3);
    const SampleTuple t{o, o, o, o, o, o};
    CHECK(combo_A(f, t).is_zero());
    CHECK(combo_B(f, t).is_zero());
}

TEST_CASE("combinations match a term-by-term oracle")
{
    for (auto kind : {PerturbationKind::Radial, PerturbationKind::SeededNoise}) {
        const TriMap f(make_poly_triderivation(3), PerturbationSpec{kind, 0.1, 3.0, 7});
        for (std::uint64_t i = 0; i < 50; ++i) {
            SampleTuple t = sample_tuple(kPoly3, 9, i, true);
            const double scale_ref = 1e-12 * (1.0 + norm(Element(kPoly3, naive_combo(f, t, false, false))));
            CHECK(oracle::max_abs_diff(combo_A(f, t).coeffs(), naive_combo(f, t, false, false)) <= scale_ref * 1e3);
            CHECK(oracle::max_abs_diff(combo_B(f, t).coeffs(), naive_combo(f, t, true, false)) <= scale_ref * 1e3);
            CHECK(oracle::max_abs_diff(scaled_combo_A(f, t).coeffs(), naive_combo(f, t, false, true)) <= scale_ref * 1e3);
            CHECK(oracle::max_abs_diff(scaled_combo_B(f, t).coeffs(), naive_combo(f, t, true, true)) <= scale_ref * 1e3);
        }
        // the fixed scalar choice lambda = i, mu = -1, eta = 1
        SampleTuple t = sample_tuple(kPoly3, 9, 77, false);
        t.lambda = cplx(0, 1);
        t.mu = -1.0;
        t.eta = 1.0;
        const auto ref = naive_combo(f, t, false, true);
        CHECK(oracle::max_abs_diff(scaled_combo_A(f, t).coeffs(), ref) <= 1e-9 * (1.0 + oracle::norm(kPoly3, ref)));
        const StabilityParams p{0.5, 3.0, 0.0};
        CHECK(eval_ineq_scalar(f, p, t, Variant::ScalarA).lhs ==
              doctest::Approx(oracle::norm(kPoly3, ref)).epsilon(1e-12));
    }
}

TEST_CASE("inequality evaluations")
{
    const StabilityParams p{cplx(0.3, 0.4), 3.0, 0.0};
    const TriFn d(TriMap{make_poly_triderivation(3)});
    const TriFn zero_map = [](const Element&, const Element&, const Element&) { return Element::zero(kPoly3); };
    for (std::uint64_t i = 0; i < 50; ++i) {
        const SampleTuple t = sample_tuple(kPoly3, 4, i, false, 1.0, 1.0);
        for (auto e : {eval_ineq_01(d, p, t), eval_ineq_02(d, p, t)}) {
            CHECK(e.lhs <= 1e-12);
            CHECK(std::abs(e.slack) <= 1e-12);
        }
        const IneqEvaluation z = eval_ineq_01(zero_map, p, t);
        CHECK(z.lhs == 0.0);
        CHECK(z.rhs_control == 0.0);
        CHECK(z.rhs_product == 0.0);
        CHECK(z.slack == 0.0);
    }
    // field definitions on a perturbed map
    const TriFn f(radial_map());
    const SampleTuple t = sample_tuple(kPoly3, 4, 3, false);
    const StabilityParams q{cplx(0.3, 0.4), 3.0, 0.2};
    const IneqEvaluation e1 = eval_ineq_01(f, q, t), e2 = eval_ineq_02(f, q, t);
    CHECK(e1.lhs == norm(combo_A(f, t)));
    CHECK(e1.rhs_control == doctest::Approx(0.5 * norm(combo_B(f, t))).epsilon(1e-14));
    CHECK(e2.lhs == norm(combo_B(f, t)));
    CHECK(e2.rhs_control == doctest::Approx(0.5 * norm(combo_A(f, t))).epsilon(1e-14));
    const double prod = 0.2 * (std::pow(norm(t.x), 3) + std::pow(norm(t.y), 3)) *
                        (std::pow(norm(t.z), 3) + std::pow(norm(t.w), 3)) *
                        (std::pow(norm(t.a), 3) + std::pow(norm(t.b), 3));
    CHECK(e1.rhs_product == doctest::Approx(prod).epsilon(1e-13));
    CHECK(e1.slack == e1.rhs_control + e1.rhs_product - e1.lhs);
}

TEST_CASE("scalar form reduces to the plain form bit-for-bit")
{
    const TriFn f(radial_map());
    const StabilityParams p{0.5, 3.0, 0.1};
    for (std::uint64_t i = 0; i < 50; ++i) {
        const SampleTuple t = sample_tuple(kPoly3, 5, i, false);
        const IneqEvaluation a = eval_ineq_scalar(f, p, t, Variant::ScalarA), a0 = eval_ineq_01(f, p, t);
        const IneqEvaluation b = eval_ineq_scalar(f, p, t, Variant::ScalarB), b0 = eval_ineq_02(f, p, t);
        CHECK(a.lhs == a0.lhs);
        CHECK(a.rhs_control == a0.rhs_control);
        CHECK(a.slack == a0.slack);
        CHECK(b.lhs == b0.lhs);
        CHECK(b.slack == b0.slack);
    }
    SampleTuple t = sample_tuple(kPoly3, 5, 0, true);
    t.mu = 1.1;
    CHECK_THROWS(eval_ineq_scalar(f, p, t, Variant::ScalarA));
}

TEST_CASE("slack is monotone in theta")
{
    const TriFn f(radial_map());
    for (std::uint64_t i = 0; i < 100; ++i) {
        const SampleTuple t = sample_tuple(kPoly3, 6, i, false);
        double previous = -std::numeric_limits<double>::infinity();
        for (double theta : {0.0, 0.01, 0.1, 1.0, 10.0}) {
            const IneqEvaluation e = eval_ineq_01(f, StabilityParams{0.5, 3.0, theta}, t);
            CHECK(e.slack >= previous);
            previous = e.slack;
        }
    }
}

TEST_CASE("theta estimator")
{
    const StabilityParams p{0.5, 3.0, 0.0};
    CHECK(estimate_theta(TriMap{make_poly_triderivation(3)}, p, Variant::A, 42, 500) == 0.0);
    const AlgebraDescriptor m3(AlgebraKind::MatrixCStar, 3);
    CHECK(estimate_theta(TriMap{make_random_tensor(m3, m3, 1)}, p, Variant::ScalarB, 42, 500) == 0.0);
    const TriFn zero_map = [](const Element&, const Element&, const Element&) { return Element::zero(kPoly3); };
    CHECK(estimate_theta(zero_map, kPoly3, p, Variant::B, 42, 500) == 0.0);

    const TriMap f = radial_map();
    for (auto v : {Variant::A, Variant::B, Variant::ScalarA, Variant::ScalarB}) {
        const double theta_hat = estimate_theta(f, p, v, 42, 2000);
        // the substitution tuples alone force theta_hat >= 3 theta0 (first family) or 1.5 theta0 (second)
        CHECK(theta_hat >= (is_family_a(v) ? 0.3 : 0.15) * (1 - 1e-12));
        CHECK(theta_hat <= 1000 * 0.1);
        StabilityParams q = p;
        q.theta = theta_hat;
        const SlackSummary s = hypothesis_slack(TriFn(f), kPoly3, q, v, 42, 2000, 1e-10);
        CHECK(s.min_slack >= -1e-10);
        CHECK(s.violations == 0);
        q.theta = 0.5 * theta_hat;
        CHECK(hypothesis_slack(TriFn(f), kPoly3, q, v, 42, 2000, 1e-10).violations > 0);
        CHECK(estimate_theta(f, p, v, 42, 2000, 4) == theta_hat);
    }
}

TEST_CASE("substitution tuples")
{
    const SampleTuple t = sample_tuple(kPoly3, 1, 2, true);
    const SampleTuple a = substitution_tuple(t, Variant::A), b = substitution_tuple(t, Variant::ScalarB);
    CHECK(a.y.coeffs() == t.x.coeffs());
    CHECK(a.w.is_zero());
    CHECK(a.b.is_zero());
    CHECK(b.y.is_zero());
    CHECK(b.lambda == cplx(1.0));
    // on the substitution the first family reads |f(2x,z,a) - 2f(x,z,a)| against 2 theta |x|^r |z|^r |a|^r
    const TriFn f(radial_map());
    const double expected = norm(sub(f(scale(2.0, t.x), t.z, t.a), scale(2.0, f(t.x, t.z, t.a))));
    CHECK(norm(combo_A(f, a)) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("structural defects")
{
    const TriFn d(TriMap{make_poly_triderivation(3)});
    const TriFn f(radial_map());
    const Element o = Element::zero(kPoly3);
    for (std::uint64_t i = 0; i < 50; ++i) {
        const SampleTuple t = sample_tuple(kPoly3, 7, i, false);
        CHECK(derivation_defect(d, t.x, t.y, t.z, t.a) <= 1e-12 * (1 + std::pow(4.0, 4)));
        CHECK(derivation_defect(f, o, t.y, t.z, t.a) == 0.0);
        CHECK(permuting_defect(f, t.x, t.x, t.x) == 0.0);
        // naive oracle for the perturbed derivation defect
        const auto lhs = f(Element(kPoly3, oracle::mul(kPoly3, t.x.coeffs(), t.y.coeffs())), t.z, t.a).coeffs();
        auto ref = oracle::lin(1.0, lhs, -1.0, oracle::mul(kPoly3, f(t.x, t.z, t.a).coeffs(), t.y.coeffs()));
        ref = oracle::lin(1.0, ref, -1.0, oracle::mul(kPoly3, t.x.coeffs(), f(t.y, t.z, t.a).coeffs()));
        CHECK(derivation_defect(f, t.x, t.y, t.z, t.a) ==
              doctest::Approx(oracle::norm(kPoly3, ref)).epsilon(1e-12));
    }
    // explicit six-permutation oracle
    const AlgebraDescriptor p2(AlgebraKind::PointwiseCn, 2);
    const TriFn g(TriMap{make_random_tensor(p2, p2, 5)});
    const SampleTuple t = sample_tuple(p2, 8, 0, false);
    const Element base = g(t.x, t.z, t.a);
    double worst = 0.0;
    for (const auto& [p, q, r] : std::vector<std::array<const Element*, 3>>{
             {&t.x, &t.z, &t.a}, {&t.x, &t.a, &t.z}, {&t.z, &t.x, &t.a}, {&t.z, &t.a, &t.x}, {&t.a, &t.x, &t.z}, {&t.a, &t.z, &t.x}})
        worst = std::max(worst, oracle::norm(p2, oracle::lin(1.0, g(*p, *q, *r).coeffs(), -1.0, base.coeffs())));
    CHECK(permuting_defect(g, t.x, t.z, t.a) == doctest::Approx(worst).epsilon(1e-14));
    CHECK(worst > 1e-3);
}

TEST_CASE("homomorphism defect")
{
    const AlgebraDescriptor p3(AlgebraKind::PointwiseCn, 3);
    const TriMap h(make_pointwise_trihomomorphism(3, {1, 2, 0}), PerturbationSpec{PerturbationKind::Radial, 0.1, 3.0, 7});
    const Element o = Element::zero(p3);
    for (std::uint64_t i = 0; i < 30; ++i) {
        const SampleTuple t = sample_tuple(p3, 3, i, false);
        CHECK(hom_defect(h, o, t.y, t.z, t.w, t.a, t.b) == 0.0);
        const auto prod = [&](const Element& p, const Element& q) {
            return Element(p3, oracle::mul(p3, p.coeffs(), q.coeffs()));
        };
        const auto ref = oracle::lin(1.0, h(prod(t.x, t.y), prod(t.z, t.w), prod(t.a, t.b)).coeffs(), -1.0,
                                     oracle::mul(p3, h(t.x, t.z, t.a).coeffs(), h(t.y, t.w, t.b).coeffs()));
        CHECK(hom_defect(h, t.x, t.y, t.z, t.w, t.a, t.b) == doctest::Approx(oracle::norm(p3, ref)).epsilon(1e-12));
    }
}

TEST_CASE("unitary defects")
{
    const AlgebraDescriptor m2(AlgebraKind::MatrixCStar, 2);
    const TriMap f(make_inner_first_slot_derivation(2, random_element(m2, 3, 1.0)),
                   PerturbationSpec{PerturbationKind::Radial, 0.1, 3.0, 7});
    const TriMap d(make_inner_first_slot_derivation(2, random_element(m2, 3, 1.0)));
    const Element e = Element::one(m2);
    for (std::uint64_t i = 0; i < 30; ++i) {
        const SampleTuple t = sample_tuple(m2, 5, i, false);
        const Element u = random_unitary(m2, i), v = random_unitary(m2, i + 1000);
        CHECK(unitary_derivation_defect(f, e, t.y, t.z, t.a) ==
              doctest::Approx(norm(mul(f(e, t.z, t.a), t.y))).epsilon(1e-12));
        CHECK(unitary_derivation_defect(d, u, t.y, t.z, t.a) <= 1e-12 * 64);
        CHECK(unitary_pair_derivation_defect(d, u, v, t.z, t.a) <= 1e-12 * 16);
        const auto lhs = f(Element(m2, oracle::mul(m2, u.coeffs(), t.y.coeffs())), t.z, t.a).coeffs();
        auto ref = oracle::lin(1.0, lhs, -1.0, oracle::mul(m2, f(u, t.z, t.a).coeffs(), t.y.coeffs()));
        ref = oracle::lin(1.0, ref, -1.0, oracle::mul(m2, u.coeffs(), f(t.y, t.z, t.a).coeffs()));
        CHECK(unitary_derivation_defect(f, u, t.y, t.z, t.a) == doctest::Approx(oracle::norm(m2, ref)).epsilon(1e-8));
    }
    CHECK_THROWS(unitary_derivation_defect(f, scale(2.0, e), e, e, e));
    const std::array<Element, 6> es{e, e, e, e, e, e};
    const Element fe = f(e, e, e);
    CHECK(unitary_hom_defect(f, UnitaryHomMode::SixUnitaries, es) ==
          doctest::Approx(norm(sub(fe, mul(fe, fe)))).epsilon(1e-12));
    const std::array<Element, 6> bad{e, e, scale(2.0, e), e, e, e};
    CHECK_THROWS(unitary_hom_defect(f, UnitaryHomMode::SixUnitaries, bad));
    CHECK_NOTHROW(unitary_hom_defect(f, UnitaryHomMode::FirstUnitary, bad));
}

TEST_CASE("auxiliary theta estimators")
{
    const TriFn d(TriMap{make_poly_triderivation(3)});
    CHECK(estimate_leibniz_theta(d, kPoly3, 3.0, 1, 200) <= 1e-12);
    CHECK(estimate_permuting_theta(d, kPoly3, 3.0, 1, 200) <= 1e-12);
    const AlgebraDescriptor p3(AlgebraKind::PointwiseCn, 3);
    CHECK(estimate_hom_theta(TriFn(TriMap{make_pointwise_trihomomorphism(3, {0, 1, 2})}), p3, 3.0, 1, 200) <= 1e-12);
    CHECK(estimate_leibniz_theta(TriFn(radial_map()), kPoly3, 3.0, 1, 200) > 0.0);
}

}
