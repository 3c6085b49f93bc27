#include "tristab/inequality.hpp"

#include "tristab/parallel.hpp"
#include "tristab/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace tristab {

namespace {

// Scaling by an exact 1 is skipped so the scalar forms reduce bit-for-bit.
Element scale_if(cplx lambda, const Element& x)
{
    return lambda == cplx(1.0) ? x : scale(lambda, x);
}

Element tail(const TriFn& f, const SampleTuple& t)
{
    // 2f(x,z,a) - 2f(x,w,b) + 2f(y,z,b) - 2f(y,w,a)
    Element acc = scale(2.0, f(t.x, t.z, t.a));
    acc = sub(acc, scale(2.0, f(t.x, t.w, t.b)));
    acc = add(acc, scale(2.0, f(t.y, t.z, t.b)));
    acc = sub(acc, scale(2.0, f(t.y, t.w, t.a)));
    return acc;
}

Element combo_a_impl(const TriFn& f, const SampleTuple& t, cplx lambda, cplx mu, cplx eta)
{
    const Element t1 = f(scale_if(lambda, add(t.x, t.y)), scale_if(mu, sub(t.z, t.w)), scale_if(eta, add(t.a, t.b)));
    const Element t2 = f(scale_if(lambda, sub(t.x, t.y)), scale_if(mu, add(t.z, t.w)), scale_if(eta, sub(t.a, t.b)));
    return sub(add(t1, t2), scale_if(lambda * mu * eta, tail(f, t)));
}

Element combo_b_impl(const TriFn& f, const SampleTuple& t, cplx lambda, cplx mu, cplx eta)
{
    const Element t1 = scale(2.0, f(scale_if(lambda, scale(0.5, add(t.x, t.y))), scale_if(mu, sub(t.z, t.w)),
                                    scale_if(eta, add(t.a, t.b))));
    const Element t2 = scale(2.0, f(scale_if(lambda, scale(0.5, sub(t.x, t.y))), scale_if(mu, add(t.z, t.w)),
                                    scale_if(eta, sub(t.a, t.b))));
    return sub(add(t1, t2), scale_if(lambda * mu * eta, tail(f, t)));
}

void require_unit(cplx c, const char* name)
{
    if (std::abs(std::abs(c) - 1.0) > 1e-14)
        throw std::invalid_argument(std::string("eval_ineq_scalar: ") + name + " must have modulus 1");
}

void require_unitary(const Element& u, const char* op)
{
    if (!is_unitary(u, kUnitaryTolerance))
        throw std::invalid_argument(std::string(op) + ": argument is not unitary (tolerance 1e-10)");
}

double powr(double v, double r)
{
    return std::pow(v, r);
}

} // namespace

void StabilityParams::validate() const
{
    if (!(std::abs(s) < 1.0))
        throw std::invalid_argument("stability parameter s must satisfy |s| < 1 (got |s| = " +
                                    std::to_string(std::abs(s)) + ")");
    if (s == cplx(0.0))
        throw std::invalid_argument("stability parameter s must be nonzero");
    if (!(theta >= 0.0))
        throw std::invalid_argument("theta must be >= 0");
    if (!std::isfinite(r))
        throw std::invalid_argument("r must be finite");
}

std::string to_string(Variant v)
{
    switch (v) {
    case Variant::A: return "A";
    case Variant::B: return "B";
    case Variant::ScalarA: return "scalarA";
    case Variant::ScalarB: return "scalarB";
    }
    return "?";
}

Variant variant_from_string(const std::string& name)
{
    if (name == "A") return Variant::A;
    if (name == "B") return Variant::B;
    if (name == "scalarA") return Variant::ScalarA;
    if (name == "scalarB") return Variant::ScalarB;
    throw std::invalid_argument("unknown variant '" + name + "' (expected A, B, scalarA or scalarB)");
}

bool is_family_a(Variant v) noexcept
{
    return v == Variant::A || v == Variant::ScalarA;
}

bool is_scalar(Variant v) noexcept
{
    return v == Variant::ScalarA || v == Variant::ScalarB;
}

SampleTuple sample_tuple(const AlgebraDescriptor& domain, std::uint64_t seed, std::uint64_t index, bool unit_scalars,
                         double norm_min, double norm_max)
{
    if (!(norm_min > 0.0) || !(norm_max >= norm_min))
        throw std::invalid_argument("sample_tuple: need 0 < norm_min <= norm_max");
    CounterRng rng(seed, index);
    auto draw = [&] {
        const double n = norm_min * std::exp(rng.uniform() * std::log(norm_max / norm_min));
        return random_element(domain, rng.next_u64(), n);
    };
    Element x = draw(), y = draw(), z = draw(), w = draw(), a = draw(), b = draw();
    SampleTuple t{std::move(x), std::move(y), std::move(z), std::move(w), std::move(a), std::move(b)};
    if (unit_scalars) {
        t.lambda = rng.unit_phase();
        t.mu = rng.unit_phase();
        t.eta = rng.unit_phase();
    }
    return t;
}

Element combo_A(const TriFn& f, const SampleTuple& t)
{
    return combo_a_impl(f, t, 1.0, 1.0, 1.0);
}

Element combo_B(const TriFn& f, const SampleTuple& t)
{
    return combo_b_impl(f, t, 1.0, 1.0, 1.0);
}

Element scaled_combo_A(const TriFn& f, const SampleTuple& t)
{
    return combo_a_impl(f, t, t.lambda, t.mu, t.eta);
}

Element scaled_combo_B(const TriFn& f, const SampleTuple& t)
{
    return combo_b_impl(f, t, t.lambda, t.mu, t.eta);
}

double control_product(const SampleTuple& t, double r)
{
    return (powr(norm(t.x), r) + powr(norm(t.y), r)) * (powr(norm(t.z), r) + powr(norm(t.w), r)) *
           (powr(norm(t.a), r) + powr(norm(t.b), r));
}

namespace {

IneqEvaluation finish(double lhs, double rhs_control, const StabilityParams& p, const SampleTuple& t)
{
    IneqEvaluation e;
    e.lhs = lhs;
    e.rhs_control = rhs_control;
    e.rhs_product = p.theta == 0.0 ? 0.0 : p.theta * control_product(t, p.r);
    e.slack = e.rhs_control + e.rhs_product - e.lhs;
    return e;
}

} // namespace

IneqEvaluation eval_ineq_01(const TriFn& f, const StabilityParams& p, const SampleTuple& t)
{
    p.validate();
    return finish(norm(combo_A(f, t)), norm(scale(p.s, combo_B(f, t))), p, t);
}

IneqEvaluation eval_ineq_02(const TriFn& f, const StabilityParams& p, const SampleTuple& t)
{
    p.validate();
    return finish(norm(combo_B(f, t)), norm(scale(p.s, combo_A(f, t))), p, t);
}

IneqEvaluation eval_ineq_scalar(const TriFn& f, const StabilityParams& p, const SampleTuple& t, Variant variant)
{
    p.validate();
    require_unit(t.lambda, "lambda");
    require_unit(t.mu, "mu");
    require_unit(t.eta, "eta");
    if (is_family_a(variant))
        return finish(norm(scaled_combo_A(f, t)), norm(scale(p.s, combo_B(f, t))), p, t);
    return finish(norm(scaled_combo_B(f, t)), norm(scale(p.s, combo_A(f, t))), p, t);
}

IneqEvaluation eval_ineq(const TriFn& f, const StabilityParams& p, const SampleTuple& t, Variant variant)
{
    switch (variant) {
    case Variant::A: return eval_ineq_01(f, p, t);
    case Variant::B: return eval_ineq_02(f, p, t);
    default: return eval_ineq_scalar(f, p, t, variant);
    }
}

double derivation_defect(const TriFn& f, const Element& x, const Element& y, const Element& z, const Element& a)
{
    return derivation_defect_slot(f, 0, x, y, z, a);
}

double derivation_defect_slot(const TriFn& f, int slot, const Element& x, const Element& y, const Element& z,
                              const Element& a)
{
    auto call = [&](const Element& v) {
        switch (slot) {
        case 0: return f(v, z, a);
        case 1: return f(z, v, a);
        case 2: return f(z, a, v);
        }
        throw std::invalid_argument("derivation_defect_slot: slot must be 0, 1 or 2");
    };
    const Element lhs = call(mul(x, y));
    return norm(sub(sub(lhs, mul(call(x), y)), mul(x, call(y))));
}

double permuting_defect(const TriFn& f, const Element& x1, const Element& x2, const Element& x3)
{
    const Element base = f(x1, x2, x3);
    const std::array<const Element*, 3> xs{&x1, &x2, &x3};
    constexpr std::array<std::array<int, 3>, 5> perms{{{0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
    double worst = 0.0;
    for (const auto& p : perms)
        worst = std::max(worst, norm(sub(f(*xs[p[0]], *xs[p[1]], *xs[p[2]]), base)));
    return worst;
}

double hom_defect(const TriFn& f, const Element& x, const Element& y, const Element& z, const Element& w,
                  const Element& a, const Element& b)
{
    return norm(sub(f(mul(x, y), mul(z, w), mul(a, b)), mul(f(x, z, a), f(y, w, b))));
}

double unitary_derivation_defect(const TriFn& f, const Element& u, const Element& y, const Element& z,
                                 const Element& a)
{
    require_unitary(u, "unitary_derivation_defect");
    return derivation_defect(f, u, y, z, a);
}

double unitary_pair_derivation_defect(const TriFn& f, const Element& u, const Element& v, const Element& z,
                                      const Element& a)
{
    require_unitary(u, "unitary_pair_derivation_defect");
    require_unitary(v, "unitary_pair_derivation_defect");
    return derivation_defect(f, u, v, z, a);
}

double unitary_hom_defect(const TriFn& f, UnitaryHomMode mode, const std::array<Element, 6>& args)
{
    if (mode == UnitaryHomMode::FirstUnitary) {
        require_unitary(args[0], "unitary_hom_defect");
        return hom_defect(f, args[0], args[1], args[2], args[3], args[4], args[5]);
    }
    for (const auto& u : args)
        require_unitary(u, "unitary_hom_defect");
    return hom_defect(f, args[0], args[1], args[2], args[3], args[4], args[5]);
}

SampleTuple substitution_tuple(const SampleTuple& t, Variant variant)
{
    SampleTuple u = t;
    const Element zero = Element::zero(t.x.algebra());
    u.y = is_family_a(variant) ? t.x : zero;
    u.w = zero;
    u.b = zero;
    u.lambda = u.mu = u.eta = 1.0;
    return u;
}

double estimate_theta(const TriFn& f, const AlgebraDescriptor& domain, const StabilityParams& p, Variant variant,
                      std::uint64_t sampler_seed, std::size_t count, unsigned workers)
{
    p.validate();
    if (count < 1)
        throw std::invalid_argument("estimate_theta: count must be >= 1");
    StabilityParams bare = p;
    bare.theta = 0.0;
    return parallel_max(
        count, workers,
        [&](std::size_t i) {
            const SampleTuple t = sample_tuple(domain, sampler_seed, i, is_scalar(variant));
            double best = 0.0;
            for (const SampleTuple& u : {t, substitution_tuple(t, variant)}) {
                const double denom = control_product(u, p.r);
                if (!(denom > 0.0))
                    continue;
                const IneqEvaluation e = eval_ineq(f, bare, u, variant);
                const double excess = e.lhs - e.rhs_control;
                if (excess > kEstimatorFloor)
                    best = std::max(best, excess / denom);
            }
            return best;
        },
        0.0);
}

double estimate_theta(const TriMap& f, const StabilityParams& p, Variant variant, std::uint64_t sampler_seed,
                      std::size_t count, unsigned workers)
{
    return estimate_theta(TriFn(f), f.domain(), p, variant, sampler_seed, count, workers);
}

SlackSummary hypothesis_slack(const TriFn& f, const AlgebraDescriptor& domain, const StabilityParams& p,
                              Variant variant, std::uint64_t sampler_seed, std::size_t count, double tolerance,
                              unsigned workers)
{
    p.validate();
    std::vector<double> slacks(count);
    // Fill in parallel, then reduce serially so the violation count is exact.
    parallel_max(count, workers, [&](std::size_t i) {
        const SampleTuple t = sample_tuple(domain, sampler_seed, i, is_scalar(variant));
        slacks[i] = std::min(eval_ineq(f, p, t, variant).slack,
                             eval_ineq(f, p, substitution_tuple(t, variant), variant).slack);
        return 0.0;
    });
    SlackSummary s;
    s.min_slack = count ? slacks[0] : 0.0;
    for (double v : slacks) {
        s.min_slack = std::min(s.min_slack, v);
        if (v < -tolerance)
            ++s.violations;
    }
    return s;
}

double estimate_leibniz_theta(const TriFn& f, const AlgebraDescriptor& domain, double r, std::uint64_t seed,
                              std::size_t count)
{
    double best = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        const SampleTuple t = sample_tuple(domain, seed, i, false);
        const double denom = (powr(norm(t.x), r) + powr(norm(t.y), r)) * powr(norm(t.z), r) * powr(norm(t.a), r);
        best = std::max(best, derivation_defect(f, t.x, t.y, t.z, t.a) / denom);
    }
    return best;
}

double estimate_permuting_theta(const TriFn& f, const AlgebraDescriptor& domain, double r, std::uint64_t seed,
                                std::size_t count)
{
    double best = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        const SampleTuple t = sample_tuple(domain, seed, i, false);
        const double denom = powr(norm(t.x), r) * powr(norm(t.z), r) * powr(norm(t.a), r);
        best = std::max(best, permuting_defect(f, t.x, t.z, t.a) / denom);
    }
    return best;
}

double estimate_hom_theta(const TriFn& f, const AlgebraDescriptor& domain, double r, std::uint64_t seed,
                          std::size_t count)
{
    double best = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        const SampleTuple t = sample_tuple(domain, seed, i, false);
        best = std::max(best, hom_defect(f, t.x, t.y, t.z, t.w, t.a, t.b) / control_product(t, r));
    }
    return best;
}

} // namespace tristab
