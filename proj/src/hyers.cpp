#include "tristab/hyers.hpp"

#include "tristab/parallel.hpp"
#include "tristab/rng.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace tristab {

std::string to_string(Direction d)
{
    return d == Direction::Contract ? "contract" : "dilate";
}

void HyersConfig::validate() const
{
    if (n_max < 2 || n_max > kMaxIterations)
        throw std::invalid_argument("n_max must lie in [2, " + std::to_string(kMaxIterations) + "], got " +
                                    std::to_string(n_max));
    if (!(cauchy_tol > 0.0))
        throw std::invalid_argument("cauchy_tol must be positive");
    if (r == 1.0)
        throw std::invalid_argument("r = 1 is excluded: both geometric series diverge");
    if (direction == Direction::Contract && !(r > 1.0))
        throw std::invalid_argument("contracting iteration requires r > 1 (got r = " + std::to_string(r) + ")");
    if (direction == Direction::Dilate && !(r < 1.0))
        throw std::invalid_argument("dilating iteration requires r < 1 (got r = " + std::to_string(r) + ")");
    if (!(theta_hat >= 0.0))
        throw std::invalid_argument("theta_hat must be >= 0");
}

HyersConfig HyersConfig::for_regime(double r, double theta_hat, Variant family, int n_max)
{
    if (r == 1.0)
        throw std::invalid_argument("r = 1 is excluded: both geometric series diverge");
    HyersConfig cfg;
    cfg.direction = r > 1.0 ? Direction::Contract : Direction::Dilate;
    cfg.n_max = n_max;
    cfg.r = r;
    cfg.theta_hat = theta_hat;
    cfg.family = family;
    cfg.validate();
    return cfg;
}

double tail_bound(const HyersConfig& cfg, int l, double norm_product)
{
    if (cfg.theta_hat == 0.0 || norm_product == 0.0)
        return 0.0;
    const double r = cfg.r;
    const double theta = cfg.theta_hat;
    const bool first = is_family_a(cfg.family);
    if (cfg.direction == Direction::Contract) {
        const double geo = std::exp2(l * (1.0 - r)) / (1.0 - std::exp2(1.0 - r));
        const double lead = first ? 2.0 * theta / std::exp2(r) : theta / 2.0;
        return lead * geo * norm_product;
    }
    const double geo = std::exp2(l * (r - 1.0)) / (1.0 - std::exp2(r - 1.0));
    const double lead = first ? theta : std::exp2(r) * theta / 4.0;
    return lead * geo * norm_product;
}

HyersResult hyers_limit(const TriFn& f, const HyersConfig& cfg, const Element& x, const Element& z, const Element& a)
{
    cfg.validate();
    const double product = std::pow(norm(x), cfg.r) * std::pow(norm(z), cfg.r) * std::pow(norm(a), cfg.r);
    HyersResult res{f(x, z, a), 0.0, 0.0, false, 0, {}};
    for (int n = 1; n <= cfg.n_max; ++n) {
        // Powers of two: argument and result rescaling are exact in binary64.
        const double factor = cfg.direction == Direction::Contract ? std::ldexp(1.0, -n) : std::ldexp(1.0, n);
        Element next = scale(1.0 / factor, f(scale(factor, x), z, a));
        res.last_step = norm(sub(next, res.value));
        res.tail_bound = tail_bound(cfg, n, product);
        res.value = std::move(next);
        res.iterations = n;
        res.curve.push_back({n, res.last_step, res.tail_bound});
        if (res.last_step <= cfg.cauchy_tol && res.tail_bound <= cfg.cauchy_tol) {
            res.converged = true;
            break;
        }
    }
    return res;
}

HyersLimit::HyersLimit(TriFn f, HyersConfig cfg) : f_(std::move(f)), cfg_(cfg), stats_(std::make_shared<Stats>())
{
    cfg_.validate();
}

HyersResult HyersLimit::result(const Element& x, const Element& z, const Element& a) const
{
    HyersResult res = hyers_limit(f_, cfg_, x, z, a);
    stats_->evaluations.fetch_add(1);
    if (!res.converged)
        stats_->unconverged.fetch_add(1);
    double seen = stats_->max_tail.load();
    while (res.tail_bound > seen && !stats_->max_tail.compare_exchange_weak(seen, res.tail_bound)) {
    }
    return res;
}

Element HyersLimit::operator()(const Element& x, const Element& z, const Element& a) const
{
    return result(x, z, a).value;
}

double HyersLimit::max_tail_bound() const noexcept
{
    return stats_->max_tail.load();
}

std::string to_string(BoundKind k)
{
    switch (k) {
    case BoundKind::T23: return "T23";
    case BoundKind::T24: return "T24";
    case BoundKind::T32: return "T32";
    case BoundKind::T33: return "T33";
    }
    return "?";
}

BoundKind bound_kind_for(Variant family, double r)
{
    if (r == 1.0)
        throw std::invalid_argument("r = 1 is excluded: both geometric series diverge");
    if (is_family_a(family))
        return r > 1.0 ? BoundKind::T23 : BoundKind::T24;
    return r > 1.0 ? BoundKind::T32 : BoundKind::T33;
}

double bound_constant(BoundKind kind, double theta, double r)
{
    const double p = std::exp2(r);
    double denom = 0.0;
    double numer = 0.0;
    switch (kind) {
    case BoundKind::T23: numer = 2.0 * theta; denom = p - 2.0; break;
    case BoundKind::T24: numer = 2.0 * theta; denom = 2.0 - p; break;
    case BoundKind::T32: numer = p * theta; denom = 2.0 * (p - 2.0); break;
    case BoundKind::T33: numer = p * theta; denom = 2.0 * (2.0 - p); break;
    }
    if (!(denom > 0.0))
        throw std::invalid_argument("bound " + to_string(kind) + " does not apply for r = " + std::to_string(r));
    return numer / denom;
}

BoundVerification verify_bound(const TriMap& f, const HyersConfig& cfg, const StabilityParams& p, BoundKind kind,
                               std::uint64_t sampler_seed, std::size_t count, std::optional<PremiseSample> premise,
                               unsigned workers)
{
    p.validate();
    cfg.validate();
    const double constant = bound_constant(kind, p.theta, p.r);
    const HyersLimit limit(TriFn(f), cfg);
    std::atomic<std::size_t> skipped{0};

    BoundVerification out;
    out.max_ratio = parallel_max(
        count, workers,
        [&](std::size_t i) {
            const SampleTuple t = sample_tuple(f.domain(), sampler_seed, i, false);
            const double product = std::pow(norm(t.x), p.r) * std::pow(norm(t.z), p.r) * std::pow(norm(t.a), p.r);
            const HyersResult lim = limit.result(t.x, t.z, t.a);
            const double gap = norm(sub(f(t.x, t.z, t.a), lim.value)) + lim.tail_bound;
            const double denom = constant * product;
            if (denom == 0.0) {
                if (gap == 0.0) {
                    skipped.fetch_add(1);
                    return 0.0;
                }
                return std::numeric_limits<double>::infinity();
            }
            return gap / denom;
        },
        0.0);
    out.skipped = skipped.load();
    out.unconverged = limit.unconverged();
    out.max_tail_bound = limit.max_tail_bound();
    out.pass = out.max_ratio <= 1.0 + kBoundRatioTolerance;
    if (premise) {
        StabilityParams q = p;
        out.premise = hypothesis_slack(TriFn(f), f.domain(), q, premise->variant, premise->seed, premise->count,
                                       premise->tolerance, workers);
        out.pass = out.pass && out.premise->violations == 0;
    }
    return out;
}

double check_triadditivity(const TriFn& limit, const AlgebraDescriptor& domain, std::uint64_t sampler_seed,
                           std::size_t count, unsigned workers)
{
    return parallel_max(
        count, workers,
        [&](std::size_t i) {
            const SampleTuple t = sample_tuple(domain, sampler_seed, i, false);
            const double nx = norm(t.x), ny = norm(t.y), nz = norm(t.z), nw = norm(t.w), na = norm(t.a),
                         nb = norm(t.b);
            const Element base = limit(t.x, t.z, t.a);
            const double s0 =
                norm(sub(sub(limit(add(t.x, t.y), t.z, t.a), base), limit(t.y, t.z, t.a))) / (1.0 + nx + ny + nz + na);
            const double s1 =
                norm(sub(sub(limit(t.x, add(t.z, t.w), t.a), base), limit(t.x, t.w, t.a))) / (1.0 + nx + nz + nw + na);
            const double s2 =
                norm(sub(sub(limit(t.x, t.z, add(t.a, t.b)), base), limit(t.x, t.z, t.b))) / (1.0 + nx + nz + na + nb);
            return std::max({s0, s1, s2});
        },
        0.0);
}

double check_trilinearity(const TriFn& limit, const AlgebraDescriptor& domain, std::uint64_t sampler_seed,
                          std::size_t count, unsigned workers)
{
    return parallel_max(
        count, workers,
        [&](std::size_t i) {
            const SampleTuple t = sample_tuple(domain, sampler_seed, i, true);
            CounterRng rng(sampler_seed ^ 0x7363616cULL, i);
            auto general = [&] {
                const double m = kSampleNormMin * std::exp(rng.uniform() * std::log(kSampleNormMax / kSampleNormMin));
                return m * rng.unit_phase();
            };
            const Element base = limit(t.x, t.z, t.a);
            const double size = norm(t.x) * norm(t.z) * norm(t.a);
            auto residual = [&](cplx l, cplx m, cplx e) {
                const cplx lme = l * m * e;
                const Element lhs = limit(scale(l, t.x), scale(m, t.z), scale(e, t.a));
                return norm(sub(lhs, scale(lme, base))) / (1.0 + std::abs(lme) * size);
            };
            const double unit = residual(t.lambda, t.mu, t.eta);
            const cplx gl = general(), gm = general(), ge = general();
            return std::max(unit, residual(gl, gm, ge));
        },
        0.0);
}

double check_uniqueness(const TriFn& f1, const TriFn& f2, const AlgebraDescriptor& domain, const HyersConfig& cfg,
                        std::uint64_t sampler_seed, std::size_t count, unsigned workers)
{
    const HyersLimit l1(f1, cfg);
    const HyersLimit l2(f2, cfg);
    return parallel_max(
        count, workers,
        [&](std::size_t i) {
            const SampleTuple t = sample_tuple(domain, sampler_seed, i, false);
            return norm(sub(l1(t.x, t.z, t.a), l2(t.x, t.z, t.a)));
        },
        0.0);
}

DerivationHyperstability check_hyperstability_derivation(const TriFn& limit, const AlgebraDescriptor& domain,
                                                         double r, std::uint64_t sampler_seed, std::size_t count,
                                                         unsigned workers)
{
    DerivationHyperstability out;
    out.derivation_in_scope = r > 2.0 || r < 1.0;
    out.permuting_in_scope = r != 1.0;
    out.derivation_residual = parallel_max(
        count, workers,
        [&](std::size_t i) {
            const SampleTuple t = sample_tuple(domain, sampler_seed, i, false);
            double worst = 0.0;
            for (int slot = 0; slot < 3; ++slot)
                worst = std::max(worst, derivation_defect_slot(limit, slot, t.x, t.y, t.z, t.a));
            return worst;
        },
        0.0);
    out.permuting_residual = parallel_max(
        count, workers,
        [&](std::size_t i) {
            const SampleTuple t = sample_tuple(domain, sampler_seed, i, false);
            return permuting_defect(limit, t.x, t.z, t.a);
        },
        0.0);
    return out;
}

HomHyperstability check_hyperstability_hom(const TriFn& limit, const AlgebraDescriptor& domain, double r,
                                           std::uint64_t sampler_seed, std::size_t count, unsigned workers)
{
    HomHyperstability out;
    out.in_scope = r > 2.0 || r < 1.0;
    out.hom_residual = parallel_max(
        count, workers,
        [&](std::size_t i) {
            const SampleTuple t = sample_tuple(domain, sampler_seed, i, false);
            return hom_defect(limit, t.x, t.y, t.z, t.w, t.a, t.b);
        },
        0.0);
    out.permuting_residual = parallel_max(
        count, workers,
        [&](std::size_t i) {
            const SampleTuple t = sample_tuple(domain, sampler_seed, i, false);
            return permuting_defect(limit, t.x, t.z, t.a);
        },
        0.0);
    return out;
}

double check_fixed_scaling(const TriFn& f, const AlgebraDescriptor& domain, std::uint64_t sampler_seed,
                           std::size_t count)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        const SampleTuple t = sample_tuple(domain, sampler_seed, i, false);
        worst = std::max(worst, norm(sub(f(scale(2.0, t.x), t.z, t.a), scale(2.0, f(t.x, t.z, t.a)))));
    }
    return worst;
}

UnitaryExtension check_unitary_derivation_extension(const TriFn& limit, const AlgebraDescriptor& alg,
                                                    std::uint64_t sampler_seed, std::size_t count)
{
    UnitaryExtension out;
    for (std::size_t i = 0; i < count; ++i) {
        const SampleTuple t = sample_tuple(alg, sampler_seed, i, false);
        const Element& x = t.x;
        const Element& y = t.y;
        const Element ly = limit(y, t.z, t.a);
        const Element direct = sub(sub(limit(mul(x, y), t.z, t.a), mul(limit(x, t.z, t.a), y)), mul(x, ly));

        Element rebuilt = Element::zero(alg);
        for (const auto& term : unitary_decompose(x)) {
            const Element& u = term.unitary;
            const Element piece = sub(sub(limit(mul(u, y), t.z, t.a), mul(limit(u, t.z, t.a), y)), mul(u, ly));
            rebuilt = add(rebuilt, scale(term.weight, piece));
        }
        out.direct_residual = std::max(out.direct_residual, norm(direct));
        out.reconstructed_residual = std::max(out.reconstructed_residual, norm(rebuilt));
        out.disagreement = std::max(out.disagreement, norm(sub(rebuilt, direct)));
    }
    return out;
}

} // namespace tristab
