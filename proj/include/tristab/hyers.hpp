#pragma once

#include "tristab/algebra.hpp"
#include "tristab/inequality.hpp"
#include "tristab/trimap.hpp"

#include <atomic>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace tristab {

/// Contract: 2^n f(x/2^n, z, a), for r > 1.  Dilate: 2^-n f(2^n x, z, a), for r < 1.
enum class Direction { Contract, Dilate };

std::string to_string(Direction d);

/// Largest admissible iteration count; past it x/2^n drives the r >= 3 perturbation
/// below binary64 resolution and 2^n x approaches the exponent range.
inline constexpr int kMaxIterations = 48;

struct HyersConfig {
    Direction direction = Direction::Contract;
    int n_max = kMaxIterations;
    double cauchy_tol = 1e-11;
    /// Exponent of the control function; selects the regime and the tail formula.
    double r = 3.0;
    /// Empirical theta feeding the geometric tail majorant.
    double theta_hat = 0.0;
    /// Which inequality family theta_hat came from (first or second).
    Variant family = Variant::A;

    void validate() const;

    /// Direction picked from r (r > 1 contracts, r < 1 dilates; r == 1 throws).
    static HyersConfig for_regime(double r, double theta_hat, Variant family, int n_max = kMaxIterations);
};

struct HyersStep {
    int n = 0;
    double last_step = 0.0;
    double tail_bound = 0.0;
};

struct HyersResult {
    Element value;
    double last_step = 0.0;
    double tail_bound = 0.0;
    bool converged = false;
    int iterations = 0;
    std::vector<HyersStep> curve;
};

/// Closed-form remainder of the geometric series of one-step estimates from index l on:
///   Contract/A: (2 theta / 2^r) 2^{l(1-r)} / (1 - 2^{1-r})
///   Dilate/A:   theta 2^{l(r-1)} / (1 - 2^{r-1})
///   Contract/B: (theta / 2) 2^{l(1-r)} / (1 - 2^{1-r})
///   Dilate/B:   (2^r theta / 4) 2^{l(r-1)} / (1 - 2^{r-1})
/// each times |x|^r |z|^r |a|^r.
double tail_bound(const HyersConfig& cfg, int l, double norm_product);

/// Iterates until both |iterate_n - iterate_{n-1}| and the tail majorant drop below
/// cauchy_tol, or n_max is reached (converged = false; the caller decides).
HyersResult hyers_limit(const TriFn& f, const HyersConfig& cfg, const Element& x, const Element& z, const Element& a);

/// L = lim of the direct-method iterates of f, callable as a TriFn. Copies share
/// counters of non-converged evaluations and the largest tail majorant seen.
class HyersLimit {
public:
    HyersLimit(TriFn f, HyersConfig cfg);

    Element operator()(const Element& x, const Element& z, const Element& a) const;
    HyersResult result(const Element& x, const Element& z, const Element& a) const;

    const HyersConfig& config() const noexcept { return cfg_; }
    std::size_t unconverged() const noexcept { return stats_->unconverged.load(); }
    std::size_t evaluations() const noexcept { return stats_->evaluations.load(); }
    double max_tail_bound() const noexcept;

private:
    struct Stats {
        std::atomic<std::size_t> unconverged{0};
        std::atomic<std::size_t> evaluations{0};
        std::atomic<double> max_tail{0.0};
    };
    TriFn f_;
    HyersConfig cfg_;
    std::shared_ptr<Stats> stats_;
};

enum class BoundKind { T23, T24, T32, T33 };

std::string to_string(BoundKind k);
/// First-family bounds for A/scalarA, second-family for B/scalarB; contract vs dilate from r.
BoundKind bound_kind_for(Variant family, double r);
/// T23: 2θ/(2^r-2)  T24: 2θ/(2-2^r)  T32: 2^rθ/(2(2^r-2))  T33: 2^rθ/(2(2-2^r)).
/// Throws when the denominator is not positive for this r.
double bound_constant(BoundKind kind, double theta, double r);

struct PremiseSample {
    Variant variant = Variant::A;
    std::uint64_t seed = 0;
    std::size_t count = 0;
    double tolerance = 1e-10;
};

struct BoundVerification {
    double max_ratio = 0.0;
    std::size_t skipped = 0;
    std::size_t unconverged = 0;
    double max_tail_bound = 0.0;
    std::optional<SlackSummary> premise;
    bool pass = false;
};

inline constexpr double kBoundRatioTolerance = 1e-6;

/// max over seeded triples of (|f - L_n| + tail_n) / (C(kind, theta, r) |x|^r |z|^r |a|^r).
/// The tail term makes the ratio an upper estimate for the true limit even when L_n
/// has not converged. When `premise` is given, the hypothesis inequality at p.theta is
/// re-checked on that sample set and a violated premise fails the verification.
BoundVerification verify_bound(const TriMap& f, const HyersConfig& cfg, const StabilityParams& p, BoundKind kind,
                               std::uint64_t sampler_seed, std::size_t count,
                               std::optional<PremiseSample> premise = std::nullopt, unsigned workers = 1);

/// max over samples and slots of |L(x+x',z,a) - L(x,z,a) - L(x',z,a)| / (1 + |x| + |x'| + |z| + |a|).
double check_triadditivity(const TriFn& limit, const AlgebraDescriptor& domain, std::uint64_t sampler_seed,
                           std::size_t count, unsigned workers = 1);

/// max of |L(λx, μz, ηa) - λμη L(x,z,a)| / (1 + |λμη| |x||z||a|) with scalars drawn
/// (i) on the unit circle and (ii) with modulus log-uniform in [1/4, 4].
double check_trilinearity(const TriFn& limit, const AlgebraDescriptor& domain, std::uint64_t sampler_seed,
                          std::size_t count, unsigned workers = 1);

/// max |L1(x,z,a) - L2(x,z,a)| for the direct-method limits of two maps.
double check_uniqueness(const TriFn& f1, const TriFn& f2, const AlgebraDescriptor& domain, const HyersConfig& cfg,
                        std::uint64_t sampler_seed, std::size_t count, unsigned workers = 1);

struct DerivationHyperstability {
    double derivation_residual = 0.0;
    double permuting_residual = 0.0;
    /// Leibniz decay 4^n / 2^{rn} (contract) needs r > 2; the dilating analogue holds for r < 1.
    bool derivation_in_scope = false;
    bool permuting_in_scope = false;
};

DerivationHyperstability check_hyperstability_derivation(const TriFn& limit, const AlgebraDescriptor& domain,
                                                         double r, std::uint64_t sampler_seed, std::size_t count,
                                                         unsigned workers = 1);

struct HomHyperstability {
    double hom_residual = 0.0;
    double permuting_residual = 0.0;
    bool in_scope = false;
};

HomHyperstability check_hyperstability_hom(const TriFn& limit, const AlgebraDescriptor& domain, double r,
                                           std::uint64_t sampler_seed, std::size_t count, unsigned workers = 1);

/// max |f(2x,z,a) - 2 f(x,z,a)|.
double check_fixed_scaling(const TriFn& f, const AlgebraDescriptor& domain, std::uint64_t sampler_seed,
                           std::size_t count);

struct UnitaryExtension {
    double direct_residual = 0.0;
    double reconstructed_residual = 0.0;
    double disagreement = 0.0;
};

/// Leibniz defect of L at general x, evaluated directly and re-assembled from the
/// unitary pieces of x = sum λ_j u_j.
UnitaryExtension check_unitary_derivation_extension(const TriFn& limit, const AlgebraDescriptor& alg,
                                                    std::uint64_t sampler_seed, std::size_t count);

} // namespace tristab
