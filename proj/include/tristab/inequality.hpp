#pragma once

#include "tristab/algebra.hpp"
#include "tristab/trimap.hpp"

#include <cstdint>
#include <string>

namespace tristab {

/// (s, r, theta): |s| < 1, s != 0, theta >= 0.
struct StabilityParams {
    cplx s{0.5, 0.0};
    double r = 3.0;
    double theta = 0.0;

    void validate() const;
};

enum class Variant { A, B, ScalarA, ScalarB };

std::string to_string(Variant v);
Variant variant_from_string(const std::string& name);
/// A and ScalarA share the companion-defect family of the first inequality; B and ScalarB the second.
bool is_family_a(Variant v) noexcept;
bool is_scalar(Variant v) noexcept;

struct SampleTuple {
    Element x, y, z, w, a, b;
    cplx lambda{1.0}, mu{1.0}, eta{1.0};
};

struct IneqEvaluation {
    double lhs = 0.0;
    double rhs_control = 0.0;
    double rhs_product = 0.0;
    double slack = 0.0;
};

/// Norm range used by every sampler: |.| log-uniform in [1/4, 4].
inline constexpr double kSampleNormMin = 0.25;
inline constexpr double kSampleNormMax = 4.0;

/// Tuple number `index` of the stream `seed`: six elements with norms log-uniform in
/// [norm_min, norm_max] and, when `unit_scalars` is set, three uniform unit-circle
/// scalars (otherwise all 1).
SampleTuple sample_tuple(const AlgebraDescriptor& domain, std::uint64_t seed, std::uint64_t index,
                         bool unit_scalars, double norm_min = kSampleNormMin, double norm_max = kSampleNormMax);

/// f(x+y, z-w, a+b) + f(x-y, z+w, a-b) - 2f(x,z,a) + 2f(x,w,b) - 2f(y,z,b) + 2f(y,w,a)
Element combo_A(const TriFn& f, const SampleTuple& t);
/// 2f((x+y)/2, z-w, a+b) + 2f((x-y)/2, z+w, a-b) with the same six-term tail.
Element combo_B(const TriFn& f, const SampleTuple& t);
/// combo_A with lambda, mu, eta applied to the arguments of the first two terms and
/// the product lambda*mu*eta applied to the tail. Unit scalars reproduce combo_A bit-for-bit.
Element scaled_combo_A(const TriFn& f, const SampleTuple& t);
Element scaled_combo_B(const TriFn& f, const SampleTuple& t);

/// theta (|x|^r + |y|^r)(|z|^r + |w|^r)(|a|^r + |b|^r)
double control_product(const SampleTuple& t, double r);

IneqEvaluation eval_ineq_01(const TriFn& f, const StabilityParams& p, const SampleTuple& t);
IneqEvaluation eval_ineq_02(const TriFn& f, const StabilityParams& p, const SampleTuple& t);
/// Scaled left-hand sides; the control term on the right stays unscaled.
IneqEvaluation eval_ineq_scalar(const TriFn& f, const StabilityParams& p, const SampleTuple& t, Variant variant);
IneqEvaluation eval_ineq(const TriFn& f, const StabilityParams& p, const SampleTuple& t, Variant variant);

/// |f(xy,z,a) - f(x,z,a) y - x f(y,z,a)|
double derivation_defect(const TriFn& f, const Element& x, const Element& y, const Element& z, const Element& a);
/// Leibniz defect in slot 0, 1 or 2, the other two slots held at (z, a) in order.
double derivation_defect_slot(const TriFn& f, int slot, const Element& x, const Element& y, const Element& z,
                              const Element& a);
/// max over the six permutations of |f(x_s1, x_s2, x_s3) - f(x1, x2, x3)|
double permuting_defect(const TriFn& f, const Element& x1, const Element& x2, const Element& x3);
/// |f(xy, zw, ab) - f(x,z,a) f(y,w,b)|
double hom_defect(const TriFn& f, const Element& x, const Element& y, const Element& z, const Element& w,
                  const Element& a, const Element& b);

inline constexpr double kUnitaryTolerance = 1e-10;

/// derivation_defect with a unitary first argument.
double unitary_derivation_defect(const TriFn& f, const Element& u, const Element& y, const Element& z,
                                 const Element& a);
/// Pair mode: |f(uv, z, a) - f(u,z,a) v - u f(v,z,a)| with u, v unitary.
double unitary_pair_derivation_defect(const TriFn& f, const Element& u, const Element& v, const Element& z,
                                      const Element& a);

enum class UnitaryHomMode { FirstUnitary, SixUnitaries };

/// FirstUnitary: args = (u, y, z, w, a, b), |f(uy, zw, ab) - f(u,z,a) f(y,w,b)|, u unitary.
/// SixUnitaries: args = (u1..u6), |f(u1u2, u3u4, u5u6) - f(u1,u3,u5) f(u2,u4,u6)|, all unitary.
double unitary_hom_defect(const TriFn& f, UnitaryHomMode mode, const std::array<Element, 6>& args);

/// The specialisation the stability bounds are derived from: y = x, w = b = 0 for the
/// first family, y = w = b = 0 for the second; scalars reset to 1.
SampleTuple substitution_tuple(const SampleTuple& t, Variant variant);

/// Excess lhs - rhs_control at or below this is cancellation rounding and counts as zero.
inline constexpr double kEstimatorFloor = 1e-12;

/// Smallest theta making the sampled inequality hold on `count` seeded tuples, each
/// evaluated together with its substitution_tuple:
/// max of max(0, lhs - rhs_control) / product(sums of powers); zero-denominator tuples skipped.
double estimate_theta(const TriFn& f, const AlgebraDescriptor& domain, const StabilityParams& p, Variant variant,
                      std::uint64_t sampler_seed, std::size_t count, unsigned workers = 1);
double estimate_theta(const TriMap& f, const StabilityParams& p, Variant variant, std::uint64_t sampler_seed,
                      std::size_t count, unsigned workers = 1);

struct SlackSummary {
    double min_slack = 0.0;
    std::size_t violations = 0;
};

/// Re-evaluates the estimator's tuple set at the supplied theta.
SlackSummary hypothesis_slack(const TriFn& f, const AlgebraDescriptor& domain, const StabilityParams& p,
                              Variant variant, std::uint64_t sampler_seed, std::size_t count, double tolerance,
                              unsigned workers = 1);

/// Empirical theta for the approximate Leibniz rule: max derivation_defect / ((|x|^r + |y|^r)|z|^r |a|^r).
double estimate_leibniz_theta(const TriFn& f, const AlgebraDescriptor& domain, double r, std::uint64_t seed,
                              std::size_t count);
/// Empirical theta for approximate symmetry: max permuting_defect / (|x1|^r |x2|^r |x3|^r).
double estimate_permuting_theta(const TriFn& f, const AlgebraDescriptor& domain, double r, std::uint64_t seed,
                                std::size_t count);
/// Empirical theta for approximate multiplicativity: max hom_defect / product(sums of powers).
double estimate_hom_theta(const TriFn& f, const AlgebraDescriptor& domain, double r, std::uint64_t seed,
                          std::size_t count);

} // namespace tristab
