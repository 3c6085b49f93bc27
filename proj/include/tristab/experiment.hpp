#pragma once

#include "tristab/inequality.hpp"
#include "tristab/report.hpp"
#include "tristab/trimap.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace tristab {

enum class MapRecipe { ExactTrilinear, PolyTriderivation, PolyTrihom, PointwiseTrihom, InnerDerivation };
enum class Suite { Inequality, Stability, Derivation, Homomorphism, Unitary };

std::string to_string(MapRecipe m);
MapRecipe map_recipe_from_string(const std::string& name);
std::string to_string(Suite s);

/// Default recipe for a suite on a given algebra kind.
MapRecipe default_recipe(Suite suite, AlgebraKind kind);

struct Tolerances {
    double cancellation = 1e-12;
    double slack = 1e-10;
    double bound_ratio = kBoundRatioTolerance;
    double limit = 1e-8;
    double exact_match = 1e-9;
    double roundtrip = 1e-10;
    double oracle = 1e-8;
    double fixed_scaling = 1e-10;
};

struct ExperimentConfig {
    AlgebraDescriptor algebra{AlgebraKind::TruncatedPoly, 3};
    MapRecipe recipe = MapRecipe::PolyTriderivation;
    PerturbationKind perturbation = PerturbationKind::Radial;
    double theta0 = 0.0;
    std::uint64_t direction_seed = 7;
    /// s and r; params.theta is ignored in favour of theta_override or the estimate.
    StabilityParams params;
    std::optional<double> theta_override;
    /// theta = theta_factor * theta_hat when no override is given.
    double theta_factor = 1.0;
    Variant variant = Variant::A;
    Suite suite = Suite::Stability;
    std::uint64_t seed = 42;
    std::size_t sample_count = 1000;
    /// Estimator sample size; 0 means 10 * sample_count.
    std::size_t estimate_count = 0;
    int n_max = 48;
    unsigned workers = 1;
    std::size_t curve_probes = 3;
    Tolerances tol;

    /// Throws std::invalid_argument naming the violated constraint.
    void validate() const;
    std::size_t estimator_samples() const noexcept { return estimate_count ? estimate_count : 10 * sample_count; }
};

nlohmann::json config_to_json(const ExperimentConfig& cfg);

/// The exact tensor and perturbed map a config describes.
TrilinearTensor build_exact(const ExperimentConfig& cfg);
TriMap build_map(const ExperimentConfig& cfg);

/// Runs the configured suite. Deterministic for a fixed config; the worker count
/// affects wall-clock only. Non-convergence is recorded, never thrown.
VerificationReport run_suite(const ExperimentConfig& cfg);

} // namespace tristab
