#pragma once

#include "tristab/algebra.hpp"

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace tristab {

/// Any map A^3 -> B; the common currency of the defect and limit checks.
using TriFn = std::function<Element(const Element&, const Element&, const Element&)>;

/// Exact C-trilinear map given by D(e_i, e_j, e_k) = sum_l T[i][j][k][l] f_l.
class TrilinearTensor {
public:
    TrilinearTensor(AlgebraDescriptor domain, AlgebraDescriptor codomain, std::vector<cplx> coeffs,
                    bool permuting = false);

    static TrilinearTensor zero(const AlgebraDescriptor& domain, const AlgebraDescriptor& codomain);

    const AlgebraDescriptor& domain() const noexcept { return domain_; }
    const AlgebraDescriptor& codomain() const noexcept { return codomain_; }
    const std::vector<cplx>& coeffs() const noexcept { return coeffs_; }
    bool permuting() const noexcept { return permuting_; }

    std::size_t index(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const noexcept
    {
        const std::size_t n = domain_.size();
        return ((i * n + j) * n + k) * codomain_.size() + l;
    }
    cplx at(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const { return coeffs_[index(i, j, k, l)]; }

    Element operator()(const Element& x, const Element& z, const Element& a) const;

    /// True when T[i][j][k][l] is invariant under all six slot permutations (exactly).
    bool is_symmetric() const noexcept;

    friend bool operator==(const TrilinearTensor&, const TrilinearTensor&) = default;

private:
    AlgebraDescriptor domain_;
    AlgebraDescriptor codomain_;
    std::vector<cplx> coeffs_;
    bool permuting_ = false;
};

enum class PerturbationKind { Radial, SeededNoise };

std::string to_string(PerturbationKind kind);
PerturbationKind perturbation_kind_from_string(const std::string& name);

/// g(x,z,a) = theta0 * |x|^r |z|^r |a|^r * v, with |v| = 1.
/// Radial uses one fixed direction v; SeededNoise re-derives v from the exact bits of (x, z, a).
struct PerturbationSpec {
    PerturbationKind kind = PerturbationKind::Radial;
    double theta0 = 0.0;
    double r = 1.0;
    std::uint64_t direction_seed = 0;
};

/// f = exact tensor + optional structured perturbation. Copies share the tensor.
class TriMap {
public:
    explicit TriMap(TrilinearTensor exact, std::optional<PerturbationSpec> perturbation = std::nullopt);

    const TrilinearTensor& exact() const noexcept { return *exact_; }
    const std::optional<PerturbationSpec>& perturbation() const noexcept { return perturbation_; }
    const AlgebraDescriptor& domain() const noexcept { return exact_->domain(); }
    const AlgebraDescriptor& codomain() const noexcept { return exact_->codomain(); }

    Element operator()(const Element& x, const Element& z, const Element& a) const;
    /// The perturbation part alone (zero when none).
    Element perturbation_at(const Element& x, const Element& z, const Element& a) const;

private:
    std::shared_ptr<const TrilinearTensor> exact_;
    std::optional<PerturbationSpec> perturbation_;
    std::optional<Element> radial_direction_;
};

Element eval(const TriMap& m, const Element& x, const Element& z, const Element& a);

/// D(x,y,z) = t d(x) d(y) d(z) on TruncatedPoly(N), d the formal derivative.
/// d alone breaks the Leibniz rule in the t^(N-1) coefficient (d(t^N) != 0);
/// the factor t pushes that defect into t^N = 0.
TrilinearTensor make_poly_triderivation(int n);

/// H(x,y,z) = x(0) y(0) z(0) from TruncatedPoly(N) into PointwiseCn(1). Only point = 0
/// gives an algebra homomorphism of the truncated ring; any other point is rejected.
TrilinearTensor make_poly_trihomomorphism(int n, cplx point = 0.0);

/// H(x,y,z) = h(x) . h(y) . h(z) on PointwiseCn(n), h(x)_l = x_{perm[l]}.
TrilinearTensor make_pointwise_trihomomorphism(int n, const std::vector<int>& perm);

/// D(x,z,a) = (c x - x c) tr(z) tr(a) on MatrixCStar(n): a derivation in the first
/// slot (inner derivation by c) and C-linear in the other two. Not permuting; used
/// for the unitary-decomposition pathway, which only involves the first slot.
TrilinearTensor make_inner_first_slot_derivation(int n, const Element& c);

/// Seeded Gaussian tensor scaled so that |D(x,z,a)| stays O(|x||z||a|).
TrilinearTensor make_random_tensor(const AlgebraDescriptor& domain, const AlgebraDescriptor& codomain,
                                   std::uint64_t seed);

/// Average over the six slot permutations; result flagged permuting.
TrilinearTensor symmetrize(const TrilinearTensor& t);

TriMap perturb(const TrilinearTensor& d, const PerturbationSpec& spec);

/// Structured text (JSON) form: descriptors, flag, and the flat [re, im, re, im, ...]
/// coefficient list in (i, j, k, l) row-major order. Round-trips bit-exactly.
std::string serialize_tensor(const TrilinearTensor& t);
TrilinearTensor deserialize_tensor(const std::string& text);

} // namespace tristab
