#include "tristab/trimap.hpp"

#include "tristab/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tristab {

namespace {

constexpr const char* kTensorSchema = "tristab.tensor/1";

void require_domain(const AlgebraDescriptor& expected, const Element& x, const char* op)
{
    if (!(x.algebra() == expected))
        throw AlgebraMismatch(std::string(op) + ": argument in " + describe(x.algebra()) + ", map domain is " +
                              describe(expected));
}

// Slot permutations as (position of i, position of j, position of k).
constexpr std::array<std::array<int, 3>, 6> kPermutations{{
    {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0},
}};

nlohmann::json descriptor_json(const AlgebraDescriptor& alg)
{
    return {{"kind", to_string(alg.kind)}, {"dim", alg.dim}};
}

AlgebraDescriptor descriptor_from_json(const nlohmann::json& j)
{
    return {algebra_kind_from_string(j.at("kind").get<std::string>()), j.at("dim").get<int>()};
}

} // namespace

TrilinearTensor::TrilinearTensor(AlgebraDescriptor domain, AlgebraDescriptor codomain, std::vector<cplx> coeffs,
                                 bool permuting)
    : domain_(domain), codomain_(codomain), coeffs_(std::move(coeffs)), permuting_(permuting)
{
    const std::size_t n = domain_.size();
    if (coeffs_.size() != n * n * n * codomain_.size())
        throw std::invalid_argument("trilinear tensor over " + describe(domain_) + " -> " + describe(codomain_) +
                                    " needs " + std::to_string(n * n * n * codomain_.size()) + " coefficients");
}

TrilinearTensor TrilinearTensor::zero(const AlgebraDescriptor& domain, const AlgebraDescriptor& codomain)
{
    const std::size_t n = domain.size();
    return TrilinearTensor(domain, codomain, std::vector<cplx>(n * n * n * codomain.size()), true);
}

Element TrilinearTensor::operator()(const Element& x, const Element& z, const Element& a) const
{
    require_domain(domain_, x, "tensor eval");
    require_domain(domain_, z, "tensor eval");
    require_domain(domain_, a, "tensor eval");
    const std::size_t n = domain_.size();
    const std::size_t m = codomain_.size();
    // Accumulate in split real/imag form: same products as std::complex for finite
    // inputs, without the libgcc NaN-recovery call on every multiply.
    std::vector<double> re(m, 0.0), im(m, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (x[i] == cplx(0.0))
            continue;
        for (std::size_t j = 0; j < n; ++j) {
            const cplx xz = x[i] * z[j];
            if (xz == cplx(0.0))
                continue;
            for (std::size_t k = 0; k < n; ++k) {
                const cplx w = xz * a[k];
                if (w == cplx(0.0))
                    continue;
                const double wr = w.real(), wi = w.imag();
                const cplx* row = &coeffs_[index(i, j, k, 0)];
                for (std::size_t l = 0; l < m; ++l) {
                    const double rr = row[l].real(), ri = row[l].imag();
                    re[l] += wr * rr - wi * ri;
                    im[l] += wr * ri + wi * rr;
                }
            }
        }
    }
    std::vector<cplx> out(m);
    for (std::size_t l = 0; l < m; ++l)
        out[l] = cplx(re[l], im[l]);
    return Element(codomain_, std::move(out));
}

bool TrilinearTensor::is_symmetric() const noexcept
{
    const std::size_t n = domain_.size();
    const std::size_t m = codomain_.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l < m; ++l) {
                    const std::array<std::size_t, 3> idx{i, j, k};
                    for (const auto& p : kPermutations)
                        if (coeffs_[index(idx[p[0]], idx[p[1]], idx[p[2]], l)] != coeffs_[index(i, j, k, l)])
                            return false;
                }
    return true;
}

std::string to_string(PerturbationKind kind)
{
    return kind == PerturbationKind::Radial ? "radial" : "seeded-noise";
}

PerturbationKind perturbation_kind_from_string(const std::string& name)
{
    if (name == "radial") return PerturbationKind::Radial;
    if (name == "seeded-noise") return PerturbationKind::SeededNoise;
    throw std::invalid_argument("unknown perturbation kind '" + name + "' (expected radial or seeded-noise)");
}

TriMap::TriMap(TrilinearTensor exact, std::optional<PerturbationSpec> perturbation)
    : exact_(std::make_shared<const TrilinearTensor>(std::move(exact))), perturbation_(perturbation)
{
    if (perturbation_) {
        if (!(perturbation_->theta0 >= 0.0) || !(perturbation_->r >= 0.0))
            throw std::invalid_argument("perturbation needs theta0 >= 0 and r >= 0");
        if (perturbation_->kind == PerturbationKind::Radial)
            radial_direction_ = random_element(exact_->codomain(), perturbation_->direction_seed, 1.0);
    }
}

Element TriMap::perturbation_at(const Element& x, const Element& z, const Element& a) const
{
    if (!perturbation_ || perturbation_->theta0 == 0.0)
        return Element::zero(codomain());
    const double nx = norm(x);
    const double nz = norm(z);
    const double na = norm(a);
    if (nx == 0.0 || nz == 0.0 || na == 0.0)
        return Element::zero(codomain());
    const double r = perturbation_->r;
    const double magnitude = perturbation_->theta0 * std::pow(nx, r) * std::pow(nz, r) * std::pow(na, r);
    if (perturbation_->kind == PerturbationKind::Radial)
        return scale(magnitude, *radial_direction_);

    std::vector<cplx> bits;
    bits.reserve(3 * x.coeffs().size());
    for (const Element* e : {&x, &z, &a})
        bits.insert(bits.end(), e->coeffs().begin(), e->coeffs().end());
    const std::uint64_t h = hash_bits(perturbation_->direction_seed, bits);
    return scale(magnitude, random_element(codomain(), h, 1.0));
}

Element TriMap::operator()(const Element& x, const Element& z, const Element& a) const
{
    Element value = (*exact_)(x, z, a);
    if (!perturbation_ || perturbation_->theta0 == 0.0)
        return value;
    return add(value, perturbation_at(x, z, a));
}

Element eval(const TriMap& m, const Element& x, const Element& z, const Element& a)
{
    return m(x, z, a);
}

TrilinearTensor make_poly_triderivation(int n)
{
    if (n < 2)
        throw std::invalid_argument("make_poly_triderivation: truncation order must be >= 2, got " +
                                    std::to_string(n));
    const AlgebraDescriptor alg(AlgebraKind::TruncatedPoly, n);
    auto t = TrilinearTensor::zero(alg, alg);
    std::vector<cplx> c(t.coeffs());
    const auto un = static_cast<std::size_t>(n);
    // t d(t^i) d(t^j) d(t^k) = i j k t^(i+j+k-2)
    for (std::size_t i = 1; i < un; ++i)
        for (std::size_t j = 1; j < un; ++j)
            for (std::size_t k = 1; k < un; ++k) {
                const std::size_t deg = i + j + k - 2;
                if (deg < un)
                    c[t.index(i, j, k, deg)] = static_cast<double>(i * j * k);
            }
    return TrilinearTensor(alg, alg, std::move(c), true);
}

TrilinearTensor make_poly_trihomomorphism(int n, cplx point)
{
    if (n < 1)
        throw std::invalid_argument("make_poly_trihomomorphism: truncation order must be >= 1");
    if (point != cplx(0.0))
        throw std::invalid_argument("make_poly_trihomomorphism: evaluation at a nonzero point is not a "
                                    "homomorphism of C[t]/(t^N); only point = 0 is supported");
    const AlgebraDescriptor dom(AlgebraKind::TruncatedPoly, n);
    const AlgebraDescriptor cod(AlgebraKind::PointwiseCn, 1);
    auto t = TrilinearTensor::zero(dom, cod);
    std::vector<cplx> c(t.coeffs());
    c[t.index(0, 0, 0, 0)] = 1.0;
    return TrilinearTensor(dom, cod, std::move(c), true);
}

TrilinearTensor make_pointwise_trihomomorphism(int n, const std::vector<int>& perm)
{
    if (n < 1 || perm.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("make_pointwise_trihomomorphism: permutation must have length n");
    std::vector<int> sorted(perm);
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < n; ++i)
        if (sorted[static_cast<std::size_t>(i)] != i)
            throw std::invalid_argument("make_pointwise_trihomomorphism: not a permutation of 0..n-1");
    const AlgebraDescriptor alg(AlgebraKind::PointwiseCn, n);
    auto t = TrilinearTensor::zero(alg, alg);
    std::vector<cplx> c(t.coeffs());
    for (std::size_t l = 0; l < perm.size(); ++l) {
        const auto p = static_cast<std::size_t>(perm[l]);
        c[t.index(p, p, p, l)] = 1.0;
    }
    return TrilinearTensor(alg, alg, std::move(c), true);
}

TrilinearTensor make_inner_first_slot_derivation(int n, const Element& c)
{
    const AlgebraDescriptor alg(AlgebraKind::MatrixCStar, n);
    if (!(c.algebra() == alg))
        throw AlgebraMismatch("make_inner_first_slot_derivation: generator must live in " + describe(alg));
    auto t = TrilinearTensor::zero(alg, alg);
    std::vector<cplx> coeffs(t.coeffs());
    const auto d = static_cast<std::size_t>(n);
    for (std::size_t p = 0; p < d; ++p)
        for (std::size_t q = 0; q < d; ++q) {
            const Element unit = Element::basis(alg, p * d + q);
            const Element comm = sub(mul(c, unit), mul(unit, c));
            // tr(E_jj) = 1 for diagonal matrix units, 0 otherwise.
            for (std::size_t j = 0; j < d; ++j)
                for (std::size_t k = 0; k < d; ++k)
                    for (std::size_t l = 0; l < alg.size(); ++l)
                        coeffs[t.index(p * d + q, j * d + j, k * d + k, l)] = comm[l];
        }
    return TrilinearTensor(alg, alg, std::move(coeffs), false);
}

TrilinearTensor make_random_tensor(const AlgebraDescriptor& domain, const AlgebraDescriptor& codomain,
                                   std::uint64_t seed)
{
    CounterRng rng(seed, 0x74656e);
    auto t = TrilinearTensor::zero(domain, codomain);
    std::vector<cplx> c(t.coeffs().size());
    const double s = 1.0 / std::pow(static_cast<double>(domain.size()), 1.5);
    for (auto& v : c)
        v = s * rng.complex_gaussian();
    return TrilinearTensor(domain, codomain, std::move(c), false);
}

TrilinearTensor symmetrize(const TrilinearTensor& t)
{
    const std::size_t n = t.domain().size();
    const std::size_t m = t.codomain().size();
    std::vector<cplx> c(t.coeffs().size());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                // Sum the orbit in a canonical order (sorted indices) so every member of
                // the orbit receives the bit-identical value.
                std::array<std::size_t, 3> s{i, j, k};
                std::sort(s.begin(), s.end());
                for (std::size_t l = 0; l < m; ++l) {
                    const cplx first = t.at(s[0], s[1], s[2], l);
                    cplx acc = 0.0;
                    bool constant = true;
                    for (const auto& p : kPermutations) {
                        const cplx v = t.at(s[p[0]], s[p[1]], s[p[2]], l);
                        constant = constant && v == first;
                        acc += v;
                    }
                    // Symmetric orbits are kept verbatim; 6v/6 need not round-trip.
                    c[t.index(i, j, k, l)] = constant ? first : acc / 6.0;
                }
            }
    return TrilinearTensor(t.domain(), t.codomain(), std::move(c), true);
}

TriMap perturb(const TrilinearTensor& d, const PerturbationSpec& spec)
{
    return TriMap(d, spec);
}

std::string serialize_tensor(const TrilinearTensor& t)
{
    nlohmann::json flat = nlohmann::json::array();
    for (const auto& v : t.coeffs()) {
        flat.push_back(v.real());
        flat.push_back(v.imag());
    }
    nlohmann::json doc{{"schema", kTensorSchema},
                       {"domain", descriptor_json(t.domain())},
                       {"codomain", descriptor_json(t.codomain())},
                       {"permuting", t.permuting()},
                       {"coeffs", std::move(flat)}};
    return doc.dump(1);
}

TrilinearTensor deserialize_tensor(const std::string& text)
{
    const auto doc = nlohmann::json::parse(text);
    if (doc.at("schema").get<std::string>() != kTensorSchema)
        throw std::invalid_argument("unsupported tensor schema '" + doc.at("schema").get<std::string>() + "'");
    const auto& flat = doc.at("coeffs");
    if (flat.size() % 2 != 0)
        throw std::invalid_argument("tensor coefficient list must hold (re, im) pairs");
    std::vector<cplx> c(flat.size() / 2);
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = cplx(flat[2 * i].get<double>(), flat[2 * i + 1].get<double>());
    return TrilinearTensor(descriptor_from_json(doc.at("domain")), descriptor_from_json(doc.at("codomain")),
                           std::move(c), doc.at("permuting").get<bool>());
}

} // namespace tristab
