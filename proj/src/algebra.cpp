#include "tristab/algebra.hpp"

#include "tristab/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace tristab {

namespace {

using MatrixXc = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void require_same(const Element& p, const Element& q, const char* op)
{
    if (!(p.algebra() == q.algebra()))
        throw AlgebraMismatch(std::string(op) + ": operands live in " + describe(p.algebra()) + " and " +
                              describe(q.algebra()));
}

void require_matrix(const AlgebraDescriptor& alg, const char* op)
{
    if (alg.kind != AlgebraKind::MatrixCStar)
        throw std::invalid_argument(std::string(op) + " requires a MatrixCStar algebra, got " + describe(alg));
}

MatrixXc to_matrix(const Element& p)
{
    const auto n = static_cast<Eigen::Index>(p.algebra().dim);
    return Eigen::Map<const MatrixXc>(p.coeffs().data(), n, n);
}

Element from_matrix(const AlgebraDescriptor& alg, const MatrixXc& m)
{
    return Element(alg, std::vector<cplx>(m.data(), m.data() + m.size()));
}

} // namespace

std::string to_string(AlgebraKind kind)
{
    switch (kind) {
    case AlgebraKind::PointwiseCn: return "pointwise";
    case AlgebraKind::TruncatedPoly: return "poly";
    case AlgebraKind::MatrixCStar: return "matrix";
    }
    return "unknown";
}

AlgebraKind algebra_kind_from_string(const std::string& name)
{
    if (name == "pointwise") return AlgebraKind::PointwiseCn;
    if (name == "poly") return AlgebraKind::TruncatedPoly;
    if (name == "matrix") return AlgebraKind::MatrixCStar;
    throw std::invalid_argument("unknown algebra kind '" + name + "' (expected pointwise, poly or matrix)");
}

AlgebraDescriptor::AlgebraDescriptor(AlgebraKind k, int d) : kind(k), dim(d)
{
    if (d < 1)
        throw std::invalid_argument("algebra dimension must be >= 1, got " + std::to_string(d));
}

std::size_t AlgebraDescriptor::size() const noexcept
{
    const auto d = static_cast<std::size_t>(dim);
    return kind == AlgebraKind::MatrixCStar ? d * d : d;
}

std::string describe(const AlgebraDescriptor& alg)
{
    switch (alg.kind) {
    case AlgebraKind::PointwiseCn: return "PointwiseCn(" + std::to_string(alg.dim) + ")";
    case AlgebraKind::TruncatedPoly: return "TruncatedPoly(" + std::to_string(alg.dim) + ")";
    case AlgebraKind::MatrixCStar: return "MatrixCStar(" + std::to_string(alg.dim) + ")";
    }
    return "?";
}

Element::Element(AlgebraDescriptor alg, std::vector<cplx> coeffs) : alg_(alg), coeffs_(std::move(coeffs))
{
    if (coeffs_.size() != alg_.size())
        throw std::invalid_argument("element of " + describe(alg_) + " needs " + std::to_string(alg_.size()) +
                                    " coefficients, got " + std::to_string(coeffs_.size()));
}

Element Element::zero(const AlgebraDescriptor& alg)
{
    return Element(alg, std::vector<cplx>(alg.size()));
}

Element Element::one(const AlgebraDescriptor& alg)
{
    std::vector<cplx> c(alg.size());
    switch (alg.kind) {
    case AlgebraKind::PointwiseCn: std::fill(c.begin(), c.end(), cplx(1.0)); break;
    case AlgebraKind::TruncatedPoly: c[0] = 1.0; break;
    case AlgebraKind::MatrixCStar:
        for (int i = 0; i < alg.dim; ++i)
            c[static_cast<std::size_t>(i * alg.dim + i)] = 1.0;
        break;
    }
    return Element(alg, std::move(c));
}

Element Element::basis(const AlgebraDescriptor& alg, std::size_t index)
{
    std::vector<cplx> c(alg.size());
    c.at(index) = 1.0;
    return Element(alg, std::move(c));
}

cplx Element::at(std::size_t row, std::size_t col) const
{
    return coeffs_.at(row * static_cast<std::size_t>(alg_.dim) + col);
}

bool Element::is_zero() const noexcept
{
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](cplx c) { return c == cplx(0.0); });
}

Element add(const Element& p, const Element& q)
{
    require_same(p, q, "add");
    std::vector<cplx> c(p.coeffs());
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] += q[i];
    return Element(p.algebra(), std::move(c));
}

Element sub(const Element& p, const Element& q)
{
    require_same(p, q, "sub");
    std::vector<cplx> c(p.coeffs());
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] -= q[i];
    return Element(p.algebra(), std::move(c));
}

Element neg(const Element& p)
{
    std::vector<cplx> c(p.coeffs());
    for (auto& v : c)
        v = -v;
    return Element(p.algebra(), std::move(c));
}

Element scale(cplx lambda, const Element& p)
{
    std::vector<cplx> c(p.coeffs());
    for (auto& v : c)
        v *= lambda;
    return Element(p.algebra(), std::move(c));
}

Element mul(const Element& p, const Element& q)
{
    require_same(p, q, "mul");
    const auto& alg = p.algebra();
    const std::size_t n = alg.size();
    std::vector<cplx> c(n);
    switch (alg.kind) {
    case AlgebraKind::PointwiseCn:
        for (std::size_t i = 0; i < n; ++i)
            c[i] = p[i] * q[i];
        break;
    case AlgebraKind::TruncatedPoly:
        // Terms of degree >= N are dropped.
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; i + j < n; ++j)
                c[i + j] += p[i] * q[j];
        break;
    case AlgebraKind::MatrixCStar: {
        const auto d = static_cast<std::size_t>(alg.dim);
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t k = 0; k < d; ++k) {
                const cplx prk = p[r * d + k];
                for (std::size_t col = 0; col < d; ++col)
                    c[r * d + col] += prk * q[k * d + col];
            }
        break;
    }
    }
    return Element(alg, std::move(c));
}

Element adjoint(const Element& p)
{
    const auto& alg = p.algebra();
    if (alg.kind != AlgebraKind::MatrixCStar) {
        std::vector<cplx> c(p.coeffs());
        for (auto& v : c)
            v = std::conj(v);
        return Element(alg, std::move(c));
    }
    return from_matrix(alg, to_matrix(p).adjoint());
}

double norm(const Element& p)
{
    const auto& c = p.coeffs();
    switch (p.algebra().kind) {
    case AlgebraKind::PointwiseCn: {
        double m = 0.0;
        for (const auto& v : c)
            m = std::max(m, std::abs(v));
        return m;
    }
    case AlgebraKind::TruncatedPoly: {
        double s = 0.0;
        for (const auto& v : c)
            s += std::abs(v);
        return s;
    }
    case AlgebraKind::MatrixCStar: {
        if (p.algebra().dim == 1)
            return std::abs(c[0]);
        if (p.is_zero())
            return 0.0;
        Eigen::JacobiSVD<MatrixXc> svd(to_matrix(p));
        return svd.singularValues()(0);
    }
    }
    return 0.0;
}

bool approx_equal(const Element& p, const Element& q, double tol)
{
    return norm(sub(p, q)) <= tol;
}

Element random_element(const AlgebraDescriptor& alg, std::uint64_t seed, double target_norm)
{
    if (!(target_norm > 0.0))
        throw std::invalid_argument("random_element: target_norm must be positive");
    CounterRng rng(seed, 0x616c67);
    std::vector<cplx> c(alg.size());
    for (auto& v : c)
        v = rng.complex_gaussian();
    Element raw(alg, std::move(c));
    const double n = norm(raw);
    // all-zero draw
    if (n == 0.0)
        return scale(target_norm, Element::one(alg));
    return scale(target_norm / n, raw);
}

Element random_unitary(const AlgebraDescriptor& alg, std::uint64_t seed)
{
    require_matrix(alg, "random_unitary");
    const auto n = static_cast<Eigen::Index>(alg.dim);
    CounterRng rng(seed, 0x756e69);
    MatrixXc g(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            g(i, j) = rng.complex_gaussian();
    Eigen::HouseholderQR<MatrixXc> qr(g);
    MatrixXc q = qr.householderQ();
    const MatrixXc& r = qr.matrixQR();
    for (Eigen::Index j = 0; j < n; ++j) {
        const cplx d = r(j, j);
        const cplx phase = std::abs(d) > 0.0 ? d / std::abs(d) : cplx(1.0);
        q.col(j) *= phase;
    }
    return from_matrix(alg, q);
}

bool is_unitary(const Element& u, double tol)
{
    const Element e = Element::one(u.algebra());
    const Element ustar = adjoint(u);
    return norm(mul(u, ustar) - e) <= tol && norm(mul(ustar, u) - e) <= tol;
}

namespace {

// Hermitian contraction h -> (w+, w-) with h = (w+ + w-)/2, both unitary.
bool hermitian_unitary_pair(const MatrixXc& h, MatrixXc& plus, MatrixXc& minus)
{
    Eigen::SelfAdjointEigenSolver<MatrixXc> eig(h);
    if (eig.info() != Eigen::Success)
        return false;
    const auto& v = eig.eigenvectors();
    const auto n = h.rows();
    Eigen::VectorXcd dp(n), dm(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double mu = std::clamp(eig.eigenvalues()(i), -1.0, 1.0);
        const double root = std::sqrt(std::max(0.0, 1.0 - mu * mu));
        dp(i) = cplx(mu, root);
        dm(i) = cplx(mu, -root);
    }
    plus = v * dp.asDiagonal() * v.adjoint();
    minus = v * dm.asDiagonal() * v.adjoint();
    return true;
}

} // namespace

std::vector<UnitaryTerm> unitary_decompose(const Element& x)
{
    const auto& alg = x.algebra();
    require_matrix(alg, "unitary_decompose");
    const Element e = Element::one(alg);
    const double nx = norm(x);
    if (nx == 0.0)
        return {{cplx(0.0), e}};
    if (std::abs(nx - 1.0) <= 1e-14 && is_unitary(x, 1e-14))
        return {{cplx(1.0), x}};

    const MatrixXc c = to_matrix(x) / nx;
    const MatrixXc h = (c + c.adjoint()) / 2.0;
    const MatrixXc k = (c - c.adjoint()) / cplx(0.0, 2.0);
    const bool hermitian = k.norm() <= 1e-15 * c.norm();

    std::vector<UnitaryTerm> terms;
    auto split = [&](const MatrixXc& part, cplx weight) {
        MatrixXc plus, minus;
        if (!hermitian_unitary_pair(part, plus, minus)) {
            const MatrixXc nudged = part + 1e-12 * MatrixXc::Identity(part.rows(), part.cols());
            if (!hermitian_unitary_pair(nudged, plus, minus))
                throw std::runtime_error("unitary_decompose: Hermitian square root failed");
        }
        terms.push_back({weight * nx / 2.0, from_matrix(alg, plus)});
        terms.push_back({weight * nx / 2.0, from_matrix(alg, minus)});
    };
    split(h, cplx(1.0));
    if (!hermitian)
        split(k, cplx(0.0, 1.0));
    return terms;
}

Element reconstruct(const std::vector<UnitaryTerm>& terms, const AlgebraDescriptor& alg)
{
    Element acc = Element::zero(alg);
    for (const auto& t : terms)
        acc = add(acc, scale(t.weight, t.unitary));
    return acc;
}

} // namespace tristab
