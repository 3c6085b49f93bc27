#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace tristab {

using cplx = std::complex<double>;

enum class AlgebraKind { PointwiseCn, TruncatedPoly, MatrixCStar };

std::string to_string(AlgebraKind kind);
AlgebraKind algebra_kind_from_string(const std::string& name);

class AlgebraMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// One of the three concrete unital complex Banach algebras.
///
///  - PointwiseCn(n):   C^n, coordinatewise product, sup norm.
///  - TruncatedPoly(N): C[t]/(t^N), truncated convolution, l1 coefficient norm.
///  - MatrixCStar(n):   n x n complex matrices, operator (spectral) norm.
struct AlgebraDescriptor {
    AlgebraKind kind = AlgebraKind::PointwiseCn;
    int dim = 1;

    AlgebraDescriptor() = default;
    AlgebraDescriptor(AlgebraKind k, int d);

    /// Number of complex coefficients of an element (dim, or dim^2 for matrices).
    std::size_t size() const noexcept;
    bool commutative() const noexcept { return kind != AlgebraKind::MatrixCStar; }

    friend bool operator==(const AlgebraDescriptor&, const AlgebraDescriptor&) = default;
};

std::string describe(const AlgebraDescriptor& alg);

/// Coefficient vector of an algebra element. Matrix elements are stored
/// row-major, which is also the matrix-unit basis order.
class Element {
public:
    Element(AlgebraDescriptor alg, std::vector<cplx> coeffs);

    static Element zero(const AlgebraDescriptor& alg);
    static Element one(const AlgebraDescriptor& alg);
    static Element basis(const AlgebraDescriptor& alg, std::size_t index);

    const AlgebraDescriptor& algebra() const noexcept { return alg_; }
    const std::vector<cplx>& coeffs() const noexcept { return coeffs_; }
    cplx operator[](std::size_t i) const { return coeffs_[i]; }
    cplx at(std::size_t row, std::size_t col) const;

    bool is_zero() const noexcept;

private:
    AlgebraDescriptor alg_;
    std::vector<cplx> coeffs_;
};

Element add(const Element& p, const Element& q);
Element sub(const Element& p, const Element& q);
Element neg(const Element& p);
Element scale(cplx lambda, const Element& p);
Element mul(const Element& p, const Element& q);
/// Involution: conjugate transpose for matrices, coefficientwise conjugate otherwise.
Element adjoint(const Element& p);
double norm(const Element& p);

inline Element operator+(const Element& p, const Element& q) { return add(p, q); }
inline Element operator-(const Element& p, const Element& q) { return sub(p, q); }
inline Element operator-(const Element& p) { return neg(p); }
inline Element operator*(const Element& p, const Element& q) { return mul(p, q); }
inline Element operator*(cplx lambda, const Element& p) { return scale(lambda, p); }

/// Element comparison always goes through the norm of the difference.
bool approx_equal(const Element& p, const Element& q, double tol = 1e-10);

/// i.i.d. standard complex Gaussian coefficients rescaled to norm == target_norm.
Element random_element(const AlgebraDescriptor& alg, std::uint64_t seed, double target_norm);

/// Haar unitary: QR of a complex Gaussian matrix with the phases of diag(R) folded back in.
Element random_unitary(const AlgebraDescriptor& alg, std::uint64_t seed);

bool is_unitary(const Element& u, double tol = 1e-10);

struct UnitaryTerm {
    cplx weight;
    Element unitary;
};

/// Writes x as a finite combination sum_j weight_j * u_j of unitaries (at most four terms).
///
/// x = |x| c with |c| <= 1; c = h + i k with h, k Hermitian contractions, and each
/// Hermitian contraction h is the mean of the unitaries h +/- i sqrt(e - h^2).
std::vector<UnitaryTerm> unitary_decompose(const Element& x);

Element reconstruct(const std::vector<UnitaryTerm>& terms, const AlgebraDescriptor& alg);

} // namespace tristab
