#pragma once

#include <complex>
#include <cstdint>
#include <span>

namespace tristab {

/// Counter-based generator "tristab-ctr-v1".
///
/// Every draw is a pure function of (key, counter): the key is derived from an
/// experiment seed and a sample index, so sample k produces the same stream no
/// matter which worker evaluates it or in which order.
class CounterRng {
public:
    static constexpr const char* kName = "tristab-ctr-v1";

    explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}
    CounterRng(std::uint64_t seed, std::uint64_t index) noexcept;

    std::uint64_t next_u64() noexcept;
    /// Uniform on [0, 1).
    double uniform() noexcept;
    /// Uniform on (0, 1], never zero.
    double uniform_open() noexcept;
    double gaussian() noexcept;
    /// Standard complex Gaussian: real and imaginary parts N(0, 1/2).
    std::complex<double> complex_gaussian() noexcept;
    std::complex<double> unit_phase() noexcept;

    std::uint64_t key() const noexcept { return key_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Per-sample seed derived from (seed, index); used to fan out independent streams.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// Hash of a sequence of binary64 values by their exact bit patterns.
std::uint64_t hash_bits(std::uint64_t seed, std::span<const std::complex<double>> values) noexcept;

} // namespace tristab
