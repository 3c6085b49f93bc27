#include "tristab/rng.hpp"

#include <bit>
#include <cmath>
#include <numbers>

namespace tristab {

std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept
{
    return splitmix64(splitmix64(seed ^ 0x7472697374616231ULL) + splitmix64(index + 0x632be59bd9b4e019ULL));
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t index) noexcept
    : key_(derive_seed(seed, index))
{
}

std::uint64_t CounterRng::next_u64() noexcept
{
    const std::uint64_t c = counter_++;
    return splitmix64(key_ ^ splitmix64(c * 0xd1b54a32d192ed03ULL + 1));
}

double CounterRng::uniform() noexcept
{
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::uniform_open() noexcept
{
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
}

double CounterRng::gaussian() noexcept
{
    // Box-Muller, one value per call so the counter-to-value mapping stays simple.
    const double u1 = uniform_open();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::complex<double> CounterRng::complex_gaussian() noexcept
{
    const double re = gaussian();
    const double im = gaussian();
    return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

std::complex<double> CounterRng::unit_phase() noexcept
{
    return std::polar(1.0, 2.0 * std::numbers::pi * uniform());
}

std::uint64_t hash_bits(std::uint64_t seed, std::span<const std::complex<double>> values) noexcept
{
    std::uint64_t h = splitmix64(seed);
    for (const auto& v : values) {
        h = splitmix64(h ^ std::bit_cast<std::uint64_t>(v.real()));
        h = splitmix64(h ^ std::bit_cast<std::uint64_t>(v.imag()));
    }
    return h;
}

} // namespace tristab
