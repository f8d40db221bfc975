#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include "screamkit/util.hpp"

namespace screamkit {

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// In-place iterative radix-2 Cooley-Tukey. Size must be a power of two.
/// The inverse transform includes the 1/N factor.
inline void fft_inplace(std::vector<std::complex<double>>& a, bool inverse = false)
{
    const std::size_t n = a.size();
    if (!is_power_of_two(n)) throw std::invalid_argument("fft size must be a power of two");

    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * kPi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }

    if (inverse) {
        for (auto& x : a) x /= static_cast<double>(n);
    }
}

/// Forward FFT of a real signal; returns the n/2 + 1 non-redundant bins.
inline std::vector<std::complex<double>> rfft(const std::vector<double>& x)
{
    std::vector<std::complex<double>> a(x.begin(), x.end());
    fft_inplace(a);
    a.resize(x.size() / 2 + 1);
    return a;
}

} // namespace screamkit
