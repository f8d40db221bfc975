#pragma once

// Independent reference implementations used to pin expected values:
// quadratic DFT, direct DCT-II, brute-force least-squares slope and a
// separability check. These deliberately share no code with the library.

#include <array>
#include <cmath>
#include <complex>
#include <vector>

namespace oracles {

inline constexpr double kPi = 3.14159265358979323846;

/// O(n^2) DFT. Returns all n bins.
inline std::vector<std::complex<double>> naive_dft(const std::vector<double>& x)
{
    const std::size_t n = x.size();
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t t = 0; t < n; ++t) {
            const double ang = -2.0 * kPi * static_cast<double>(k) * static_cast<double>(t) /
                               static_cast<double>(n);
            acc += x[t] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        out[k] = acc;
    }
    return out;
}

/// Orthonormal DCT-II of one vector.
inline std::vector<double> dct2_ortho(const std::vector<double>& x)
{
    const std::size_t n = x.size();
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        double acc = 0.0;
        for (std::size_t m = 0; m < n; ++m)
            acc += x[m] * std::cos(kPi * static_cast<double>(k) * (2.0 * static_cast<double>(m) + 1.0) /
                                   (2.0 * static_cast<double>(n)));
        const double scale = k == 0 ? std::sqrt(1.0 / static_cast<double>(n))
                                    : std::sqrt(2.0 / static_cast<double>(n));
        out[k] = acc * scale;
    }
    return out;
}

/// Least-squares slope of y over x positions -half..+half (the regression the
/// delta feature claims to compute), solved via the normal equations.
inline double ls_slope(const std::vector<double>& y)
{
    const std::size_t w = y.size();
    const double half = (static_cast<double>(w) - 1.0) / 2.0;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < w; ++i) {
        const double x = static_cast<double>(i) - half;
        sxx += x * x;
        sxy += x * y[i];
    }
    return sxy / sxx;
}

/// True when the two point sets are separated by some line: projects onto the
/// axis through the class centroids and checks for a positive margin.
inline bool linearly_separable(const std::vector<std::array<double, 2>>& a,
                               const std::vector<std::array<double, 2>>& b)
{
    if (a.empty() || b.empty()) return false;
    std::array<double, 2> ca{0, 0}, cb{0, 0};
    for (const auto& p : a) {
        ca[0] += p[0];
        ca[1] += p[1];
    }
    for (const auto& p : b) {
        cb[0] += p[0];
        cb[1] += p[1];
    }
    ca[0] /= static_cast<double>(a.size());
    ca[1] /= static_cast<double>(a.size());
    cb[0] /= static_cast<double>(b.size());
    cb[1] /= static_cast<double>(b.size());
    const double dx = cb[0] - ca[0], dy = cb[1] - ca[1];

    double max_a = -1e300, min_b = 1e300;
    for (const auto& p : a) max_a = std::max(max_a, p[0] * dx + p[1] * dy);
    for (const auto& p : b) min_b = std::min(min_b, p[0] * dx + p[1] * dy);
    return max_a < min_b;
}

} // namespace oracles
