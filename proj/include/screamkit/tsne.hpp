#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "screamkit/rng.hpp"
#include "screamkit/util.hpp"

namespace screamkit {

struct TsneParams {
    double perplexity = 30.0;
    int iters = 1000;
    std::uint64_t seed = 0;
    double learning_rate = 200.0;
    double exaggeration = 12.0;
    int exaggeration_iters = 250;
    double momentum_start = 0.5;
    double momentum_final = 0.8;
    int momentum_switch_iter = 250;
    double perplexity_tol = 1e-3; // in log-perplexity (nats)
};

struct Projection2D {
    std::vector<std::array<double, 2>> points;
    std::vector<int> labels;
    double perplexity = 0.0;
    double initial_kl = 0.0;
    double final_kl = 0.0;
    std::uint64_t seed = 0;
};

namespace detail {

inline Mat pairwise_sq_dists(const std::vector<std::vector<double>>& X)
{
    const std::size_t n = X.size();
    Mat d(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < X[i].size(); ++k) {
                const double diff = X[i][k] - X[j][k];
                acc += diff * diff;
            }
            d.at(i, j) = acc;
            d.at(j, i) = acc;
        }
    }
    return d;
}

// Shannon entropy (nats) and conditional row for a given precision beta.
// Distances are shifted by the row minimum before exponentiating; the
// conditional is invariant to the shift and the nearest neighbor never
// underflows, even when the binary search drives beta very large.
inline double gaussian_row(const Mat& d2, std::size_t i, double beta, std::vector<double>& row)
{
    const std::size_t n = d2.rows;
    double d2_min = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j)
        if (j != i) d2_min = std::min(d2_min, d2.at(i, j));
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        row[j] = j == i ? 0.0 : std::exp(-beta * (d2.at(i, j) - d2_min));
        sum += row[j];
    }
    double entropy = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (j == i || row[j] <= 0.0) continue;
        const double p = row[j] / sum;
        entropy -= p * std::log(p);
    }
    for (std::size_t j = 0; j < n; ++j) row[j] /= sum;
    return entropy;
}

// Fit one conditional row by binary search on the precision beta until the
// entropy matches log(perplexity) within tol. Returns the achieved entropy.
inline double fit_conditional_row(const Mat& d2, std::size_t i, double target_h, double tol,
                                  std::vector<double>& row)
{
    double beta = 1.0;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    double entropy = gaussian_row(d2, i, beta, row);
    for (int it = 0; it < 200 && std::abs(entropy - target_h) > tol; ++it) {
        if (entropy > target_h) {
            lo = beta;
            beta = std::isfinite(hi) ? (beta + hi) / 2.0 : beta * 2.0;
        } else {
            hi = beta;
            beta = std::isfinite(lo) ? (beta + lo) / 2.0 : beta / 2.0;
        }
        entropy = gaussian_row(d2, i, beta, row);
    }
    return entropy;
}

} // namespace detail

/// Symmetrized joint probabilities with per-point Gaussian bandwidths found by
/// binary search so each conditional hits the target perplexity. The achieved
/// per-point perplexities are written to `achieved` when given.
inline Mat tsne_joint_p(const std::vector<std::vector<double>>& X, double perplexity,
                        double tol = 1e-3, std::vector<double>* achieved = nullptr)
{
    const std::size_t n = X.size();
    if (static_cast<double>(n) < 3.0 * perplexity)
        throw std::invalid_argument("tsne: need n >= 3 * perplexity");

    const Mat d2 = detail::pairwise_sq_dists(X);
    const double target_h = std::log(perplexity);

    Mat cond(n, n, 0.0);
    std::vector<double> row(n);
    if (achieved) achieved->resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double entropy = detail::fit_conditional_row(d2, i, target_h, tol, row);
        if (achieved) (*achieved)[i] = std::exp(entropy);
        for (std::size_t j = 0; j < n; ++j) cond.at(i, j) = row[j];
    }

    Mat joint(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            joint.at(i, j) = (cond.at(i, j) + cond.at(j, i)) / (2.0 * static_cast<double>(n));
    return joint;
}

namespace detail {

inline double tsne_kl(const Mat& P, const std::vector<std::array<double, 2>>& Y)
{
    const std::size_t n = Y.size();
    double sum_q = 0.0;
    Mat qnum(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = Y[i][0] - Y[j][0];
            const double dy = Y[i][1] - Y[j][1];
            const double q = 1.0 / (1.0 + dx * dx + dy * dy);
            qnum.at(i, j) = q;
            qnum.at(j, i) = q;
            sum_q += 2.0 * q;
        }
    }
    double kl = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double p = P.at(i, j);
            if (p <= 0.0) continue;
            const double q = std::max(qnum.at(i, j) / sum_q, 1e-12);
            kl += p * std::log(p / q);
        }
    }
    return kl;
}

} // namespace detail

/// Exact O(n^2) t-SNE to 2 dimensions: early exaggeration, momentum switch,
/// adaptive per-coordinate gains, seeded Gaussian initialization (sigma 1e-4).
inline Projection2D tsne(const std::vector<std::vector<double>>& X, TsneParams params = {},
                         std::vector<int> labels = {})
{
    const std::size_t n = X.size();
    for (const auto& row : X)
        for (double v : row)
            if (!std::isfinite(v)) throw std::invalid_argument("tsne: non-finite input");

    const Mat P = tsne_joint_p(X, params.perplexity, params.perplexity_tol);

    Rng rng(params.seed);
    std::vector<std::array<double, 2>> Y(n);
    for (auto& p : Y) {
        p[0] = rng.normal() * 1e-4;
        p[1] = rng.normal() * 1e-4;
    }

    Projection2D proj;
    proj.seed = params.seed;
    proj.perplexity = params.perplexity;
    proj.labels = std::move(labels);
    proj.initial_kl = detail::tsne_kl(P, Y);

    std::vector<std::array<double, 2>> vel(n, {0.0, 0.0});
    std::vector<std::array<double, 2>> gains(n, {1.0, 1.0});
    Mat qnum(n, n, 0.0);

    for (int iter = 0; iter < params.iters; ++iter) {
        const double exag = iter < params.exaggeration_iters ? params.exaggeration : 1.0;
        const double momentum =
            iter < params.momentum_switch_iter ? params.momentum_start : params.momentum_final;

        double sum_q = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double dx = Y[i][0] - Y[j][0];
                const double dy = Y[i][1] - Y[j][1];
                const double q = 1.0 / (1.0 + dx * dx + dy * dy);
                qnum.at(i, j) = q;
                qnum.at(j, i) = q;
                sum_q += 2.0 * q;
            }
        }

        for (std::size_t i = 0; i < n; ++i) {
            double gx = 0.0, gy = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                const double q = qnum.at(i, j);
                const double mult = (exag * P.at(i, j) - q / sum_q) * q;
                gx += (Y[i][0] - Y[j][0]) * mult;
                gy += (Y[i][1] - Y[j][1]) * mult;
            }
            gx *= 4.0;
            gy *= 4.0;

            for (int d = 0; d < 2; ++d) {
                const double g = d == 0 ? gx : gy;
                auto& gain = gains[i][d];
                gain = (g > 0.0) == (vel[i][d] > 0.0) ? std::max(gain * 0.8, 0.01) : gain + 0.2;
                vel[i][d] = momentum * vel[i][d] - params.learning_rate * gain * g;
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            Y[i][0] += vel[i][0];
            Y[i][1] += vel[i][1];
        }

        // keep the embedding centered
        double cx = 0.0, cy = 0.0;
        for (const auto& p : Y) {
            cx += p[0];
            cy += p[1];
        }
        cx /= static_cast<double>(n);
        cy /= static_cast<double>(n);
        for (auto& p : Y) {
            p[0] -= cx;
            p[1] -= cy;
        }
    }

    proj.final_kl = detail::tsne_kl(P, Y);
    proj.points = std::move(Y);
    return proj;
}

} // namespace screamkit
