#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "screamkit/fft.hpp"
#include "screamkit/segmentation.hpp"
#include "screamkit/util.hpp"

namespace screamkit {

inline constexpr double kPowerFloor = 1e-10;

/// Magnitude STFT: freq_bins x frames, freq_bins = window/2 + 1.
struct Spectrogram {
    Mat magnitudes;
    std::vector<double> bin_freqs;
    int frame_hop = 0;
    int window_size = 0;
    double sample_rate = 0.0;

    std::size_t n_bins() const { return magnitudes.rows; }
    std::size_t n_frames() const { return magnitudes.cols; }
};

struct MelParams {
    double fmin = 0.0;
    double fmax = 22050.0;
    std::string norm = "slaney"; // area-normalized triangles
};

/// Mel (or log-mel) values: n_mels x frames. `log_scale` tells whether
/// log_compress has been applied.
struct LogMelSpectrogram {
    Mat values;
    int n_mels = 0;
    MelParams params;
    bool log_scale = false;

    std::size_t n_frames() const { return values.cols; }
};

/// Named per-frame descriptor series: dims x frames.
struct FrameSeries {
    std::string name;
    Mat values;

    std::size_t dims() const { return values.rows; }
    std::size_t n_frames() const { return values.cols; }
};

/// Frame-analysis parameters shared by every descriptor.
struct DspConfig {
    int window = 2048;
    int hop = 1024;
    int n_mels = 128;
    double fmin = 0.0;
    double fmax = 22050.0;
    int n_mfcc = 13;
    int delta_width = 9;
    double rolloff_fraction = 0.85;
    int contrast_bands = 6;
    double contrast_quantile = 0.02;
    double contrast_fmin = 200.0;
};

namespace detail {

// Reflect-without-edge-repetition index, matching numpy's 'reflect' mode.
inline std::size_t reflect_index(std::int64_t p, std::size_t n)
{
    if (n == 1) return 0;
    const std::int64_t period = 2 * (static_cast<std::int64_t>(n) - 1);
    std::int64_t m = ((p % period) + period) % period;
    if (m >= static_cast<std::int64_t>(n)) m = period - m;
    return static_cast<std::size_t>(m);
}

inline std::size_t frame_count(std::size_t len, std::size_t hop) { return 1 + len / hop; }

// Fill one centered frame (reflect padded) of `window` samples.
inline void fill_frame(const std::vector<double>& x, std::size_t t, int window, int hop,
                       std::vector<double>& out)
{
    const std::int64_t start =
        static_cast<std::int64_t>(t) * hop - window / 2;
    for (int i = 0; i < window; ++i)
        out[static_cast<std::size_t>(i)] = x[reflect_index(start + i, x.size())];
}

} // namespace detail

/// Hann-windowed, centered magnitude STFT. frames = 1 + floor(len / hop).
inline Spectrogram stft(const std::vector<double>& samples, int window = 2048, int hop = 1024,
                        double sample_rate = kPipelineRate)
{
    if (samples.empty()) throw std::invalid_argument("stft: signal must have at least 1 sample");
    if (!is_power_of_two(static_cast<std::size_t>(window)))
        throw std::invalid_argument("stft: window must be a power of two");
    if (hop <= 0 || hop > window) throw std::invalid_argument("stft: need 0 < hop <= window");

    const std::size_t frames = detail::frame_count(samples.size(), static_cast<std::size_t>(hop));
    const std::size_t bins = static_cast<std::size_t>(window) / 2 + 1;

    Spectrogram spec;
    spec.magnitudes = Mat(bins, frames);
    spec.frame_hop = hop;
    spec.window_size = window;
    spec.sample_rate = sample_rate;
    spec.bin_freqs.resize(bins);
    for (std::size_t k = 0; k < bins; ++k)
        spec.bin_freqs[k] = static_cast<double>(k) * sample_rate / window;

    std::vector<double> hann(static_cast<std::size_t>(window));
    for (int n = 0; n < window; ++n)
        hann[static_cast<std::size_t>(n)] = 0.5 - 0.5 * std::cos(2.0 * kPi * n / window);

    std::vector<double> frame(static_cast<std::size_t>(window));
    std::vector<std::complex<double>> buf(static_cast<std::size_t>(window));
    for (std::size_t t = 0; t < frames; ++t) {
        detail::fill_frame(samples, t, window, hop, frame);
        for (int n = 0; n < window; ++n)
            buf[static_cast<std::size_t>(n)] = frame[static_cast<std::size_t>(n)] * hann[static_cast<std::size_t>(n)];
        fft_inplace(buf);
        for (std::size_t k = 0; k < bins; ++k) spec.magnitudes.at(k, t) = std::abs(buf[k]);
    }
    return spec;
}

inline Spectrogram stft(const Block& block, int window = 2048, int hop = 1024)
{
    return stft(block.samples, window, hop, kPipelineRate);
}

namespace detail {

// Slaney mel scale: linear below 1 kHz, logarithmic above.
inline double hz_to_mel(double f)
{
    constexpr double f_sp = 200.0 / 3.0;
    constexpr double min_log_hz = 1000.0;
    constexpr double min_log_mel = min_log_hz / f_sp;
    const double logstep = std::log(6.4) / 27.0;
    return f < min_log_hz ? f / f_sp : min_log_mel + std::log(f / min_log_hz) / logstep;
}

inline double mel_to_hz(double m)
{
    constexpr double f_sp = 200.0 / 3.0;
    constexpr double min_log_hz = 1000.0;
    constexpr double min_log_mel = min_log_hz / f_sp;
    const double logstep = std::log(6.4) / 27.0;
    return m < min_log_mel ? m * f_sp : min_log_hz * std::exp(logstep * (m - min_log_mel));
}

} // namespace detail

/// Area-normalized triangular mel filterbank over FFT bins.
struct MelFilterbank {
    struct Filter {
        int start_bin = 0;
        std::vector<double> weights;
    };

    int n_mels = 0;
    int n_fft = 0;
    double sample_rate = 0.0;
    MelParams params;
    std::vector<Filter> filters;
    std::vector<double> center_freqs;

    MelFilterbank(int n_mels_, double fmin, double fmax, int n_fft_, double sample_rate_)
        : n_mels(n_mels_), n_fft(n_fft_), sample_rate(sample_rate_)
    {
        if (n_mels < 1) throw std::invalid_argument("mel filterbank: n_mels must be >= 1");
        if (!(fmin < fmax) || fmax > sample_rate / 2.0 + 1e-9)
            throw std::invalid_argument("mel filterbank: need fmin < fmax <= Nyquist");
        params.fmin = fmin;
        params.fmax = fmax;

        const double mel_lo = detail::hz_to_mel(fmin);
        const double mel_hi = detail::hz_to_mel(fmax);
        std::vector<double> edges(static_cast<std::size_t>(n_mels) + 2);
        for (int m = 0; m < n_mels + 2; ++m)
            edges[static_cast<std::size_t>(m)] =
                detail::mel_to_hz(mel_lo + (mel_hi - mel_lo) * m / (n_mels + 1));

        const int bins = n_fft / 2 + 1;
        filters.resize(static_cast<std::size_t>(n_mels));
        center_freqs.resize(static_cast<std::size_t>(n_mels));
        for (int m = 0; m < n_mels; ++m) {
            const double lo = edges[static_cast<std::size_t>(m)];
            const double mid = edges[static_cast<std::size_t>(m) + 1];
            const double hi = edges[static_cast<std::size_t>(m) + 2];
            center_freqs[static_cast<std::size_t>(m)] = mid;
            const double enorm = 2.0 / (hi - lo); // Slaney area normalization
            std::vector<double> w;
            int start = -1;
            for (int k = 0; k < bins; ++k) {
                const double f = static_cast<double>(k) * sample_rate / n_fft;
                const double up = (f - lo) / (mid - lo);
                const double down = (hi - f) / (hi - mid);
                const double weight = std::max(0.0, std::min(up, down)) * enorm;
                if (weight > 0.0) {
                    if (start < 0) start = k;
                    w.push_back(weight);
                } else if (start >= 0) {
                    break;
                }
            }
            filters[static_cast<std::size_t>(m)].start_bin = std::max(start, 0);
            filters[static_cast<std::size_t>(m)].weights = std::move(w);
        }
    }
};

/// Apply a mel filterbank to the power spectrum (|mag|^2). Pre-log values.
inline LogMelSpectrogram mel_spectrogram(const Spectrogram& spec, const MelFilterbank& bank)
{
    if (bank.n_fft != spec.window_size)
        throw std::invalid_argument("mel_spectrogram: filterbank/spectrogram size mismatch");

    LogMelSpectrogram mel;
    mel.n_mels = bank.n_mels;
    mel.params = bank.params;
    mel.log_scale = false;
    mel.values = Mat(static_cast<std::size_t>(bank.n_mels), spec.n_frames());

    for (int m = 0; m < bank.n_mels; ++m) {
        const auto& f = bank.filters[static_cast<std::size_t>(m)];
        for (std::size_t t = 0; t < spec.n_frames(); ++t) {
            double acc = 0.0;
            for (std::size_t j = 0; j < f.weights.size(); ++j) {
                const double mag = spec.magnitudes.at(static_cast<std::size_t>(f.start_bin) + j, t);
                acc += f.weights[j] * mag * mag;
            }
            mel.values.at(static_cast<std::size_t>(m), t) = acc;
        }
    }
    return mel;
}

inline LogMelSpectrogram mel_spectrogram(const Spectrogram& spec, int n_mels, double fmin,
                                         double fmax)
{
    return mel_spectrogram(spec, MelFilterbank(n_mels, fmin, fmax, spec.window_size, spec.sample_rate));
}

/// Natural log with the power floored at 1e-10. No per-block max reference,
/// so amplitude scaling stays a pure additive offset.
inline LogMelSpectrogram log_compress(LogMelSpectrogram mel)
{
    for (double& v : mel.values.v) v = std::log(std::max(v, kPowerFloor));
    mel.log_scale = true;
    return mel;
}

/// Orthonormal DCT-II along the mel axis; first n_coeffs coefficients kept.
inline FrameSeries mfcc(const LogMelSpectrogram& logmel, int n_coeffs = 13)
{
    const int n_mels = logmel.n_mels;
    if (n_coeffs < 1 || n_coeffs > n_mels)
        throw std::invalid_argument("mfcc: need 1 <= n_coeffs <= n_mels");

    FrameSeries out;
    out.name = "mfcc";
    out.values = Mat(static_cast<std::size_t>(n_coeffs), logmel.n_frames());

    const double scale0 = std::sqrt(1.0 / n_mels);
    const double scale = std::sqrt(2.0 / n_mels);
    for (std::size_t t = 0; t < logmel.n_frames(); ++t) {
        for (int k = 0; k < n_coeffs; ++k) {
            double acc = 0.0;
            for (int m = 0; m < n_mels; ++m)
                acc += logmel.values.at(static_cast<std::size_t>(m), t) *
                       std::cos(kPi * k * (2.0 * m + 1.0) / (2.0 * n_mels));
            out.values.at(static_cast<std::size_t>(k), t) = acc * (k == 0 ? scale0 : scale);
        }
    }
    return out;
}

/// Local linear-regression slope over a centered window, edges replicated.
inline FrameSeries delta(const FrameSeries& series, int width = 9)
{
    if (width < 3 || width % 2 == 0)
        throw std::invalid_argument("delta: width must be odd and >= 3");
    if (series.n_frames() < 1) throw std::invalid_argument("delta: series has no frames");

    const int half = width / 2;
    double denom = 0.0;
    for (int n = 1; n <= half; ++n) denom += 2.0 * n * n;

    const std::int64_t frames = static_cast<std::int64_t>(series.n_frames());
    auto clamp_frame = [&](std::int64_t t) {
        return static_cast<std::size_t>(std::clamp<std::int64_t>(t, 0, frames - 1));
    };

    FrameSeries out;
    out.name = "delta_" + series.name;
    out.values = Mat(series.dims(), series.n_frames());
    for (std::size_t d = 0; d < series.dims(); ++d) {
        for (std::int64_t t = 0; t < frames; ++t) {
            double acc = 0.0;
            for (int n = 1; n <= half; ++n)
                acc += n * (series.values.at(d, clamp_frame(t + n)) -
                            series.values.at(d, clamp_frame(t - n)));
            out.values.at(d, static_cast<std::size_t>(t)) = acc / denom;
        }
    }
    return out;
}

/// Root-mean-square per centered frame.
inline FrameSeries frame_rms(const Block& block, int window = 2048, int hop = 1024)
{
    if (block.samples.empty()) throw std::invalid_argument("frame_rms: empty block");
    const std::size_t frames = detail::frame_count(block.samples.size(), static_cast<std::size_t>(hop));
    FrameSeries out;
    out.name = "rms";
    out.values = Mat(1, frames);
    std::vector<double> frame(static_cast<std::size_t>(window));
    for (std::size_t t = 0; t < frames; ++t) {
        detail::fill_frame(block.samples, t, window, hop, frame);
        double acc = 0.0;
        for (double s : frame) acc += s * s;
        out.values.at(0, t) = std::sqrt(acc / window);
    }
    return out;
}

/// Zero-crossing rate per centered frame: sign changes / (window - 1).
inline FrameSeries frame_zcr(const Block& block, int window = 2048, int hop = 1024)
{
    if (block.samples.empty()) throw std::invalid_argument("frame_zcr: empty block");
    const std::size_t frames = detail::frame_count(block.samples.size(), static_cast<std::size_t>(hop));
    FrameSeries out;
    out.name = "zcr";
    out.values = Mat(1, frames);
    std::vector<double> frame(static_cast<std::size_t>(window));
    for (std::size_t t = 0; t < frames; ++t) {
        detail::fill_frame(block.samples, t, window, hop, frame);
        int crossings = 0;
        for (int n = 0; n + 1 < window; ++n) {
            const bool a = frame[static_cast<std::size_t>(n)] >= 0.0;
            const bool b = frame[static_cast<std::size_t>(n) + 1] >= 0.0;
            if (a != b) ++crossings;
        }
        out.values.at(0, t) = static_cast<double>(crossings) / (window - 1);
    }
    return out;
}

/// Magnitude-weighted mean bin frequency. All-zero frames yield 0.
inline FrameSeries spectral_centroid(const Spectrogram& spec)
{
    FrameSeries out;
    out.name = "centroid";
    out.values = Mat(1, spec.n_frames());
    for (std::size_t t = 0; t < spec.n_frames(); ++t) {
        double wsum = 0.0, msum = 0.0;
        for (std::size_t k = 0; k < spec.n_bins(); ++k) {
            const double m = spec.magnitudes.at(k, t);
            wsum += m * spec.bin_freqs[k];
            msum += m;
        }
        out.values.at(0, t) = msum > 0.0 ? wsum / msum : 0.0;
    }
    return out;
}

/// Geometric / arithmetic mean of the power spectrum, power floored at 1e-10.
inline FrameSeries spectral_flatness(const Spectrogram& spec)
{
    FrameSeries out;
    out.name = "flatness";
    out.values = Mat(1, spec.n_frames());
    for (std::size_t t = 0; t < spec.n_frames(); ++t) {
        double log_sum = 0.0, sum = 0.0;
        for (std::size_t k = 0; k < spec.n_bins(); ++k) {
            const double m = spec.magnitudes.at(k, t);
            const double p = std::max(m * m, kPowerFloor);
            log_sum += std::log(p);
            sum += p;
        }
        const double n = static_cast<double>(spec.n_bins());
        out.values.at(0, t) = std::exp(log_sum / n) / (sum / n);
    }
    return out;
}

/// Frequency of the smallest bin where cumulative magnitude reaches
/// fraction * total. All-zero frames yield 0.
inline FrameSeries spectral_rolloff(const Spectrogram& spec, double fraction = 0.85)
{
    if (fraction <= 0.0 || fraction >= 1.0)
        throw std::invalid_argument("spectral_rolloff: need 0 < fraction < 1");
    FrameSeries out;
    out.name = "rolloff";
    out.values = Mat(1, spec.n_frames());
    for (std::size_t t = 0; t < spec.n_frames(); ++t) {
        double total = 0.0;
        for (std::size_t k = 0; k < spec.n_bins(); ++k) total += spec.magnitudes.at(k, t);
        if (total <= 0.0) {
            out.values.at(0, t) = 0.0;
            continue;
        }
        const double target = fraction * total;
        double cum = 0.0;
        double freq = spec.bin_freqs.back();
        for (std::size_t k = 0; k < spec.n_bins(); ++k) {
            cum += spec.magnitudes.at(k, t);
            if (cum >= target) {
                freq = spec.bin_freqs[k];
                break;
            }
        }
        out.values.at(0, t) = freq;
    }
    return out;
}

/// Per-sub-band log(peak mean) - log(valley mean) over octave bands above
/// contrast_fmin, plus the lowest band: n_bands + 1 output rows.
inline FrameSeries spectral_contrast(const Spectrogram& spec, int n_bands = 6,
                                     double quantile = 0.02, double fmin = 200.0)
{
    if (n_bands < 1) throw std::invalid_argument("spectral_contrast: n_bands must be >= 1");
    if (quantile <= 0.0 || quantile >= 1.0)
        throw std::invalid_argument("spectral_contrast: need 0 < quantile < 1");

    // band edges: 0, fmin, fmin*2, ..., fmin*2^(n_bands-1), Nyquist
    std::vector<double> edges;
    edges.push_back(0.0);
    for (int b = 0; b < n_bands; ++b) edges.push_back(fmin * std::pow(2.0, b));
    edges.push_back(spec.sample_rate / 2.0);

    const std::size_t rows = static_cast<std::size_t>(n_bands) + 1;
    std::vector<std::pair<std::size_t, std::size_t>> band_bins(rows); // [lo, hi)
    for (std::size_t b = 0; b < rows; ++b) {
        std::size_t lo = spec.n_bins(), hi = 0;
        for (std::size_t k = 0; k < spec.n_bins(); ++k) {
            const double f = spec.bin_freqs[k];
            const bool in = b + 1 < rows ? (f >= edges[b] && f < edges[b + 1])
                                         : (f >= edges[b] && f <= edges[b + 1] + 1e-9);
            if (in) {
                lo = std::min(lo, k);
                hi = std::max(hi, k + 1);
            }
        }
        if (lo >= hi)
            throw std::invalid_argument("spectral_contrast: empty sub-band in layout");
        band_bins[b] = {lo, hi};
    }

    FrameSeries out;
    out.name = "contrast";
    out.values = Mat(rows, spec.n_frames());
    std::vector<double> mags;
    for (std::size_t t = 0; t < spec.n_frames(); ++t) {
        for (std::size_t b = 0; b < rows; ++b) {
            const auto [lo, hi] = band_bins[b];
            mags.clear();
            for (std::size_t k = lo; k < hi; ++k)
                mags.push_back(std::max(spec.magnitudes.at(k, t), kPowerFloor));
            std::sort(mags.begin(), mags.end());
            const std::size_t q = std::max<std::size_t>(
                1, static_cast<std::size_t>(quantile * static_cast<double>(mags.size())));
            double bottom = 0.0, top = 0.0;
            for (std::size_t i = 0; i < q; ++i) {
                bottom += mags[i];
                top += mags[mags.size() - 1 - i];
            }
            out.values.at(b, t) = std::log(top / q) - std::log(bottom / q);
        }
    }
    return out;
}

} // namespace screamkit
