#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "screamkit/util.hpp"

namespace screamkit {

inline constexpr int kPipelineRate = 44100;

/// Decoded audio: channels x length, amplitudes nominally in [-1, 1].
struct AudioClip {
    std::vector<std::vector<double>> samples;
    int sample_rate = 0;
    std::string source_id;

    std::size_t n_channels() const { return samples.size(); }
    std::size_t length() const { return samples.empty() ? 0 : samples[0].size(); }
    double duration() const
    {
        return sample_rate > 0 ? static_cast<double>(length()) / sample_rate : 0.0;
    }
};

struct DecodeError : std::runtime_error {
    enum class Kind { MalformedHeader, UnsupportedCodec, TruncatedData, BadSamples };
    Kind kind;
    DecodeError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

namespace detail {

inline std::uint32_t rd_u32(std::span<const std::uint8_t> b, std::size_t off)
{
    return static_cast<std::uint32_t>(b[off]) | (static_cast<std::uint32_t>(b[off + 1]) << 8) |
           (static_cast<std::uint32_t>(b[off + 2]) << 16) |
           (static_cast<std::uint32_t>(b[off + 3]) << 24);
}

inline std::uint16_t rd_u16(std::span<const std::uint8_t> b, std::size_t off)
{
    return static_cast<std::uint16_t>(b[off] | (b[off + 1] << 8));
}

inline double bessel_i0(double x)
{
    // power series; converges quickly for the beta values used here
    double sum = 1.0, term = 1.0;
    const double half = x / 2.0;
    for (int k = 1; k < 80; ++k) {
        term *= (half / k) * (half / k);
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return sum;
}

/// Polyphase windowed-sinc interpolation filter for rational rate conversion
/// by up/down. Kaiser window, taps_per_phase taps per branch, each branch
/// normalized to unit DC gain.
struct PolyphaseFilter {
    int up = 1;
    int down = 1;
    int taps_per_phase = 64;
    std::vector<double> h; // up * taps_per_phase, indexed h[phase * tpp + k]

    PolyphaseFilter(int up_, int down_, int tpp = 64, double kaiser_beta = 8.6)
        : up(up_), down(down_), taps_per_phase(tpp)
    {
        const int total = up * taps_per_phase;
        const double center = (total - 1) / 2.0;
        const double cutoff = std::min(1.0 / up, 1.0 / down); // fraction of Nyquist at rate*up
        const double i0_beta = bessel_i0(kaiser_beta);
        std::vector<double> proto(total);
        for (int n = 0; n < total; ++n) {
            const double t = n - center;
            const double x = cutoff * t;
            const double sinc = (x == 0.0) ? 1.0 : std::sin(kPi * x) / (kPi * x);
            const double r = 2.0 * n / (total - 1) - 1.0; // [-1, 1]
            const double w = bessel_i0(kaiser_beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / i0_beta;
            proto[n] = sinc * w;
        }
        // split into phases, normalize each branch to sum 1 (exact DC gain)
        h.assign(static_cast<std::size_t>(total), 0.0);
        for (int p = 0; p < up; ++p) {
            double s = 0.0;
            for (int k = 0; k < taps_per_phase; ++k) s += proto[p + k * up];
            for (int k = 0; k < taps_per_phase; ++k)
                h[static_cast<std::size_t>(p) * taps_per_phase + k] = proto[p + k * up] / s;
        }
    }
};

} // namespace detail

/// Decode a RIFF/WAVE byte stream. Supported sample formats: PCM 16-bit,
/// PCM 24-bit, IEEE float 32-bit. Integer samples are scaled by 1 / 2^(bits-1).
inline AudioClip decode_wav(std::span<const std::uint8_t> bytes, std::string source_id = "")
{
    using Kind = DecodeError::Kind;
    if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
        std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
        throw DecodeError(Kind::MalformedHeader, "not a RIFF/WAVE container: " + source_id);

    bool have_fmt = false;
    std::uint16_t format = 0, channels = 0, bits = 0;
    std::uint32_t rate = 0;
    std::size_t data_off = 0, data_size = 0;

    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const char* id = reinterpret_cast<const char*>(bytes.data() + pos);
        const std::uint32_t size = detail::rd_u32(bytes, pos + 4);
        const std::size_t body = pos + 8;
        if (std::memcmp(id, "fmt ", 4) == 0) {
            if (size < 16 || body + size > bytes.size())
                throw DecodeError(Kind::MalformedHeader, "bad fmt chunk: " + source_id);
            format = detail::rd_u16(bytes, body);
            channels = detail::rd_u16(bytes, body + 2);
            rate = detail::rd_u32(bytes, body + 4);
            bits = detail::rd_u16(bytes, body + 14);
            if (format == 0xFFFE) { // WAVE_FORMAT_EXTENSIBLE: subformat GUID leads with the tag
                if (size < 40)
                    throw DecodeError(Kind::MalformedHeader, "bad extensible fmt chunk: " + source_id);
                format = detail::rd_u16(bytes, body + 24);
            }
            have_fmt = true;
        } else if (std::memcmp(id, "data", 4) == 0) {
            if (body + size > bytes.size())
                throw DecodeError(Kind::TruncatedData, "data chunk truncated: " + source_id);
            data_off = body;
            data_size = size;
            pos = body + size + (size % 2);
            continue;
        }
        if (body + size > bytes.size())
            throw DecodeError(Kind::TruncatedData, "chunk exceeds file size: " + source_id);
        pos = body + size + (size % 2);
    }

    if (!have_fmt)
        throw DecodeError(Kind::MalformedHeader, "missing fmt chunk: " + source_id);
    if (data_off == 0 && data_size == 0)
        throw DecodeError(Kind::MalformedHeader, "missing data chunk: " + source_id);
    if (channels == 0 || rate == 0)
        throw DecodeError(Kind::MalformedHeader, "zero channel count or sample rate: " + source_id);

    const bool pcm16 = format == 1 && bits == 16;
    const bool pcm24 = format == 1 && bits == 24;
    const bool f32 = format == 3 && bits == 32;
    if (!pcm16 && !pcm24 && !f32)
        throw DecodeError(Kind::UnsupportedCodec,
                          "unsupported sample format (tag " + std::to_string(format) + ", " +
                              std::to_string(bits) + " bit): " + source_id);

    const std::size_t bytes_per_sample = bits / 8;
    const std::size_t frame_size = bytes_per_sample * channels;
    const std::size_t n_frames = data_size / frame_size;

    AudioClip clip;
    clip.sample_rate = static_cast<int>(rate);
    clip.source_id = std::move(source_id);
    clip.samples.assign(channels, std::vector<double>(n_frames));

    const std::uint8_t* d = bytes.data() + data_off;
    for (std::size_t f = 0; f < n_frames; ++f) {
        for (std::uint16_t c = 0; c < channels; ++c) {
            const std::uint8_t* s = d + f * frame_size + c * bytes_per_sample;
            double value = 0.0;
            if (pcm16) {
                const std::int16_t raw = static_cast<std::int16_t>(s[0] | (s[1] << 8));
                value = raw / 32768.0;
            } else if (pcm24) {
                std::int32_t raw = s[0] | (s[1] << 8) | (s[2] << 16);
                if (raw & 0x800000) raw |= ~0xFFFFFF; // sign-extend
                value = raw / 8388608.0;
            } else {
                const std::uint32_t u = static_cast<std::uint32_t>(s[0]) | (s[1] << 8u) |
                                        (s[2] << 16u) | (static_cast<std::uint32_t>(s[3]) << 24u);
                float fv;
                std::memcpy(&fv, &u, sizeof fv);
                if (!std::isfinite(fv))
                    throw DecodeError(DecodeError::Kind::BadSamples,
                                      "non-finite float sample: " + clip.source_id);
                value = fv;
            }
            clip.samples[c][f] = value;
        }
    }
    return clip;
}

inline AudioClip decode_wav_file(const std::string& path)
{
    const auto bytes = read_binary_file(path);
    return decode_wav(std::span<const std::uint8_t>(bytes.data(), bytes.size()), path);
}

/// Band-limited rational resampling (polyphase windowed-sinc, Kaiser window,
/// 64 taps per phase). Identity rates pass the clip through untouched.
/// Output length is round(input_length * target / source).
inline AudioClip resample(const AudioClip& clip, int target_rate)
{
    if (clip.sample_rate <= 0) throw std::invalid_argument("resample: clip has no sample rate");
    if (target_rate <= 0) throw std::invalid_argument("resample: target rate must be positive");
    if (clip.sample_rate == target_rate) return clip;

    const int g = std::gcd(clip.sample_rate, target_rate);
    const int up = target_rate / g;
    const int down = clip.sample_rate / g;
    const detail::PolyphaseFilter filter(up, down);
    const int tpp = filter.taps_per_phase;
    const int lead = tpp / 2; // group-delay compensation, in input samples

    AudioClip out;
    out.sample_rate = target_rate;
    out.source_id = clip.source_id;
    out.samples.reserve(clip.n_channels());

    const std::int64_t in_len = static_cast<std::int64_t>(clip.length());
    const std::int64_t out_len = static_cast<std::int64_t>(
        std::llround(static_cast<double>(in_len) * target_rate / clip.sample_rate));

    for (const auto& ch : clip.samples) {
        std::vector<double> y(static_cast<std::size_t>(out_len), 0.0);
        if (in_len > 0) {
            auto sample_at = [&](std::int64_t i) {
                // replicate edges so DC stays exact at the boundaries
                if (i < 0) return ch.front();
                if (i >= in_len) return ch.back();
                return ch[static_cast<std::size_t>(i)];
            };
            for (std::int64_t m = 0; m < out_len; ++m) {
                const std::int64_t u = m * down;
                const int phase = static_cast<int>(u % up);
                const std::int64_t q = u / up;
                const double* hp = &filter.h[static_cast<std::size_t>(phase) * tpp];
                double acc = 0.0;
                for (int k = 0; k < tpp; ++k) acc += hp[k] * sample_at(q - k + lead);
                y[static_cast<std::size_t>(m)] = acc;
            }
        }
        out.samples.push_back(std::move(y));
    }
    return out;
}

/// Unweighted per-sample mean across channels.
inline AudioClip downmix_mono(const AudioClip& clip)
{
    if (clip.n_channels() == 0) throw std::invalid_argument("downmix_mono: clip has no channels");
    if (clip.n_channels() == 1) return clip;

    AudioClip out;
    out.sample_rate = clip.sample_rate;
    out.source_id = clip.source_id;
    const std::size_t len = clip.length();
    std::vector<double> mono(len, 0.0);
    for (const auto& ch : clip.samples)
        for (std::size_t i = 0; i < len; ++i) mono[i] += ch[i];
    const double inv = 1.0 / static_cast<double>(clip.n_channels());
    for (auto& s : mono) s *= inv;
    out.samples.push_back(std::move(mono));
    return out;
}

/// Scale so the peak |sample| is exactly 1. All-zero clips pass through.
inline AudioClip peak_normalize(const AudioClip& clip)
{
    double peak = 0.0;
    for (const auto& ch : clip.samples)
        for (double s : ch) peak = std::max(peak, std::abs(s));
    if (peak == 0.0) return clip;

    AudioClip out = clip;
    const double inv = 1.0 / peak;
    for (auto& ch : out.samples)
        for (double& s : ch) s *= inv;
    return out;
}

/// decode -> resample(44100) -> downmix -> peak-normalize, the canonical form
/// every later stage consumes.
inline AudioClip load_canonical(const std::string& path)
{
    return peak_normalize(downmix_mono(resample(decode_wav_file(path), kPipelineRate)));
}

} // namespace screamkit
