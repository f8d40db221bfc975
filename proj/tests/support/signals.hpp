#pragma once

// Test fixtures: signal generators, a minimal WAV writer and a synthetic
// labeled corpus (sine = Sing, colored noise bursts = screams, silence =
// NoVocal) for pipeline and end-to-end runs.

#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <screamkit/rng.hpp>
#include <screamkit/util.hpp>

namespace testsupport {

inline std::vector<double> sine(double freq, double seconds, int rate = 44100, double amp = 1.0,
                                double phase = 0.0)
{
    const std::size_t n = static_cast<std::size_t>(std::llround(seconds * rate));
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = amp * std::sin(2.0 * screamkit::kPi * freq * static_cast<double>(i) / rate + phase);
    return x;
}

inline std::vector<double> white_noise(std::size_t n, std::uint64_t seed, double amp = 1.0)
{
    screamkit::Rng rng(seed);
    std::vector<double> x(n);
    for (auto& v : x) v = amp * (rng.uniform() * 2.0 - 1.0);
    return x;
}

inline std::vector<double> lowpass(std::vector<double> x, double alpha)
{
    double state = 0.0;
    for (auto& v : x) {
        state += alpha * (v - state);
        v = state;
    }
    return x;
}

inline std::vector<double> highpass(std::vector<double> x, double alpha)
{
    double state = 0.0, prev = 0.0;
    for (auto& v : x) {
        const double in = v;
        state = alpha * (state + in - prev);
        prev = in;
        v = state;
    }
    return x;
}

// --- WAV encoding -----------------------------------------------------------

namespace detail {

inline void put_u32(std::vector<std::uint8_t>& b, std::uint32_t v)
{
    b.push_back(v & 0xFF);
    b.push_back((v >> 8) & 0xFF);
    b.push_back((v >> 16) & 0xFF);
    b.push_back((v >> 24) & 0xFF);
}

inline void put_u16(std::vector<std::uint8_t>& b, std::uint16_t v)
{
    b.push_back(v & 0xFF);
    b.push_back((v >> 8) & 0xFF);
}

inline void put_tag(std::vector<std::uint8_t>& b, const char* tag)
{
    for (int i = 0; i < 4; ++i) b.push_back(static_cast<std::uint8_t>(tag[i]));
}

} // namespace detail

/// Encode channels x length samples as a WAV byte stream.
/// format: 1 = PCM (16 or 24 bit), 3 = IEEE float 32.
inline std::vector<std::uint8_t> wav_bytes(const std::vector<std::vector<double>>& channels,
                                           int rate, int format = 1, int bits = 16)
{
    const std::uint16_t n_ch = static_cast<std::uint16_t>(channels.size());
    const std::size_t n_frames = channels.empty() ? 0 : channels[0].size();
    const int bytes_per_sample = bits / 8;
    const std::uint32_t data_size =
        static_cast<std::uint32_t>(n_frames * n_ch * static_cast<std::size_t>(bytes_per_sample));

    std::vector<std::uint8_t> b;
    detail::put_tag(b, "RIFF");
    detail::put_u32(b, 36 + data_size);
    detail::put_tag(b, "WAVE");
    detail::put_tag(b, "fmt ");
    detail::put_u32(b, 16);
    detail::put_u16(b, static_cast<std::uint16_t>(format));
    detail::put_u16(b, n_ch);
    detail::put_u32(b, static_cast<std::uint32_t>(rate));
    detail::put_u32(b, static_cast<std::uint32_t>(rate * n_ch * bytes_per_sample));
    detail::put_u16(b, static_cast<std::uint16_t>(n_ch * bytes_per_sample));
    detail::put_u16(b, static_cast<std::uint16_t>(bits));
    detail::put_tag(b, "data");
    detail::put_u32(b, data_size);

    for (std::size_t f = 0; f < n_frames; ++f) {
        for (std::uint16_t c = 0; c < n_ch; ++c) {
            const double v = channels[c][f];
            if (format == 3) {
                const float fv = static_cast<float>(v);
                std::uint32_t u;
                std::memcpy(&u, &fv, sizeof u);
                detail::put_u32(b, u);
            } else if (bits == 16) {
                const double clamped = std::max(-1.0, std::min(1.0, v));
                const std::int32_t raw =
                    static_cast<std::int32_t>(std::lround(clamped * 32767.0));
                detail::put_u16(b, static_cast<std::uint16_t>(raw & 0xFFFF));
            } else { // 24-bit
                const double clamped = std::max(-1.0, std::min(1.0, v));
                const std::int32_t raw =
                    static_cast<std::int32_t>(std::lround(clamped * 8388607.0));
                b.push_back(raw & 0xFF);
                b.push_back((raw >> 8) & 0xFF);
                b.push_back((raw >> 16) & 0xFF);
            }
        }
    }
    return b;
}

inline void write_wav(const std::string& path, const std::vector<std::vector<double>>& channels,
                      int rate, int format = 1, int bits = 16)
{
    const auto bytes = wav_bytes(channels, rate, format, bits);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

// --- synthetic corpus -------------------------------------------------------

/// Segment plan of one synthetic song: (label or "" for silence, seconds).
using SegmentPlan = std::vector<std::pair<std::string, double>>;

inline std::vector<double> render_segment(const std::string& label, double seconds,
                                          double sing_freq, std::uint64_t seed)
{
    const std::size_t n = static_cast<std::size_t>(std::llround(seconds * 44100));
    if (label.empty()) return std::vector<double>(n, 0.0);
    if (label == "Sing") return sine(sing_freq, seconds, 44100, 0.8);
    if (label == "HighFry") return highpass(white_noise(n, seed, 0.8), 0.9);
    if (label == "MidFry") return white_noise(n, seed, 0.8);
    if (label == "LowFry") return lowpass(white_noise(n, seed, 0.8), 0.05);
    if (label == "Layered") {
        auto x = white_noise(n, seed, 0.5);
        const auto s = sine(sing_freq, seconds, 44100, 0.5);
        for (std::size_t i = 0; i < n; ++i) x[i] += s[i];
        return x;
    }
    return std::vector<double>(n, 0.0);
}

struct SynthCorpus {
    std::string manifest_path;
    std::filesystem::path dir;
};

/// Build a small labeled corpus on disk: per band, `songs_per_band` WAV files
/// plus annotation CSVs, and a manifest referencing them. Segment plans cycle
/// Sing / silence / scream / silence so majority labeling is unambiguous.
inline SynthCorpus make_synth_corpus(const std::filesystem::path& dir, int n_bands,
                                     int songs_per_band, std::uint64_t seed,
                                     bool six_class = false)
{
    std::filesystem::create_directories(dir);
    screamkit::Rng rng(seed);
    const std::vector<std::string> screams =
        six_class ? std::vector<std::string>{"HighFry", "MidFry", "LowFry", "Layered"}
                  : std::vector<std::string>{"MidFry"};

    std::ostringstream manifest;
    manifest << "song_id,band_id,audio_path,annotation_path\n";
    for (int band = 0; band < n_bands; ++band) {
        const std::string band_id = "band" + std::to_string(band);
        const double sing_freq = 220.0 + 40.0 * band;
        for (int s = 0; s < songs_per_band; ++s) {
            const std::string song_id = band_id + "_song" + std::to_string(s);
            SegmentPlan plan;
            for (std::size_t rep = 0; rep < 3; ++rep) {
                plan.push_back({"Sing", 2.0});
                plan.push_back({"", 2.0});
                plan.push_back({screams[(rep + static_cast<std::size_t>(s)) % screams.size()], 2.0});
                plan.push_back({"", 2.0});
            }

            std::vector<double> samples;
            std::ostringstream ann;
            ann << "start_seconds,end_seconds,label\n";
            double t = 0.0;
            for (const auto& [label, seconds] : plan) {
                const auto seg = render_segment(label, seconds, sing_freq, rng.next_u64());
                samples.insert(samples.end(), seg.begin(), seg.end());
                if (!label.empty())
                    ann << t << "," << t + seconds << "," << label << "\n";
                t += seconds;
            }

            const auto wav_path = dir / (song_id + ".wav");
            const auto ann_path = dir / (song_id + ".csv");
            write_wav(wav_path.string(), {samples}, 44100);
            screamkit::write_text_file(ann_path.string(), ann.str());
            manifest << song_id << "," << band_id << "," << wav_path.string() << ","
                     << ann_path.string() << "\n";
        }
    }
    const auto manifest_path = dir / "manifest.csv";
    screamkit::write_text_file(manifest_path.string(), manifest.str());
    return {manifest_path.string(), dir};
}

/// Class-colored band pattern in the mel plane: class k gets a bright
/// horizontal stripe at a class-specific row range, plus mild noise.
inline screamkit::Mat mel_pattern(int class_id, int n_classes, std::size_t rows, std::size_t cols,
                                  screamkit::Rng& rng)
{
    screamkit::Mat m(rows, cols, -5.0);
    const std::size_t band_h = rows / static_cast<std::size_t>(n_classes);
    const std::size_t lo = static_cast<std::size_t>(class_id) * band_h;
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            double v = -5.0 + 0.3 * rng.normal();
            if (r >= lo && r < lo + band_h) v += 6.0;
            m.at(r, c) = v;
        }
    return m;
}

/// Two-dimensional Gaussian blobs around the given centers.
inline void make_blobs(const std::vector<std::array<double, 2>>& centers, int per_class,
                       double sigma, std::uint64_t seed, std::vector<std::vector<double>>& X,
                       std::vector<int>& y)
{
    screamkit::Rng rng(seed);
    X.clear();
    y.clear();
    for (std::size_t c = 0; c < centers.size(); ++c) {
        for (int i = 0; i < per_class; ++i) {
            X.push_back({centers[c][0] + sigma * rng.normal(), centers[c][1] + sigma * rng.normal()});
            y.push_back(static_cast<int>(c));
        }
    }
}

} // namespace testsupport
