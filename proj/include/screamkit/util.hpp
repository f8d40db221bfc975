#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace screamkit {

inline constexpr double kPi = 3.14159265358979323846;

/// Dense row-major matrix of doubles. Used for spectrograms, log-mel
/// patches and anything else shaped (rows x cols).
struct Mat {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> v;

    Mat() = default;
    Mat(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), v(r * c, fill) {}

    double& at(std::size_t r, std::size_t c) { return v[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return v[r * cols + c]; }
    bool empty() const { return v.empty(); }

    friend bool operator==(const Mat& a, const Mat& b)
    {
        return a.rows == b.rows && a.cols == b.cols && a.v == b.v;
    }
};

inline std::vector<std::uint8_t> read_binary_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return bytes;
}

inline std::string read_text_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

/// FNV-1a 64-bit hash, used as the model-file checksum.
inline std::uint64_t fnv1a64(const std::string& data)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

enum class LogLevel { Debug = 0, Info = 1, Warn = 2, Error = 3, Off = 4 };

// Log level comes from SCREAMKIT_LOG (debug|info|warn|error|off), default info.
inline LogLevel log_level()
{
    static LogLevel level = [] {
        const char* env = std::getenv("SCREAMKIT_LOG");
        if (!env) return LogLevel::Info;
        std::string s(env);
        if (s == "debug") return LogLevel::Debug;
        if (s == "info") return LogLevel::Info;
        if (s == "warn") return LogLevel::Warn;
        if (s == "error") return LogLevel::Error;
        if (s == "off") return LogLevel::Off;
        return LogLevel::Info;
    }();
    return level;
}

inline void log_msg(LogLevel lvl, const std::string& msg)
{
    if (lvl < log_level()) return;
    static const char* names[] = {"debug", "info", "warn", "error"};
    std::fprintf(stderr, "[screamkit %s] %s\n", names[static_cast<int>(lvl)], msg.c_str());
}

inline void log_debug(const std::string& m) { log_msg(LogLevel::Debug, m); }
inline void log_info(const std::string& m) { log_msg(LogLevel::Info, m); }
inline void log_warn(const std::string& m) { log_msg(LogLevel::Warn, m); }
inline void log_error(const std::string& m) { log_msg(LogLevel::Error, m); }

} // namespace screamkit
