#pragma once

// Minimal stderr logger gated by the MESHVNE_LOG environment variable
// (error | warn | info | debug; default info).

#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string>

namespace meshvne {

enum class LogLevel : int { kError = 0, kWarn = 1, kInfo = 2, kDebug = 3 };

inline LogLevel log_threshold() {
    static const LogLevel level = [] {
        const char* env = std::getenv("MESHVNE_LOG");
        if (!env) return LogLevel::kInfo;
        const std::string v(env);
        if (v == "error") return LogLevel::kError;
        if (v == "warn") return LogLevel::kWarn;
        if (v == "debug") return LogLevel::kDebug;
        return LogLevel::kInfo;
    }();
    return level;
}

inline void log_message(LogLevel level, const std::string& msg) {
    if (static_cast<int>(level) > static_cast<int>(log_threshold())) return;
    static std::mutex mu;
    const char* tag = level == LogLevel::kError  ? "error"
                      : level == LogLevel::kWarn ? "warn"
                      : level == LogLevel::kInfo ? "info"
                                                 : "debug";
    std::lock_guard<std::mutex> lock(mu);
    std::cerr << "[" << tag << "] " << msg << std::endl;
}

inline void log_error(const std::string& msg) { log_message(LogLevel::kError, msg); }
inline void log_warn(const std::string& msg) { log_message(LogLevel::kWarn, msg); }
inline void log_info(const std::string& msg) { log_message(LogLevel::kInfo, msg); }
inline void log_debug(const std::string& msg) { log_message(LogLevel::kDebug, msg); }

}  // namespace meshvne
