#pragma once

#include <chrono>
#include <string>
#include <vector>

namespace slovasc {

enum class LogLevel { Info, Warn, Error };

struct LogEntry {
    std::chrono::system_clock::time_point timestamp;
    LogLevel level = LogLevel::Info;
    std::string message;
};

/// Ordered per-file log. Not thread-safe; each file being processed owns its own.
class ProcessLog {
public:
    void info(std::string message) { add(LogLevel::Info, std::move(message)); }
    void warn(std::string message) { add(LogLevel::Warn, std::move(message)); }
    void error(std::string message) { add(LogLevel::Error, std::move(message)); }
    void add(LogLevel level, std::string message);

    const std::vector<LogEntry>& entries() const noexcept { return entries_; }
    std::size_t count(LogLevel level) const noexcept;
    bool contains(LogLevel level, std::string_view needle) const;

    /// One line per entry: ISO-8601 timestamp, level, message.
    std::string format() const;

private:
    std::vector<LogEntry> entries_;
};

std::string_view to_string(LogLevel level) noexcept;

/// Forwards to `log` when non-null. Library functions take an optional log sink.
inline void warn_to(ProcessLog* log, std::string message) {
    if (log) log->warn(std::move(message));
}
inline void info_to(ProcessLog* log, std::string message) {
    if (log) log->info(std::move(message));
}

}  // namespace slovasc
