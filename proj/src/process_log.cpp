#include "slovasc/process_log.hpp"

#include <algorithm>
#include <ctime>
#include <iomanip>
#include <sstream>

namespace slovasc {

std::string_view to_string(LogLevel level) noexcept {
    switch (level) {
        case LogLevel::Info: return "INFO";
        case LogLevel::Warn: return "WARN";
        case LogLevel::Error: return "ERROR";
    }
    return "INFO";
}

void ProcessLog::add(LogLevel level, std::string message) {
    entries_.push_back({std::chrono::system_clock::now(), level, std::move(message)});
}

std::size_t ProcessLog::count(LogLevel level) const noexcept {
    return static_cast<std::size_t>(std::count_if(
        entries_.begin(), entries_.end(), [level](const LogEntry& e) { return e.level == level; }));
}

bool ProcessLog::contains(LogLevel level, std::string_view needle) const {
    return std::any_of(entries_.begin(), entries_.end(), [&](const LogEntry& e) {
        return e.level == level && e.message.find(needle) != std::string::npos;
    });
}

std::string ProcessLog::format() const {
    std::ostringstream os;
    for (const auto& e : entries_) {
        const std::time_t t = std::chrono::system_clock::to_time_t(e.timestamp);
        std::tm tm{};
        gmtime_r(&t, &tm);
        os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ") << ' ' << to_string(e.level) << ' '
           << e.message << '\n';
    }
    return os.str();
}

}  // namespace slovasc
