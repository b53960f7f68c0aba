#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace slovasc::csv {

/// Splits one line of comma-separated text. Double-quoted fields may contain
/// commas and doubled quotes.
std::vector<std::string> split_line(std::string_view line);

std::string escape(std::string_view field);
std::string join(const std::vector<std::string>& fields);

std::string trim(std::string_view s);

/// Fixed 6-significant-digit rendering used for every serialised real.
std::string format_real(double v);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// -1 when absent.
    int column(std::string_view name) const;
};

/// Reads a whole file; rows keep whatever field count they have.
Table read(const std::filesystem::path& path);

}  // namespace slovasc::csv
