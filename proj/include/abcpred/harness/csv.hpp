#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace abcpred::csv {

/// Shortest decimal string that round-trips to the same double.
std::string format(double v);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

void write(const std::filesystem::path& path, const Table& table);
Table read(const std::filesystem::path& path);
/// Column index by name; throws UsageError when absent.
std::size_t column(const Table& table, const std::string& name);

}  // namespace abcpred::csv
