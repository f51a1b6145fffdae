#include "abcpred/harness/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "abcpred/core/errors.hpp"

namespace abcpred::csv {

std::string format(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write(const std::filesystem::path& path, const Table& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write " + path.string());
    for (std::size_t j = 0; j < table.header.size(); ++j) out << (j ? "," : "") << table.header[j];
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << format(row[j]);
        out << '\n';
    }
}

namespace {
double parse(const std::string& s) {
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    if (s == "nan") return NAN;
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw UsageError("csv: bad number '" + s + "'");
    return v;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}
}  // namespace

Table read(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read " + path.string());
    Table t;
    std::string line;
    if (!std::getline(in, line)) throw UsageError(path.string() + ": empty file");
    t.header = split(line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = split(line);
        if (cells.size() != t.header.size()) throw UsageError(path.string() + ": ragged row");
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) row.push_back(parse(c));
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::size_t column(const Table& table, const std::string& name) {
    for (std::size_t j = 0; j < table.header.size(); ++j) {
        if (table.header[j] == name) return j;
    }
    throw UsageError("csv: no column '" + name + "'");
}

}  // namespace abcpred::csv
