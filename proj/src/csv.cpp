#include "mdsrel/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mdsrel/errors.hpp"

namespace mdsrel
{

std::string format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& cell)
{
    if (cell == "nan")
        return std::nan("");
    if (cell == "inf")
        return INFINITY;
    if (cell == "-inf")
        return -INFINITY;
    double v = 0.0;
    const char* first = cell.data();
    const char* last = first + cell.size();
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last)
        throw ConfigError("not a number: '" + cell + "'");
    return v;
}

void write_csv(std::ostream& os, const Table& table)
{
    for (std::size_t c = 0; c < table.header.size(); ++c)
        os << (c ? "," : "") << table.header[c];
    os << '\n';
    for (const auto& row : table.rows)
    {
        for (std::size_t c = 0; c < row.size(); ++c)
            os << (c ? "," : "") << format_double(row[c]);
        os << '\n';
    }
}

void write_csv(const std::filesystem::path& path, const Table& table)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw ConfigError("cannot open '" + path.string() + "' for writing");
    write_csv(os, table);
    if (!os)
        throw ConfigError("failed writing '" + path.string() + "'");
}

namespace
{

std::vector<std::string> split_commas(const std::string& line)
{
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ','))
        cells.push_back(cell);
    if (!line.empty() && line.back() == ',')
        cells.emplace_back();
    return cells;
}

} // namespace

Table read_csv(const std::filesystem::path& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw ConfigError("cannot open CSV '" + path.string() + "'");
    Table table;
    std::string line;
    if (!std::getline(is, line) || line.empty())
        throw ConfigError("CSV '" + path.string() + "' has no header row");
    table.header = split_commas(line);
    for (const auto& h : table.header)
        if (h.empty() || std::isdigit(static_cast<unsigned char>(h[0])) || h[0] == '-' || h[0] == '.')
            throw ConfigError("CSV '" + path.string() + "' has no header row");
    std::size_t line_no = 1;
    while (std::getline(is, line))
    {
        ++line_no;
        if (line.empty())
            continue;
        auto cells = split_commas(line);
        if (cells.size() != table.header.size())
            throw ConfigError("CSV '" + path.string() + "' line " + std::to_string(line_no) + " has " +
                              std::to_string(cells.size()) + " cells, expected " +
                              std::to_string(table.header.size()));
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells)
            row.push_back(parse_double(c));
        table.rows.push_back(std::move(row));
    }
    return table;
}

} // namespace mdsrel
