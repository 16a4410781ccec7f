#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace mdsrel
{

/// Header plus numeric rows; every row has one cell per header column.
struct Table
{
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

/// Shortest decimal that parses back to the same double; "nan", "inf", "-inf" otherwise.
std::string format_double(double v);

/// Parses a cell written by format_double (also accepts any plain decimal).
double parse_double(const std::string& cell);

/// Comma separated, '\n' line endings, header first.
void write_csv(std::ostream& os, const Table& table);
void write_csv(const std::filesystem::path& path, const Table& table);

/// Throws ConfigError if the file is missing, empty, or a row is ragged or non-numeric.
Table read_csv(const std::filesystem::path& path);

} // namespace mdsrel
