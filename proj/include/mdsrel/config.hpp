#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mdsrel/hazard.hpp"
#include "mdsrel/mds.hpp"

namespace mdsrel
{

enum class HazardKind
{
    Constant,
    Weibull,
    Bathtub,
    Tabulated,
};

struct HazardSection
{
    HazardKind kind = HazardKind::Constant;
    double rate = 0.0;                   // constant
    double shape = 1.0, scale = 1.0;     // weibull
    std::array<double, 3> shapes{0.5, 1.0, 2.5};   // bathtub
    std::array<double, 3> scales{100.0, 200.0, 500.0};
    double t1 = 100.0, t2 = 1000.0;
    std::vector<double> times, rates;    // tabulated
    friend bool operator==(const HazardSection&, const HazardSection&) = default;
};

enum class Spacing
{
    Linear,
    Log,
};

struct GridSection
{
    double start = 0.0;
    double end = 1.0;
    std::int64_t points = 2;
    Spacing spacing = Spacing::Linear;
    friend bool operator==(const GridSection&, const GridSection&) = default;
};

struct SimulationSection
{
    std::int64_t trials = 0;
    std::uint64_t seed = 0;
    friend bool operator==(const SimulationSection&, const SimulationSection&) = default;
};

struct AsymptoticSection
{
    double q = 1.5;
    std::vector<double> rates;
    std::vector<std::int64_t> block_lengths{50, 300};
    friend bool operator==(const AsymptoticSection&, const AsymptoticSection&) = default;
};

struct OutputSection
{
    std::string path; // empty: standard output
    bool loglog = false;
    friend bool operator==(const OutputSection&, const OutputSection&) = default;
};

/**
 * Parsed run configuration.
 *
 * File format: `[section]` headers followed by `key = value` lines; `#` starts a
 * comment. Unknown sections and keys, duplicates and keys that do not belong to
 * the chosen hazard kind are all rejected with a ConfigError naming
 * `section.key`.
 *
 *     [hazard]   kind = constant | weibull | bathtub | tabulated
 *                rate                       (constant)
 *                shape, scale               (weibull)
 *                shapes, scales, t1, t2     (bathtub, all optional)
 *                times, rates               (tabulated, comma lists)
 *     [array]    codes = (25,15) (12,10)    one (n,k) per dimension
 *     [grid]     start, end, points, spacing = linear | log
 *     [simulation]  trials, seed            optional section
 *     [asymptotic]  q, rates, block_lengths optional section
 *     [output]   path, loglog = true | false   optional section
 */
struct RunConfig
{
    HazardSection hazard;
    std::vector<MdsCode> codes;
    GridSection grid;
    std::optional<SimulationSection> simulation;
    std::optional<AsymptoticSection> asymptotic;
    OutputSection output;
    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::filesystem::path& path);
std::string serialize_run_config(const RunConfig& config);

HazardModelPtr make_hazard_model(const HazardSection& section);
ArrayConfig make_array(const RunConfig& config);
std::vector<double> make_grid(const GridSection& grid);

/// k = r n, provided r n is an integer (to 1e-9); ConfigError otherwise.
std::int64_t data_count_for_rate(double r, std::int64_t n);

/// "0.1, 0.2,0.3" -> {0.1, 0.2, 0.3}. `what` names the source in error messages.
std::vector<double> parse_number_list(std::string_view text, std::string_view what);

} // namespace mdsrel
