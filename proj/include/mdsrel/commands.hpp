#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mdsrel/config.hpp"
#include "mdsrel/csv.hpp"
#include "mdsrel/hazard.hpp"
#include "mdsrel/simulator.hpp"

namespace mdsrel
{

enum ExitCode : int
{
    kExitOk = 0,
    kExitConfig = 2,
    kExitNumeric = 3,
    kExitCapacity = 4,
};

enum class Quantity
{
    ComponentHazard,
    ArrayHazard,
    Survival,
    Density,
    LowerBound,
    BaseHazard,
};

Quantity parse_quantity(std::string_view name);
std::string_view quantity_name(Quantity q);

/// Command-line overrides. Unset fields fall back to the config file, then to defaults.
struct CommandOptions
{
    std::filesystem::path config;
    std::optional<std::filesystem::path> out;
    std::optional<std::string> quantity;
    std::optional<double> q;
    std::optional<std::vector<double>> rates;
    std::optional<std::int64_t> trials;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::optional<double> eps;
    std::optional<bool> loglog;
    std::vector<std::filesystem::path> csv_paths;
};

/// One row per grid point. A point that fails numerically becomes nan and
/// a warning line on `warn`.
Table compute_curve(const RunConfig& config, Quantity quantity, std::ostream& warn);

struct MttfReport
{
    MttfResult result;
    double afr = 0.0;
};

/// Quadrature of the array survival out to grid.end.
MttfReport compute_mttf(const RunConfig& config, double truncation_eps);

/// Rows (n, r, finite-n mu_c, asymptote, lower bound) at the time a with R(a) = 1/q,
/// for every configured block length and every rate.
Table compute_asymptotic(const RunConfig& config, double q, const std::vector<double>& rates,
                         std::ostream& warn);

/// Default rate grid for the asymptotic table: 0.02, 0.04, ..., 1.
std::vector<double> default_rate_grid();

struct SimulationReport
{
    Table table;
    SimOutcome outcome;
};

SimulationReport compute_simulation(const RunConfig& config, std::int64_t trials, std::uint64_t seed,
                                    unsigned threads);

/// Self-contained matplotlib script overlaying every CSV against its first column.
std::string make_plot_script(const std::vector<std::filesystem::path>& csv_paths, bool loglog);

// Subcommand entry points. Each returns an ExitCode and reports failures on `err`.
int cmd_curve(const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_mttf(const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_asymptotic(const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_simulate(const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_plotscript(const CommandOptions& options, std::ostream& out, std::ostream& err);

} // namespace mdsrel
