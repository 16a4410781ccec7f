#include "mdsrel/commands.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "mdsrel/errors.hpp"
#include "mdsrel/mds.hpp"

namespace mdsrel
{

namespace
{

constexpr std::pair<Quantity, std::string_view> kQuantities[] = {
    {Quantity::ComponentHazard, "component_hazard"},
    {Quantity::ArrayHazard, "array_hazard"},
    {Quantity::Survival, "survival"},
    {Quantity::Density, "density"},
    {Quantity::LowerBound, "lower_bound"},
    {Quantity::BaseHazard, "base_hazard"},
};

double evaluate_quantity(Quantity q, double x, const ArrayConfig& array, const HazardModel& model)
{
    const bool single = array.dimensions() == 1;
    const MdsCode& first = array.dims().front();
    switch (q)
    {
    case Quantity::ComponentHazard:
        return single ? mu_c(x, first, model) : multidim_mu_c(x, array, model);
    case Quantity::ArrayHazard:
        return array_hazard(x, array, model);
    case Quantity::Survival:
        return system_survival(x, array, model);
    case Quantity::Density:
        return single ? system_density(x, first, model)
                      : array_hazard(x, array, model) * system_survival(x, array, model);
    case Quantity::LowerBound:
    {
        if (single)
            return mu_c_lower_bound(x, first, model);
        const double R = model.reliability(x);
        const double r = array.total_rate(array.dimensions());
        if (R >= 1.0)
            return 0.0;
        return model.hazard(x) * std::max(0.0, (1.0 - R / r) / (1.0 - R));
    }
    case Quantity::BaseHazard:
        return model.hazard(x);
    }
    throw DomainError("unknown quantity");
}

/// Runs `body`, translating exceptions into exit codes and a diagnostic line.
int guarded(std::ostream& err, const std::function<int()>& body)
{
    try
    {
        return body();
    }
    catch (const ConfigError& e)
    {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    catch (const CapacityError& e)
    {
        err << "error: " << e.what() << "\n";
        return kExitCapacity;
    }
    catch (const std::exception& e)
    {
        err << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
}

std::optional<std::filesystem::path> output_path(const CommandOptions& options, const RunConfig& config)
{
    if (options.out)
        return options.out;
    if (!config.output.path.empty())
        return std::filesystem::path(config.output.path);
    return std::nullopt;
}

void emit(const Table& table, const std::optional<std::filesystem::path>& path, std::ostream& out)
{
    if (path)
        write_csv(*path, table);
    else
        write_csv(out, table);
}

std::string python_string(const std::string& s)
{
    std::string out = "\"";
    for (char c : s)
    {
        if (c == '\\' || c == '"')
            out += '\\';
        out += c;
    }
    return out + "\"";
}

} // namespace

Quantity parse_quantity(std::string_view name)
{
    for (const auto& [q, n] : kQuantities)
        if (n == name)
            return q;
    throw ConfigError("unknown quantity '" + std::string(name) +
                      "' (expected component_hazard, array_hazard, survival, density, lower_bound or base_hazard)");
}

std::string_view quantity_name(Quantity q)
{
    for (const auto& [v, n] : kQuantities)
        if (v == q)
            return n;
    return "unknown";
}

Table compute_curve(const RunConfig& config, Quantity quantity, std::ostream& warn)
{
    const auto model = make_hazard_model(config.hazard);
    const auto array = make_array(config);
    Table table{{"x_hours", std::string(quantity_name(quantity))}, {}};
    for (double x : make_grid(config.grid))
    {
        double v;
        try
        {
            v = evaluate_quantity(quantity, x, array, *model);
        }
        catch (const std::exception& e)
        {
            warn << "warning: " << quantity_name(quantity) << " at x = " << format_double(x) << ": " << e.what()
                 << "\n";
            v = std::nan("");
        }
        table.rows.push_back({x, v});
    }
    return table;
}

MttfReport compute_mttf(const RunConfig& config, double truncation_eps)
{
    const auto model = make_hazard_model(config.hazard);
    const auto array = make_array(config);
    MttfOptions opts;
    opts.max_horizon = config.grid.end;
    opts.initial_step = config.grid.end / 1048576.0;
    MttfReport report;
    report.result = mttf([&](double x) { return system_survival(x, array, *model); }, truncation_eps, opts);
    report.afr = afr(report.result.hours);
    return report;
}

std::vector<double> default_rate_grid()
{
    std::vector<double> rates;
    for (int i = 1; i <= 50; ++i)
        rates.push_back(i / 50.0);
    return rates;
}

Table compute_asymptotic(const RunConfig& config, double q, const std::vector<double>& rates, std::ostream& warn)
{
    if (!(q > 1.0))
        throw ConfigError("q must be > 1, got " + format_double(q));
    if (rates.empty())
        throw ConfigError("rate list is empty");
    const std::vector<std::int64_t> lengths =
        config.asymptotic ? config.asymptotic->block_lengths : AsymptoticSection{}.block_lengths;
    // Reject every non-integral k before computing anything.
    for (auto n : lengths)
        for (double r : rates)
            data_count_for_rate(r, n);

    const auto model = make_hazard_model(config.hazard);
    const double a = solve_time_for_q(*model, q);
    const double lambda_a = model->hazard(a);
    Table table{{"n", "r", "finite_n_mu_c", "asymptotic_mu_c", "lower_bound"}, {}};
    for (auto n : lengths)
        for (double r : rates)
        {
            const MdsCode code(n, data_count_for_rate(r, n));
            auto guard = [&](const char* what, auto&& fn) {
                try
                {
                    return static_cast<double>(fn());
                }
                catch (const std::exception& e)
                {
                    warn << "warning: " << what << " at n = " << n << ", r = " << format_double(r) << ": "
                         << e.what() << "\n";
                    return std::nan("");
                }
            };
            table.rows.push_back({static_cast<double>(n), r,
                                  guard("finite_n_mu_c", [&] { return mu_c(a, code, *model); }),
                                  guard("asymptotic_mu_c", [&] { return asymptotic_mu_c(q, r, lambda_a); }),
                                  guard("lower_bound", [&] { return mu_c_lower_bound(a, code, *model); })});
        }
    return table;
}

SimulationReport compute_simulation(const RunConfig& config, std::int64_t trials, std::uint64_t seed,
                                    unsigned threads)
{
    SimConfig sim{make_array(config), make_hazard_model(config.hazard), trials, seed, make_grid(config.grid),
                  threads};
    SimulationReport report;
    report.outcome = run_simulation(sim);
    report.table.header = {"x_hours", "survival_hat", "half_width_95", "survival_closed_form"};
    for (std::size_t i = 0; i < sim.grid.size(); ++i)
    {
        double closed;
        try
        {
            closed = system_survival(sim.grid[i], sim.config, *sim.model);
        }
        catch (const std::exception&)
        {
            closed = std::nan("");
        }
        report.table.rows.push_back(
            {sim.grid[i], report.outcome.survival_hat[i], report.outcome.half_width_95[i], closed});
    }
    return report;
}

std::string make_plot_script(const std::vector<std::filesystem::path>& csv_paths, bool loglog)
{
    std::ostringstream os;
    os << "#!/usr/bin/env python3\n"
          "# Usage: python3 <this script> [image.png]   (shows a window when no image path is given)\n"
          "import csv\n"
          "import sys\n"
          "\n"
          "import matplotlib\n"
          "if len(sys.argv) > 1:\n"
          "    matplotlib.use(\"Agg\")\n"
          "import matplotlib.pyplot as plt\n"
          "\n"
          "CSV_FILES = [\n";
    for (const auto& p : csv_paths)
        os << "    " << python_string(p.string()) << ",\n";
    os << "]\n"
          "LOGLOG = "
       << (loglog ? "True" : "False")
       << "\n"
          "\n"
          "\n"
          "def load(path):\n"
          "    with open(path, newline=\"\") as fh:\n"
          "        rows = list(csv.reader(fh))\n"
          "    header, body = rows[0], [[float(c) for c in r] for r in rows[1:] if r]\n"
          "    return header, body\n"
          "\n"
          "\n"
          "fig, ax = plt.subplots()\n"
          "for path in CSV_FILES:\n"
          "    header, body = load(path)\n"
          "    # Tables with an 'n' column hold one curve per block length.\n"
          "    if \"n\" in header:\n"
          "        ni = header.index(\"n\")\n"
          "        rest = [i for i in range(len(header)) if i != ni]\n"
          "        xi, ys = rest[0], rest[1:]\n"
          "        groups = sorted({r[ni] for r in body})\n"
          "    else:\n"
          "        ni, xi, ys, groups = None, 0, list(range(1, len(header))), [None]\n"
          "    for g in groups:\n"
          "        sel = [r for r in body if ni is None or r[ni] == g]\n"
          "        for yi in ys:\n"
          "            label = path + \": \" + header[yi] + (\"\" if g is None else \" (n=%d)\" % g)\n"
          "            pts = [(r[xi], r[yi]) for r in sel if r[yi] == r[yi]]\n"
          "            if LOGLOG:\n"
          "                pts = [(x, y) for x, y in pts if x > 0 and y > 0]\n"
          "            ax.plot([p[0] for p in pts], [p[1] for p in pts], label=label)\n"
          "    ax.set_xlabel(header[xi])\n"
          "if LOGLOG:\n"
          "    ax.set_xscale(\"log\")\n"
          "    ax.set_yscale(\"log\")\n"
          "ax.grid(True, which=\"both\", alpha=0.3)\n"
          "ax.legend(fontsize=\"small\")\n"
          "fig.tight_layout()\n"
          "if len(sys.argv) > 1:\n"
          "    fig.savefig(sys.argv[1], dpi=150)\n"
          "else:\n"
          "    plt.show()\n";
    return os.str();
}

int cmd_curve(const CommandOptions& options, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const RunConfig config = load_run_config(options.config);
        const Quantity q = parse_quantity(options.quantity.value_or("component_hazard"));
        emit(compute_curve(config, q, err), output_path(options, config), out);
        return int{kExitOk};
    });
}

int cmd_mttf(const CommandOptions& options, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const RunConfig config = load_run_config(options.config);
        const double eps = options.eps.value_or(1e-12);
        if (!(eps > 0.0 && eps <= 1e-3))
            throw ConfigError("--eps must lie in (0, 1e-3], got " + format_double(eps));
        MttfReport report;
        try
        {
            report = compute_mttf(config, eps);
        }
        catch (const NonConvergenceError& e)
        {
            err << "error: MTTF quadrature did not converge: " << e.what()
                << "; raise grid.end so the survival falls below the truncation level\n";
            return int{kExitNumeric};
        }
        out << "system: " << make_array(config).describe() << "\n"
            << "model: " << make_hazard_model(config.hazard)->describe() << "\n"
            << "mttf_hours: " << format_double(report.result.hours) << "\n"
            << "afr: " << format_double(report.afr) << "\n"
            << "truncation_point_hours: " << format_double(report.result.truncation_point) << "\n"
            << "survival_at_truncation: " << format_double(report.result.survival_at_truncation) << "\n"
            << "tail_estimate_hours: " << format_double(report.result.tail_estimate) << "\n";
        Table row{{"mttf_hours", "afr", "truncation_point_hours", "tail_estimate_hours"},
                  {{report.result.hours, report.afr, report.result.truncation_point, report.result.tail_estimate}}};
        emit(row, output_path(options, config), out);
        return int{kExitOk};
    });
}

int cmd_asymptotic(const CommandOptions& options, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const RunConfig config = load_run_config(options.config);
        const double q = options.q ? *options.q : config.asymptotic ? config.asymptotic->q : AsymptoticSection{}.q;
        std::vector<double> rates;
        if (options.rates)
            rates = *options.rates;
        else if (config.asymptotic && !config.asymptotic->rates.empty())
            rates = config.asymptotic->rates;
        else
            rates = default_rate_grid();
        emit(compute_asymptotic(config, q, rates, err), output_path(options, config), out);
        return int{kExitOk};
    });
}

int cmd_simulate(const CommandOptions& options, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const RunConfig config = load_run_config(options.config);
        if (!config.simulation && !options.trials)
            throw ConfigError("missing [simulation] section (or --trials)");
        const std::int64_t trials = options.trials ? *options.trials : config.simulation->trials;
        if (trials < 1)
            throw ConfigError("--trials must be >= 1");
        const std::uint64_t seed = options.seed ? *options.seed : config.simulation ? config.simulation->seed : 0;
        const auto report = compute_simulation(config, trials, seed, options.threads.value_or(0));
        const auto path = output_path(options, config);
        emit(report.table, path, out);
        (path ? out : err) << "mean_system_ttf: " << format_double(report.outcome.mean_system_ttf) << " +/- "
                           << format_double(report.outcome.mean_ttf_stderr) << " hours (trials " << trials
                           << ", seed " << seed << ")\n";
        return int{kExitOk};
    });
}

int cmd_plotscript(const CommandOptions& options, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        if (options.csv_paths.empty())
            throw ConfigError("plotscript needs at least one CSV file");
        for (const auto& p : options.csv_paths)
        {
            const Table t = read_csv(p);
            if (t.header.size() < 2)
                throw ConfigError("CSV '" + p.string() + "' needs at least two columns");
        }
        bool loglog = false;
        std::optional<std::filesystem::path> path = options.out;
        if (!options.config.empty())
        {
            const RunConfig config = load_run_config(options.config);
            loglog = config.output.loglog;
        }
        if (options.loglog)
            loglog = *options.loglog;
        const std::string script = make_plot_script(options.csv_paths, loglog);
        if (path)
        {
            std::ofstream os(*path, std::ios::binary);
            if (!os || !(os << script))
                throw ConfigError("cannot write '" + path->string() + "'");
        }
        else
        {
            out << script;
        }
        return int{kExitOk};
    });
}

} // namespace mdsrel
