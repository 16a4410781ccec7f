// Command-line front end. Flags override the config file, which overrides defaults.

#include <iostream>

#include <CLI11.hpp>

#include "mdsrel/commands.hpp"
#include "mdsrel/config.hpp"
#include "mdsrel/errors.hpp"

namespace
{

// CLI11 fills plain members; copy the ones the user actually passed.
struct RawFlags
{
    std::string config, out, quantity, rates;
    double q = 0, eps = 0;
    std::int64_t trials = 0;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    bool loglog = false;
    std::vector<std::string> csvs;
};

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Reliability of MDS-coded storage arrays: hazard curves, MTTF, asymptotics and simulation"};
    app.require_subcommand(1);
    RawFlags raw;

    auto add_config = [&](CLI::App* sub, bool required) {
        auto* opt = sub->add_option("--config", raw.config, "Run configuration file")->check(CLI::ExistingFile);
        if (required)
            opt->required();
    };
    auto add_out = [&](CLI::App* sub) {
        sub->add_option("--out", raw.out, "Output path (default: [output] path, else stdout)");
    };

    auto* curve = app.add_subcommand("curve", "Evaluate one quantity on the configured time grid");
    add_config(curve, true);
    add_out(curve);
    curve->add_option("--quantity", raw.quantity,
                      "component_hazard | array_hazard | survival | density | lower_bound | base_hazard")
        ->default_str("component_hazard");

    auto* mttf = app.add_subcommand("mttf", "Mean time to data loss and the matching AFR");
    add_config(mttf, true);
    add_out(mttf);
    mttf->add_option("--eps", raw.eps, "Survival level at which the integral is truncated")->default_str("1e-12");

    auto* asym = app.add_subcommand("asymptotic", "Finite-n versus large-n per-component hazard");
    add_config(asym, true);
    add_out(asym);
    asym->add_option("--q", raw.q, "Evaluate at the time a with R(a) = 1/q")->default_str("1.5");
    asym->add_option("--rates", raw.rates, "Comma-separated code rates")->default_str("0.02, 0.04, ..., 1");

    auto* sim = app.add_subcommand("simulate", "Monte Carlo survival with the closed form overlaid");
    add_config(sim, true);
    add_out(sim);
    sim->add_option("--trials", raw.trials, "Number of simulated arrays");
    sim->add_option("--seed", raw.seed, "Base seed")->default_str("0");
    sim->add_option("--threads", raw.threads, "Worker threads, 0 = all cores (output does not depend on it)")
        ->default_str("0");

    auto* plot = app.add_subcommand("plotscript", "Write a matplotlib script overlaying CSV outputs");
    plot->add_option("csv", raw.csvs, "CSV files written by the other subcommands");
    add_config(plot, false);
    add_out(plot);
    plot->add_flag("--loglog", raw.loglog, "Log-log axes (also [output] loglog = true)");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : mdsrel::kExitConfig;
    }

    mdsrel::CommandOptions o;
    o.config = raw.config;
    auto given = [](CLI::App* sub, const char* name) {
        auto* opt = sub->get_option_no_throw(name);
        return opt != nullptr && opt->count() > 0;
    };
    CLI::App* active = app.get_subcommands().front();
    if (given(active, "--out"))
        o.out = raw.out;
    if (given(active, "--quantity"))
        o.quantity = raw.quantity;
    if (given(active, "--q"))
        o.q = raw.q;
    if (given(active, "--eps"))
        o.eps = raw.eps;
    if (given(active, "--trials"))
        o.trials = raw.trials;
    if (given(active, "--seed"))
        o.seed = raw.seed;
    if (given(active, "--threads"))
        o.threads = raw.threads;
    if (given(active, "--loglog"))
        o.loglog = raw.loglog;
    if (given(active, "--rates"))
    {
        try
        {
            o.rates = mdsrel::parse_number_list(raw.rates, "--rates");
        }
        catch (const mdsrel::ConfigError& e)
        {
            std::cerr << "error: " << e.what() << "\n";
            return mdsrel::kExitConfig;
        }
    }
    for (const auto& c : raw.csvs)
        o.csv_paths.emplace_back(c);

    const std::string name = active->get_name();
    if (name == "curve")
        return mdsrel::cmd_curve(o, std::cout, std::cerr);
    if (name == "mttf")
        return mdsrel::cmd_mttf(o, std::cout, std::cerr);
    if (name == "asymptotic")
        return mdsrel::cmd_asymptotic(o, std::cout, std::cerr);
    if (name == "simulate")
        return mdsrel::cmd_simulate(o, std::cout, std::cerr);
    return mdsrel::cmd_plotscript(o, std::cout, std::cerr);
}
