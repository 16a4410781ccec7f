#include "mdsrel/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "mdsrel/errors.hpp"

namespace mdsrel
{

namespace
{

constexpr std::int64_t kTrialsPerBlock = 4096;

// Welford accumulator; blocks are merged in a fixed order.
struct Moments
{
    double count = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double v)
    {
        count += 1.0;
        double delta = v - mean;
        mean += delta / count;
        m2 += delta * (v - mean);
    }

    void merge(const Moments& o)
    {
        if (o.count == 0.0)
            return;
        double total = count + o.count;
        double delta = o.mean - mean;
        mean += delta * o.count / total;
        m2 += o.m2 + delta * delta * count * o.count / total;
        count = total;
    }
};

void validate(const SimConfig& sim)
{
    if (!sim.model)
        throw DomainError("simulation needs a hazard model");
    if (sim.trials < 1)
        throw DomainError("simulation needs at least one trial");
    if (sim.grid.empty())
        throw DomainError("simulation grid is empty");
    for (std::size_t i = 0; i < sim.grid.size(); ++i)
    {
        if (!(sim.grid[i] >= 0.0) || !std::isfinite(sim.grid[i]))
            throw DomainError("simulation grid times must be finite and non-negative");
        if (i > 0 && !(sim.grid[i] > sim.grid[i - 1]))
            throw DomainError("simulation grid must be strictly increasing");
    }
    const std::int64_t leaves = sim.config.leaves();
    if (sim.trials > sim.max_samples / leaves)
        throw CapacityError("simulation needs " + std::to_string(sim.trials) + " trials x " +
                            std::to_string(leaves) + " leaves, above the budget of " +
                            std::to_string(sim.max_samples) + " samples");
}

} // namespace

void draw_leaf_lifetimes(const ArrayConfig& config, const HazardModel& model, RandomStream& stream,
                         std::span<double> out)
{
    if (static_cast<std::int64_t>(out.size()) != config.leaves())
        throw DomainError("lifetime buffer must hold one slot per leaf");
    for (double& v : out)
        v = sample_ttf(model, stream.uniform_open());
}

double system_ttf_from_lifetimes(const ArrayConfig& config, std::span<double> lifetimes)
{
    if (static_cast<std::int64_t>(lifetimes.size()) != config.leaves())
        throw DomainError("lifetime buffer must hold one slot per leaf");
    std::size_t live = lifetimes.size();
    for (const auto& code : config.dims())
    {
        const auto n = static_cast<std::size_t>(code.n());
        const auto t = static_cast<std::size_t>(code.t());
        std::size_t blocks = live / n;
        for (std::size_t b = 0; b < blocks; ++b)
        {
            auto first = lifetimes.begin() + static_cast<std::ptrdiff_t>(b * n);
            std::nth_element(first, first + static_cast<std::ptrdiff_t>(t), first + static_cast<std::ptrdiff_t>(n));
            lifetimes[b] = first[static_cast<std::ptrdiff_t>(t)];
        }
        live = blocks;
    }
    return lifetimes[0];
}

double system_ttf_from_draws(const ArrayConfig& config, const HazardModel& model,
                             std::span<const double> uniform_draws)
{
    if (static_cast<std::int64_t>(uniform_draws.size()) != config.leaves())
        throw DomainError("need one uniform draw per leaf");
    std::vector<double> lifetimes(uniform_draws.size());
    std::transform(uniform_draws.begin(), uniform_draws.end(), lifetimes.begin(),
                   [&](double u) { return sample_ttf(model, u); });
    return system_ttf_from_lifetimes(config, lifetimes);
}

double simulate_system_ttf(const ArrayConfig& config, const HazardModel& model, RandomStream& stream)
{
    std::vector<double> lifetimes(static_cast<std::size_t>(config.leaves()));
    draw_leaf_lifetimes(config, model, stream, lifetimes);
    return system_ttf_from_lifetimes(config, lifetimes);
}

SimOutcome run_simulation(const SimConfig& sim)
{
    validate(sim);

    const std::size_t grid_size = sim.grid.size();
    const std::int64_t blocks = (sim.trials + kTrialsPerBlock - 1) / kTrialsPerBlock;
    unsigned workers = sim.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : sim.threads;
    workers = static_cast<unsigned>(std::min<std::int64_t>(workers, blocks));

    std::vector<Moments> block_moments(static_cast<std::size_t>(blocks));
    // survived_count[c] = trials that outlived exactly the first c grid points.
    std::vector<std::vector<std::int64_t>> histograms(workers, std::vector<std::int64_t>(grid_size + 1, 0));
    std::atomic<std::int64_t> next_block{0};

    auto work = [&](unsigned worker) {
        std::vector<double> lifetimes(static_cast<std::size_t>(sim.config.leaves()));
        auto& hist = histograms[worker];
        for (std::int64_t b = next_block++; b < blocks; b = next_block++)
        {
            Moments m;
            std::int64_t end = std::min(sim.trials, (b + 1) * kTrialsPerBlock);
            for (std::int64_t i = b * kTrialsPerBlock; i < end; ++i)
            {
                RandomStream stream = RandomStream::for_trial(sim.seed, static_cast<std::uint64_t>(i));
                draw_leaf_lifetimes(sim.config, *sim.model, stream, lifetimes);
                double ttf = system_ttf_from_lifetimes(sim.config, lifetimes);
                m.add(ttf);
                auto survived = std::lower_bound(sim.grid.begin(), sim.grid.end(), ttf) - sim.grid.begin();
                ++hist[static_cast<std::size_t>(survived)];
            }
            block_moments[static_cast<std::size_t>(b)] = m;
        }
    };

    if (workers <= 1)
    {
        work(0);
    }
    else
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(work, w);
    }

    std::vector<std::int64_t> hist(grid_size + 1, 0);
    for (const auto& h : histograms)
        for (std::size_t c = 0; c <= grid_size; ++c)
            hist[c] += h[c];
    Moments total;
    for (const auto& m : block_moments)
        total.merge(m);

    SimOutcome out;
    out.grid = sim.grid;
    out.trials = sim.trials;
    out.seed = sim.seed;
    out.survival_hat.resize(grid_size);
    out.half_width_95.resize(grid_size);
    const auto trials = static_cast<double>(sim.trials);
    std::int64_t alive = 0;
    for (std::size_t j = grid_size; j-- > 0;)
    {
        alive += hist[j + 1];
        double p = static_cast<double>(alive) / trials;
        out.survival_hat[j] = p;
        out.half_width_95[j] = 1.96 * std::sqrt(p * (1.0 - p) / trials);
    }
    out.mean_system_ttf = total.mean;
    out.mean_ttf_stderr = sim.trials > 1 ? std::sqrt(total.m2 / (trials - 1.0) / trials) : 0.0;
    return out;
}

Curve empirical_hazard(const SimOutcome& outcome, int smoothing_window)
{
    if (smoothing_window < 1)
        throw DomainError("smoothing window must be at least 1");
    const double floor = 10.0 / static_cast<double>(outcome.trials);
    Curve raw;
    for (std::size_t j = 0; j + 1 < outcome.grid.size(); ++j)
    {
        double s0 = outcome.survival_hat[j];
        double s1 = outcome.survival_hat[j + 1];
        if (s0 <= floor || s1 <= floor)
            continue;
        raw.x.push_back(0.5 * (outcome.grid[j] + outcome.grid[j + 1]));
        raw.values.push_back((std::log(s0) - std::log(s1)) / (outcome.grid[j + 1] - outcome.grid[j]));
    }
    if (raw.x.empty())
        throw EmptyCurveError("every grid interval has survival at or below 10 / trials");

    Curve out;
    out.quantity = "empirical_hazard";
    out.units = "per hour";
    out.x = raw.x;
    out.values.resize(raw.values.size());
    const auto n = static_cast<std::ptrdiff_t>(raw.values.size());
    const std::ptrdiff_t half = (smoothing_window - 1) / 2;
    for (std::ptrdiff_t i = 0; i < n; ++i)
    {
        std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - half);
        std::ptrdiff_t hi = std::min<std::ptrdiff_t>(n - 1, i - half + smoothing_window - 1);
        double sum = 0.0;
        for (std::ptrdiff_t k = lo; k <= hi; ++k)
            sum += raw.values[static_cast<std::size_t>(k)];
        out.values[static_cast<std::size_t>(i)] = sum / static_cast<double>(hi - lo + 1);
    }
    return out;
}

} // namespace mdsrel
