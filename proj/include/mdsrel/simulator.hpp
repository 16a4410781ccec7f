#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mdsrel/curve.hpp"
#include "mdsrel/hazard.hpp"
#include "mdsrel/mds.hpp"
#include "mdsrel/random_stream.hpp"

namespace mdsrel
{

struct SimConfig
{
    ArrayConfig config;
    HazardModelPtr model;
    std::int64_t trials = 1;
    std::uint64_t seed = 0;
    std::vector<double> grid;
    /// Worker threads; 0 picks the hardware concurrency. Results do not depend on it.
    unsigned threads = 1;
    /// Upper limit on trials * leaves.
    std::int64_t max_samples = 1'000'000'000;
};

struct SimOutcome
{
    std::vector<double> grid;
    std::vector<double> survival_hat;
    std::vector<double> half_width_95;
    std::int64_t trials = 0;
    std::uint64_t seed = 0;
    double mean_system_ttf = 0.0;
    double mean_ttf_stderr = 0.0;

    friend bool operator==(const SimOutcome&, const SimOutcome&) = default;
};

/// Fills `out` (one slot per leaf) with i.i.d. lifetimes in canonical leaf order:
/// the dimension-1 index varies fastest, the dimension-T index slowest.
void draw_leaf_lifetimes(const ArrayConfig& config, const HazardModel& model, RandomStream& stream,
                         std::span<double> out);

/// Failure time of the array given its leaf lifetimes in canonical order. Each
/// level-s block dies at the (t_s + 1)-th smallest failure time among its children.
/// `lifetimes` is used as scratch space.
double system_ttf_from_lifetimes(const ArrayConfig& config, std::span<double> lifetimes);

/// Same, starting from one uniform draw in (0, 1) per leaf.
double system_ttf_from_draws(const ArrayConfig& config, const HazardModel& model,
                             std::span<const double> uniform_draws);

/// One Monte Carlo sample of the array failure time.
double simulate_system_ttf(const ArrayConfig& config, const HazardModel& model, RandomStream& stream);

/**
 * Empirical survival of the array on a time grid.
 *
 * Trial i draws from RandomStream::for_trial(seed, i), so the outcome depends on
 * the configuration and seed only, never on the thread count.
 */
SimOutcome run_simulation(const SimConfig& sim);

/**
 * Hazard estimate -d ln S / dx from the empirical survival, one value per grid
 * interval placed at its midpoint. Intervals touching a point with
 * survival_hat <= 10 / trials are dropped; the rest are smoothed with a centred
 * moving average of the given width.
 */
Curve empirical_hazard(const SimOutcome& outcome, int smoothing_window);

} // namespace mdsrel
