#pragma once

#include <cmath>
#include <cstdint>
#include <functional>

#include "mdsrel/random_stream.hpp"

namespace testsupport
{

inline double rel_err(double got, double want)
{
    if (got == want)
        return 0.0;
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

/// Central difference with the step used throughout: h = max(1e-4 x, 1e-3).
inline double central_diff(const std::function<double(double)>& f, double x)
{
    const double h = std::max(1e-4 * x, 1e-3);
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Small deterministic generator for property tests.
class Gen
{
  public:
    explicit Gen(std::uint64_t seed) : stream_(mdsrel::mix64(seed)) {}

    double uniform(double lo, double hi) { return lo + (hi - lo) * stream_.uniform_open(); }
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
    /// Inclusive range.
    std::int64_t integer(std::int64_t lo, std::int64_t hi)
    {
        const auto span = static_cast<std::uint64_t>(hi - lo + 1);
        return lo + static_cast<std::int64_t>(stream_.next() % span);
    }

  private:
    mdsrel::RandomStream stream_;
};

} // namespace testsupport
