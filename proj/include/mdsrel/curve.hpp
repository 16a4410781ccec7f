#pragma once

#include <string>
#include <vector>

namespace mdsrel
{

/// Sampled function of time, with the name and units of the sampled quantity.
struct Curve
{
    std::string quantity;
    std::string units;
    std::vector<double> x;
    std::vector<double> values;

    std::size_t size() const { return x.size(); }
};

} // namespace mdsrel
