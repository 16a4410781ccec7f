#include "mdsrel/hazard.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "mdsrel/csv.hpp"
#include "mdsrel/errors.hpp"
#include "mdsrel/special_math.hpp"

namespace mdsrel
{

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kHoursPerYear = 8760.0;

std::string fmt(double v) { return format_double(v); }

void require_positive(double v, const char* what)
{
    if (!(v > 0.0) || !std::isfinite(v))
        throw DomainError(std::string(what) + " must be positive and finite, got " + fmt(v));
}

} // namespace

//---------------------------------------------------------------------------//

HazardPoint HazardModel::evaluate(double x) const
{
    HazardPoint p;
    p.hazard = hazard(x);
    p.cumulative_hazard = cumulative_hazard(x);
    p.log_failure = log1m_exp(-p.cumulative_hazard);
    return p;
}

double HazardModel::reliability(double x) const
{
    return std::exp(-cumulative_hazard(x));
}

void HazardModel::check_time(double x)
{
    if (!(x >= 0.0))
        throw DomainError("time must be non-negative, got " + fmt(x));
}

void HazardModel::check_cumulative(double u)
{
    if (!(u >= 0.0))
        throw DomainError("cumulative hazard must be non-negative, got " + fmt(u));
}

double HazardModel::invert_by_bisection(double u) const
{
    check_cumulative(u);
    if (u == 0.0)
        return 0.0;
    if (std::isinf(u))
        return kInf;
    double lo = 0.0;
    double hi = 1.0;
    int doublings = 0;
    while (cumulative_hazard(hi) < u)
    {
        lo = hi;
        hi *= 2.0;
        if (++doublings > 1100 || std::isinf(hi))
            throw NonConvergenceError("cumulative hazard stays below " + fmt(u) + " for all finite times");
    }
    for (int i = 0; i < 400; ++i)
    {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        if (cumulative_hazard(mid) < u)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

//---------------------------------------------------------------------------//

ConstantHazard::ConstantHazard(double rate) : rate_(rate)
{
    require_positive(rate, "constant hazard rate");
}

double ConstantHazard::hazard(double x) const
{
    check_time(x);
    return rate_;
}

double ConstantHazard::cumulative_hazard(double x) const
{
    check_time(x);
    return rate_ * x;
}

double ConstantHazard::inverse_cumulative_hazard(double u) const
{
    check_cumulative(u);
    return u / rate_;
}

std::string ConstantHazard::describe() const
{
    return "constant(rate=" + fmt(rate_) + ")";
}

//---------------------------------------------------------------------------//

WeibullHazard::WeibullHazard(double shape, double scale) : shape_(shape), scale_(scale)
{
    require_positive(shape, "Weibull shape");
    require_positive(scale, "Weibull scale");
}

double WeibullHazard::hazard(double x) const
{
    check_time(x);
    if (shape_ == 1.0)
        return 1.0 / scale_;
    if (x == 0.0)
        return shape_ < 1.0 ? kInf : 0.0;
    return shape_ / scale_ * std::pow(x / scale_, shape_ - 1.0);
}

double WeibullHazard::cumulative_hazard(double x) const
{
    check_time(x);
    return std::pow(x / scale_, shape_);
}

double WeibullHazard::inverse_cumulative_hazard(double u) const
{
    check_cumulative(u);
    return scale_ * std::pow(u, 1.0 / shape_);
}

std::string WeibullHazard::describe() const
{
    return "weibull(shape=" + fmt(shape_) + ", scale=" + fmt(scale_) + ")";
}

//---------------------------------------------------------------------------//

namespace
{

double segment_hazard(const WeibullSegment& s, double local)
{
    if (s.shape == 1.0)
        return 1.0 / s.scale;
    if (local == 0.0)
        return s.shape < 1.0 ? kInf : 0.0;
    return s.shape / s.scale * std::pow(local / s.scale, s.shape - 1.0);
}

double segment_cumulative(const WeibullSegment& s, double local)
{
    return std::pow(local / s.scale, s.shape);
}

double segment_inverse(const WeibullSegment& s, double u)
{
    return s.scale * std::pow(u, 1.0 / s.shape);
}

} // namespace

CompositeBathtub::CompositeBathtub(std::array<WeibullSegment, 3> segments, double t1, double t2)
    : segments_(segments), t1_(t1), t2_(t2)
{
    for (const auto& s : segments_)
    {
        require_positive(s.shape, "bathtub shape");
        require_positive(s.scale, "bathtub scale");
    }
    if (!(t1 > 0.0 && t2 > t1 && std::isfinite(t2)))
        throw DomainError("bathtub breakpoints must satisfy 0 < t1 < t2, got t1=" + fmt(t1) + ", t2=" + fmt(t2));
    lambda_t1_ = segment_cumulative(segments_[0], t1_);
    lambda_t2_ = lambda_t1_ + segment_cumulative(segments_[1], t2_ - t1_);
}

CompositeBathtub CompositeBathtub::standard()
{
    return CompositeBathtub({WeibullSegment{0.5, 100.0}, WeibullSegment{1.0, 200.0}, WeibullSegment{2.5, 500.0}},
                            100.0, 1000.0);
}

double CompositeBathtub::hazard(double x) const
{
    check_time(x);
    if (x <= t1_)
        return segment_hazard(segments_[0], x);
    if (x <= t2_)
        return segment_hazard(segments_[1], x - t1_);
    return segment_hazard(segments_[2], x - t2_);
}

double CompositeBathtub::cumulative_hazard(double x) const
{
    check_time(x);
    if (x <= t1_)
        return segment_cumulative(segments_[0], x);
    if (x <= t2_)
        return lambda_t1_ + segment_cumulative(segments_[1], x - t1_);
    return lambda_t2_ + segment_cumulative(segments_[2], x - t2_);
}

double CompositeBathtub::inverse_cumulative_hazard(double u) const
{
    check_cumulative(u);
    if (u <= lambda_t1_)
        return std::min(segment_inverse(segments_[0], u), t1_);
    if (u <= lambda_t2_)
        return std::clamp(t1_ + segment_inverse(segments_[1], u - lambda_t1_), t1_, t2_);
    return std::max(t2_ + segment_inverse(segments_[2], u - lambda_t2_), t2_);
}

std::string CompositeBathtub::describe() const
{
    std::string out = "bathtub(";
    for (std::size_t i = 0; i < segments_.size(); ++i)
        out += "beta" + std::to_string(i + 1) + "=" + fmt(segments_[i].shape) + ", theta" + std::to_string(i + 1) +
               "=" + fmt(segments_[i].scale) + ", ";
    return out + "t1=" + fmt(t1_) + ", t2=" + fmt(t2_) + ")";
}

//---------------------------------------------------------------------------//

TabulatedHazard::TabulatedHazard(std::vector<double> times, std::vector<double> rates)
    : times_(std::move(times)), rates_(std::move(rates))
{
    if (times_.empty() || times_.size() != rates_.size())
        throw DomainError("tabulated hazard needs matching, non-empty time and rate lists");
    for (std::size_t i = 0; i < times_.size(); ++i)
    {
        if (!(times_[i] >= 0.0) || !std::isfinite(times_[i]))
            throw DomainError("tabulated hazard times must be finite and non-negative");
        if (i > 0 && !(times_[i] > times_[i - 1]))
            throw DomainError("tabulated hazard times must be strictly increasing");
        if (!(rates_[i] >= 0.0) || !std::isfinite(rates_[i]))
            throw DomainError("tabulated hazard rates must be finite and non-negative");
    }
    knot_cumulative_.resize(times_.size());
    knot_cumulative_[0] = rates_[0] * times_[0];
    for (std::size_t i = 1; i < times_.size(); ++i)
        knot_cumulative_[i] =
            knot_cumulative_[i - 1] + 0.5 * (rates_[i] + rates_[i - 1]) * (times_[i] - times_[i - 1]);
}

double TabulatedHazard::hazard(double x) const
{
    check_time(x);
    if (x <= times_.front())
        return rates_.front();
    if (x >= times_.back())
        return rates_.back();
    auto it = std::upper_bound(times_.begin(), times_.end(), x);
    auto j = static_cast<std::size_t>(it - times_.begin());
    double w = (x - times_[j - 1]) / (times_[j] - times_[j - 1]);
    return rates_[j - 1] + w * (rates_[j] - rates_[j - 1]);
}

double TabulatedHazard::cumulative_hazard(double x) const
{
    check_time(x);
    if (x <= times_.front())
        return rates_.front() * x;
    if (x >= times_.back())
        return knot_cumulative_.back() + rates_.back() * (x - times_.back());
    auto it = std::upper_bound(times_.begin(), times_.end(), x);
    auto j = static_cast<std::size_t>(it - times_.begin());
    double dx = x - times_[j - 1];
    double slope = (rates_[j] - rates_[j - 1]) / (times_[j] - times_[j - 1]);
    return knot_cumulative_[j - 1] + rates_[j - 1] * dx + 0.5 * slope * dx * dx;
}

double TabulatedHazard::inverse_cumulative_hazard(double u) const
{
    return invert_by_bisection(u);
}

std::string TabulatedHazard::describe() const
{
    return "tabulated(knots=" + std::to_string(times_.size()) + ", span=[" + fmt(times_.front()) + ", " +
           fmt(times_.back()) + "])";
}

//---------------------------------------------------------------------------//

double reliability(const HazardModel& model, double x)
{
    return model.reliability(x);
}

double density(const HazardModel& model, double x)
{
    HazardPoint p = model.evaluate(x);
    if (p.hazard == 0.0)
        return 0.0;
    return p.hazard * std::exp(-p.cumulative_hazard);
}

MttfResult mttf(const std::function<double(double)>& survival, double truncation_eps, const MttfOptions& options)
{
    if (!(truncation_eps > 0.0 && truncation_eps <= 1e-3))
        throw DomainError("truncation_eps must lie in (0, 1e-3], got " + fmt(truncation_eps));
    require_positive(options.initial_step, "initial quadrature step");
    require_positive(options.max_horizon, "quadrature horizon");

    using Quadrature = boost::math::quadrature::gauss_kronrod<double, 31>;
    constexpr unsigned kMaxDepth = 20;
    constexpr double kPanelTol = 1e-11;

    MttfResult result;
    double lo = 0.0;
    double hi = std::min(options.initial_step, options.max_horizon);
    double s_lo = survival(0.0);
    double total = 0.0;
    for (int panel = 0; panel < 2100; ++panel)
    {
        total += Quadrature::integrate(survival, lo, hi, kMaxDepth, kPanelTol);
        double s_hi = survival(hi);
        if (s_hi < truncation_eps)
        {
            double tail = 0.0;
            if (s_hi > 0.0 && s_lo > s_hi)
                tail = s_hi * (hi - lo) / std::log(s_lo / s_hi);
            result.hours = total + tail;
            result.truncation_point = hi;
            result.tail_estimate = tail;
            result.survival_at_truncation = s_hi;
            return result;
        }
        if (hi >= options.max_horizon)
            throw NonConvergenceError("survival is still " + fmt(s_hi) + " at the horizon " + fmt(hi) +
                                      " (truncation level " + fmt(truncation_eps) + ")");
        lo = hi;
        s_lo = s_hi;
        hi = std::min(2.0 * hi, options.max_horizon);
    }
    throw NonConvergenceError("survival did not fall below " + fmt(truncation_eps) + " within the panel budget");
}

double afr(double mttf_hours)
{
    if (!(mttf_hours > 0.0))
        throw DomainError("AFR requires a positive MTTF, got " + fmt(mttf_hours));
    return -std::expm1(-kHoursPerYear / mttf_hours);
}

double sample_ttf(const HazardModel& model, double uniform_draw)
{
    if (!(uniform_draw > 0.0 && uniform_draw < 1.0))
        throw DomainError("uniform draw must lie in (0, 1), got " + fmt(uniform_draw));
    return model.inverse_cumulative_hazard(-std::log(uniform_draw));
}

} // namespace mdsrel
