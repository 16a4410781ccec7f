#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace mdsrel
{

/// Hazard, cumulative hazard and ln(1 - R) at one instant.
struct HazardPoint
{
    double hazard = 0.0;
    double cumulative_hazard = 0.0;
    double log_failure = 0.0;
};

/**
 * Lifetime distribution of a single component, described by its hazard rate.
 *
 * Time is in hours throughout. Implementations are immutable once constructed,
 * so a model can be shared freely between threads. The reliability R(x) is
 * always exp(-cumulative_hazard(x)); subclasses only supply the hazard, its
 * integral and the inverse of that integral.
 */
class HazardModel
{
  public:
    virtual ~HazardModel() = default;

    virtual double hazard(double x) const = 0;
    virtual double cumulative_hazard(double x) const = 0;

    /// Smallest x with cumulative_hazard(x) = u. Throws NonConvergenceError if
    /// the cumulative hazard never reaches u.
    virtual double inverse_cumulative_hazard(double u) const = 0;

    /// All three quantities at once. Subclasses whose evaluation is expensive,
    /// or that know ln(1 - R) more precisely than log1m_exp(-Lambda), override this.
    virtual HazardPoint evaluate(double x) const;

    virtual std::string describe() const = 0;

    double reliability(double x) const;

  protected:
    static void check_time(double x);
    static void check_cumulative(double u);

    // Bracket-and-bisect inversion for models without a closed-form inverse.
    double invert_by_bisection(double u) const;
};

using HazardModelPtr = std::shared_ptr<const HazardModel>;

/// Exponential lifetimes.
class ConstantHazard final : public HazardModel
{
  public:
    explicit ConstantHazard(double rate);

    double hazard(double x) const override;
    double cumulative_hazard(double x) const override;
    double inverse_cumulative_hazard(double u) const override;
    std::string describe() const override;

    double rate() const { return rate_; }

  private:
    double rate_;
};

/// Weibull lifetimes, Lambda(x) = (x / scale)^shape.
class WeibullHazard final : public HazardModel
{
  public:
    WeibullHazard(double shape, double scale);

    double hazard(double x) const override;
    double cumulative_hazard(double x) const override;
    double inverse_cumulative_hazard(double u) const override;
    std::string describe() const override;

    double shape() const { return shape_; }
    double scale() const { return scale_; }

  private:
    double shape_;
    double scale_;
};

struct WeibullSegment
{
    double shape;
    double scale;
};

/**
 * Three-phase bathtub built from Weibull pieces: infant mortality on (0, t1],
 * useful life on (t1, t2], wear-out beyond t2.
 *
 * Each piece runs on its own clock starting at the breakpoint, so the
 * cumulative hazard on segment i is the accumulated value at the segment start
 * plus ((x - start) / scale_i)^shape_i. Lambda is continuous everywhere; the
 * hazard itself generally jumps at t1 and t2.
 */
class CompositeBathtub final : public HazardModel
{
  public:
    CompositeBathtub(std::array<WeibullSegment, 3> segments, double t1, double t2);

    /// beta = (0.5, 1, 2.5), theta = (100, 200, 500), t1 = 100 h, t2 = 1000 h.
    static CompositeBathtub standard();

    double hazard(double x) const override;
    double cumulative_hazard(double x) const override;
    double inverse_cumulative_hazard(double u) const override;
    std::string describe() const override;

    const std::array<WeibullSegment, 3>& segments() const { return segments_; }
    double t1() const { return t1_; }
    double t2() const { return t2_; }

  private:
    std::array<WeibullSegment, 3> segments_;
    double t1_;
    double t2_;
    double lambda_t1_;
    double lambda_t2_;
};

/**
 * Empirical hazard given as a piecewise-linear function on a grid of times.
 *
 * The rate is held constant before the first and after the last knot. The
 * cumulative hazard is the exact integral of the interpolant.
 */
class TabulatedHazard final : public HazardModel
{
  public:
    TabulatedHazard(std::vector<double> times, std::vector<double> rates);

    double hazard(double x) const override;
    double cumulative_hazard(double x) const override;
    double inverse_cumulative_hazard(double u) const override;
    std::string describe() const override;

    const std::vector<double>& times() const { return times_; }
    const std::vector<double>& rates() const { return rates_; }

  private:
    std::vector<double> times_;
    std::vector<double> rates_;
    std::vector<double> knot_cumulative_;
};

/// R(x) = exp(-Lambda(x)).
double reliability(const HazardModel& model, double x);

/// f(x) = lambda(x) R(x).
double density(const HazardModel& model, double x);

struct MttfOptions
{
    /// Width of the first integration panel; later panels double.
    double initial_step = 1.0;
    /// Give up if the survival is still above the truncation level here.
    double max_horizon = 1e300;
};

struct MttfResult
{
    double hours = 0.0;
    /// First panel edge where the survival dropped below the truncation level.
    double truncation_point = 0.0;
    /// Exponential-tail estimate of the integral beyond truncation_point, included in hours.
    double tail_estimate = 0.0;
    double survival_at_truncation = 0.0;
};

/**
 * Mean time to failure, the integral of the survival function over [0, inf).
 *
 * Integrates adaptively over doubling panels until the survival drops below
 * truncation_eps, then closes the integral with S(X) / h where h is the
 * log-slope of S over the last panel. That tail term is exact for an
 * exponential tail and an upper bound whenever the hazard keeps increasing.
 */
MttfResult mttf(const std::function<double(double)>& survival, double truncation_eps,
                const MttfOptions& options = {});

/// Annualized failure rate 1 - exp(-8760 / MTTF).
double afr(double mttf_hours);

/// Inverse-transform draw: the time at which Lambda reaches -ln(uniform_draw).
double sample_ttf(const HazardModel& model, double uniform_draw);

} // namespace mdsrel
