#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mdsrel/hazard.hpp"

namespace mdsrel
{

/// Geometry of one (n, k) MDS code: any t = n - k erasures are correctable.
class MdsCode
{
  public:
    MdsCode(std::int64_t n, std::int64_t k);

    std::int64_t n() const { return n_; }
    std::int64_t k() const { return k_; }
    std::int64_t t() const { return n_ - k_; }
    double rate() const { return static_cast<double>(k_) / static_cast<double>(n_); }

    std::string describe() const;

    friend bool operator==(const MdsCode&, const MdsCode&) = default;

  private:
    std::int64_t n_;
    std::int64_t k_;
};

/**
 * Product of MDS codes, one per dimension.
 *
 * Dimension 1 groups leaf components into blocks; dimension s groups n_s blocks
 * of dimension s - 1. A block fails as soon as more than t_s of its children have
 * failed; a failed child block counts as one erasure, whatever state its own
 * members are in.
 */
class ArrayConfig
{
  public:
    explicit ArrayConfig(std::vector<MdsCode> dims);
    ArrayConfig(std::initializer_list<MdsCode> dims) : ArrayConfig(std::vector<MdsCode>(dims)) {}

    const std::vector<MdsCode>& dims() const { return dims_; }
    std::size_t dimensions() const { return dims_.size(); }

    /// n_{1,s} = n_1 * ... * n_s, for 1 <= s <= T.
    std::int64_t total_length(std::size_t s) const;
    /// k_{1,s} = k_1 * ... * k_s.
    std::int64_t data_count(std::size_t s) const;
    /// r_{1,s} = r_1 * ... * r_s.
    double total_rate(std::size_t s) const;

    std::int64_t leaves() const { return total_length(dims_.size()); }
    std::int64_t data_components() const { return data_count(dims_.size()); }

    std::string describe() const;

    friend bool operator==(const ArrayConfig&, const ArrayConfig&) = default;

  private:
    std::vector<MdsCode> dims_;
};

/// Binomial CDF: probability that at most t of n components with reliability R have failed.
double psi(std::int64_t t, std::int64_t n, double R);

/// sum_{i=0}^{t} C(n, i) C(i, z) (1 - R)^i R^(n - i).
double psi_z(std::int64_t z, std::int64_t t, std::int64_t n, double R);

/**
 * State of a coded block of n i.i.d. children, given the state of one child.
 *
 * The block survives while at most t children have failed, so its survival is
 * psi_t(n, R). Its hazard is the child hazard times
 * n C(n-1, t) F^t R^(n-t) / psi_t(n, R), which is exactly
 * n (1 - psi_{t-1}(n-1) / psi_t(n)) without the cancellation in that form.
 * Everything is evaluated in log space.
 */
HazardPoint block_point(const MdsCode& code, const HazardPoint& child);

/// block_point folded over every dimension of the array at time x.
HazardPoint system_point(double x, const ArrayConfig& config, const HazardModel& model);

/// Hazard rate per data component of a single coded block.
double mu_c(double x, const MdsCode& code, const HazardModel& model);

/// lambda(x) max{0, (1 - R/r) / (1 - R)}; zero at R = 1.
double mu_c_lower_bound(double x, const MdsCode& code, const HazardModel& model);

/// Per-component hazard of an (n, 1) repetition code, by its closed form.
double repetition_mu_c(double x, std::int64_t n, const HazardModel& model);

/// Per-component hazard of an (n, n-1) single-parity code, by its closed form.
double parity_mu_c(double x, std::int64_t n, const HazardModel& model);

/// Large-n limit of mu_c at the time a where R(a) = 1/q.
double asymptotic_mu_c(double q, double r, double lambda_at_a);

/// The time a with Lambda(a) = ln q.
double solve_time_for_q(const HazardModel& model, double q);

enum class LimitRegime
{
    LongLife,  ///< n R(x) bounded as x -> infinity
    EarlyLife, ///< n (1 - R(x)) bounded as x -> 0
};

/// C(x, r, a) in the adaptive-length limit mu_c -> lambda(x) C / n.
double adaptive_limit_constant(LimitRegime regime, double R, double r);

/// Hazard rate per data component of a multidimensional array.
double multidim_mu_c(double x, const ArrayConfig& config, const HazardModel& model);

/// Probability that the array has not lost data by time x.
double system_survival(double x, const ArrayConfig& config, const HazardModel& model);

/// Density of the block failure time of a single coded block.
double system_density(double x, const MdsCode& code, const HazardModel& model);

/// Whole-array hazard, k_{1,T} times multidim_mu_c.
double array_hazard(double x, const ArrayConfig& config, const HazardModel& model);

/// A coded block viewed as a component in its own right.
class BlockHazard final : public HazardModel
{
  public:
    BlockHazard(MdsCode code, HazardModelPtr child);

    double hazard(double x) const override;
    double cumulative_hazard(double x) const override;
    double inverse_cumulative_hazard(double u) const override;
    HazardPoint evaluate(double x) const override;
    std::string describe() const override;

  private:
    MdsCode code_;
    HazardModelPtr child_;
};

} // namespace mdsrel
