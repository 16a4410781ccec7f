#pragma once

#include <cstdint>
#include <limits>
#include <span>

namespace mdsrel
{

/**
 * A probability carried as its natural logarithm.
 *
 * log(0) is represented by negative infinity; every other value is finite and
 * non-positive. Binomial sums with thousands of terms live comfortably here even
 * when every individual term underflows in linear space.
 */
class LogProb
{
  public:
    constexpr LogProb() = default;

    static constexpr LogProb zero() { return LogProb{-std::numeric_limits<double>::infinity()}; }
    static constexpr LogProb one() { return LogProb{0.0}; }
    static LogProb from_log(double log_value);
    static LogProb from_probability(double p);

    constexpr double log() const { return value_; }
    double probability() const;
    constexpr bool is_zero() const { return value_ == -std::numeric_limits<double>::infinity(); }

    /// log(1 - p), accurate whether p is close to 0 or close to 1.
    LogProb complement() const;

    friend constexpr bool operator==(LogProb, LogProb) = default;

  private:
    constexpr explicit LogProb(double v) : value_(v) {}
    double value_ = -std::numeric_limits<double>::infinity();
};

/// log(e^a + e^b) without overflow; either argument may be -inf.
double log_add_exp(double a, double b);

/// log(sum e^v) over a range; -inf for an empty range.
double log_sum_exp(std::span<const double> values);

/// log(1 - e^x) for x <= 0.
double log1m_exp(double x);

/// count * log_value with the convention 0 * log(0) = 0.
double scaled_log(double count, double log_value);

/// ln C(n, i). Throws DomainError unless 0 <= i <= n.
double log_binomial(std::int64_t n, std::int64_t i);

/// Q(a, b) = Gamma(a, b) / Gamma(a), the upper regularized incomplete gamma function.
double regularized_upper_gamma(double a, double b);

/// P(a, b) = 1 - Q(a, b), evaluated directly so small values keep full precision.
double regularized_lower_gamma(double a, double b);

/// q-ary entropy h_q(p) with 0 log 0 = 0.
double q_ary_entropy(double q, double p);

/// ln of sum_{i=0}^{t} C(n, i) (q - 1)^i, the volume of a q-ary Hamming ball of radius t.
double hamming_ball_volume(std::int64_t n, std::int64_t t, double q);

} // namespace mdsrel
