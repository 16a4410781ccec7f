#include "mdsrel/special_math.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mdsrel/errors.hpp"

namespace mdsrel
{

namespace
{

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kMaxGammaIterations = 200000;
constexpr double kGammaEps = 1e-16;

// Below this size ln C(n, i) is summed term by term; above it the lgamma
// differences are large enough that their absolute error is negligible.
constexpr std::int64_t kDirectBinomialLimit = 64;

// log(1 + x) - x without cancellation near zero.
double log1pmx(double x)
{
    if (std::abs(x) >= 0.25)
        return std::log1p(x) - x;
    double term = x;
    double sum = 0.0;
    for (int k = 2; k < 200; ++k)
    {
        term *= -x;
        double add = term / k;
        sum += add;
        if (std::abs(add) <= 1e-17 * std::abs(sum))
            break;
    }
    return sum;
}

// lgamma(a) - Stirling's approximation, by asymptotic series for large a.
double stirling_error(double a)
{
    if (a < 10.0)
        return std::lgamma(a) - ((a - 0.5) * std::log(a) - a + 0.5 * std::log(2.0 * std::numbers::pi));
    double inv = 1.0 / a;
    double inv2 = inv * inv;
    return inv * (1.0 / 12 - inv2 * (1.0 / 360 - inv2 * (1.0 / 1260 - inv2 / 1680)));
}

// ln(b^a e^-b / Gamma(a)), keeping the a ln b - b - lgamma(a) cancellation exact.
double log_gamma_prefix(double a, double b)
{
    if (a < 10.0)
        return a * std::log(b) - b - std::lgamma(a);
    double x = (b - a) / a;
    return a * log1pmx(x) + 0.5 * std::log(a) - 0.5 * std::log(2.0 * std::numbers::pi) - stirling_error(a);
}

// P(a, b) by its power series; converges quickly for b < a + 1.
double lower_gamma_series(double a, double b)
{
    double ap = a;
    double del = 1.0 / a;
    double sum = del;
    for (int i = 0; i < kMaxGammaIterations; ++i)
    {
        ap += 1.0;
        del *= b / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * kGammaEps)
            return sum * std::exp(log_gamma_prefix(a, b));
    }
    throw NonConvergenceError("incomplete gamma series did not converge for a=" + std::to_string(a) +
                              ", b=" + std::to_string(b));
}

// Q(a, b) by modified Lentz evaluation of the Legendre continued fraction; b >= a + 1.
double upper_gamma_fraction(double a, double b)
{
    constexpr double tiny = 1e-300;
    double bb = b + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / bb;
    double h = d;
    for (int i = 1; i < kMaxGammaIterations; ++i)
    {
        double an = -i * (i - a);
        bb += 2.0;
        d = an * d + bb;
        if (std::abs(d) < tiny)
            d = tiny;
        c = bb + an / c;
        if (std::abs(c) < tiny)
            c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kGammaEps)
            return std::exp(log_gamma_prefix(a, b)) * h;
    }
    throw NonConvergenceError("incomplete gamma continued fraction did not converge for a=" +
                              std::to_string(a) + ", b=" + std::to_string(b));
}

void check_gamma_args(double a, double b)
{
    if (!(a > 0.0) || !std::isfinite(a))
        throw DomainError("incomplete gamma requires a > 0, got " + std::to_string(a));
    if (!(b >= 0.0))
        throw DomainError("incomplete gamma requires b >= 0, got " + std::to_string(b));
}

} // namespace

LogProb LogProb::from_log(double log_value)
{
    if (std::isnan(log_value) || log_value > 0.0)
        throw DomainError("log-probability must be <= 0, got " + std::to_string(log_value));
    return LogProb{log_value};
}

LogProb LogProb::from_probability(double p)
{
    if (!(p >= 0.0 && p <= 1.0))
        throw DomainError("probability must lie in [0, 1], got " + std::to_string(p));
    return LogProb{p == 0.0 ? kNegInf : std::log(p)};
}

double LogProb::probability() const
{
    return std::exp(value_);
}

LogProb LogProb::complement() const
{
    return LogProb{log1m_exp(value_)};
}

double log_add_exp(double a, double b)
{
    if (a < b)
        std::swap(a, b);
    if (b == kNegInf)
        return a;
    return a + std::log1p(std::exp(b - a));
}

double log_sum_exp(std::span<const double> values)
{
    if (values.empty())
        return kNegInf;
    double hi = *std::max_element(values.begin(), values.end());
    if (hi == kNegInf || std::isinf(hi))
        return hi;
    double sum = 0.0;
    for (double v : values)
        sum += std::exp(v - hi);
    return hi + std::log(sum);
}

double log1m_exp(double x)
{
    if (x > 0.0)
        throw DomainError("log1m_exp requires x <= 0");
    if (x == 0.0)
        return kNegInf;
    // Maechler's split point keeps both branches accurate.
    return x > -std::numbers::ln2 ? std::log(-std::expm1(x)) : std::log1p(-std::exp(x));
}

double scaled_log(double count, double log_value)
{
    return count == 0.0 ? 0.0 : count * log_value;
}

double log_binomial(std::int64_t n, std::int64_t i)
{
    if (n < 0 || i < 0 || i > n)
        throw DomainError("log_binomial requires 0 <= i <= n, got n=" + std::to_string(n) +
                          ", i=" + std::to_string(i));
    std::int64_t m = std::min(i, n - i);
    if (m == 0)
        return 0.0;
    if (m <= kDirectBinomialLimit)
    {
        double sum = 0.0;
        for (std::int64_t j = 1; j <= m; ++j)
            sum += std::log(static_cast<double>(n - m + j) / static_cast<double>(j));
        return sum;
    }
    auto dn = static_cast<double>(n);
    return std::lgamma(dn + 1.0) - std::lgamma(static_cast<double>(i) + 1.0) -
           std::lgamma(static_cast<double>(n - i) + 1.0);
}

double regularized_upper_gamma(double a, double b)
{
    check_gamma_args(a, b);
    if (b == 0.0)
        return 1.0;
    if (std::isinf(b))
        return 0.0;
    if (b < a + 1.0)
        return 1.0 - lower_gamma_series(a, b);
    return upper_gamma_fraction(a, b);
}

double regularized_lower_gamma(double a, double b)
{
    check_gamma_args(a, b);
    if (b == 0.0)
        return 0.0;
    if (std::isinf(b))
        return 1.0;
    if (b < a + 1.0)
        return lower_gamma_series(a, b);
    return 1.0 - upper_gamma_fraction(a, b);
}

double q_ary_entropy(double q, double p)
{
    if (!(q > 1.0))
        throw DomainError("q-ary entropy requires q > 1, got " + std::to_string(q));
    if (!(p >= 0.0 && p <= 1.0))
        throw DomainError("q-ary entropy requires p in [0, 1], got " + std::to_string(p));
    double ln_q = std::log(q);
    double h = scaled_log(p, std::log(q - 1.0)) - scaled_log(p, std::log(p)) -
               scaled_log(1.0 - p, std::log1p(-p));
    return h / ln_q;
}

double hamming_ball_volume(std::int64_t n, std::int64_t t, double q)
{
    if (n < 1)
        throw DomainError("Hamming ball requires n >= 1");
    if (t < 0 || t > n)
        throw DomainError("Hamming ball requires 0 <= t <= n, got t=" + std::to_string(t));
    if (!(q > 1.0))
        throw DomainError("Hamming ball requires q > 1, got " + std::to_string(q));
    double log_q1 = std::log(q - 1.0);
    double acc = kNegInf;
    for (std::int64_t i = 0; i <= t; ++i)
        acc = log_add_exp(acc, log_binomial(n, i) + scaled_log(static_cast<double>(i), log_q1));
    return acc;
}

} // namespace mdsrel
