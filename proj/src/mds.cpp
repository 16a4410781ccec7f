#include "mdsrel/mds.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "mdsrel/csv.hpp"
#include "mdsrel/errors.hpp"
#include "mdsrel/special_math.hpp"

namespace mdsrel
{

namespace
{

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) { return format_double(v); }

void check_probability(double R)
{
    if (!(R >= 0.0 && R <= 1.0))
        throw DomainError("reliability must lie in [0, 1], got " + fmt(R));
}

void check_threshold(std::int64_t t, std::int64_t n)
{
    if (n < 0 || t < 0 || t > n)
        throw DomainError("psi requires 0 <= t <= n, got t=" + std::to_string(t) + ", n=" + std::to_string(n));
}

// ln of C(n, i) F^i R^(n-i).
double log_binomial_term(std::int64_t n, std::int64_t i, double log_f, double log_r)
{
    return log_binomial(n, i) + scaled_log(static_cast<double>(i), log_f) +
           scaled_log(static_cast<double>(n - i), log_r);
}

struct BlockEval
{
    HazardPoint point;
    // ln(block hazard / child hazard); -inf when the block cannot fail at this instant.
    double log_multiplier = kNegInf;
    double log_survival = 0.0;
};

BlockEval evaluate_block(const MdsCode& code, const HazardPoint& child)
{
    const std::int64_t n = code.n();
    const std::int64_t t = code.t();
    const double log_r = -child.cumulative_hazard;
    const double log_f = child.log_failure;

    double log_surv = kNegInf;
    double log_fail = kNegInf;
    for (std::int64_t i = 0; i <= n; ++i)
    {
        double term = log_binomial_term(n, i, log_f, log_r);
        if (i <= t)
            log_surv = log_add_exp(log_surv, term);
        else
            log_fail = log_add_exp(log_fail, term);
    }
    // Whichever tail is smaller carries the precision; derive the other from it.
    if (log_fail < -std::numbers::ln2)
        log_surv = std::log1p(-std::exp(log_fail));
    else if (log_surv < -std::numbers::ln2)
        log_fail = std::log1p(-std::exp(log_surv));

    BlockEval out;
    out.log_survival = log_surv;
    out.point.cumulative_hazard = -log_surv;
    out.point.log_failure = log_fail;

    if (log_surv == kNegInf || child.hazard == 0.0 || (t > 0 && log_f == kNegInf))
    {
        out.point.hazard = 0.0;
        return out;
    }
    // n C(n-1, t) F^t R^(n-t) / psi = (n - t) P(t failed) / P(at most t failed).
    // The ratios P(i)/P(t) come from the term recurrence, so no large logs cancel.
    const double log_odds = log_r - log_f;
    double log_rel = 0.0;
    double log_sum = 0.0;
    for (std::int64_t i = t; i > 0; --i)
    {
        log_rel += std::log(static_cast<double>(i)) - std::log(static_cast<double>(n - i + 1)) + log_odds;
        log_sum = log_add_exp(log_sum, log_rel);
    }
    out.log_multiplier = std::log(static_cast<double>(n - t)) - log_sum;
    out.point.hazard = child.hazard * std::exp(out.log_multiplier);
    return out;
}

HazardPoint leaf_point(const HazardModel& model, double x)
{
    if (!(x >= 0.0))
        throw DomainError("time must be non-negative, got " + fmt(x));
    return model.evaluate(x);
}

[[noreturn]] void throw_dead_block(double x, const MdsCode& code)
{
    throw NumericOverflowError("block survival psi_t(n) vanished even in log space at x=" + fmt(x) +
                               " for n=" + std::to_string(code.n()) + ", t=" + std::to_string(code.t()));
}

} // namespace

//---------------------------------------------------------------------------//

MdsCode::MdsCode(std::int64_t n, std::int64_t k) : n_(n), k_(k)
{
    if (n < 1 || k < 1 || k > n)
        throw DomainError("MDS code requires 1 <= k <= n, got (" + std::to_string(n) + ", " + std::to_string(k) + ")");
}

std::string MdsCode::describe() const
{
    return "(" + std::to_string(n_) + "," + std::to_string(k_) + ")";
}

ArrayConfig::ArrayConfig(std::vector<MdsCode> dims) : dims_(std::move(dims))
{
    if (dims_.empty())
        throw DomainError("array needs at least one dimension");
    std::int64_t total = 1;
    for (const auto& d : dims_)
    {
        if (total > std::numeric_limits<std::int64_t>::max() / d.n())
            throw DomainError("array size overflows a 64-bit count");
        total *= d.n();
    }
}

std::int64_t ArrayConfig::total_length(std::size_t s) const
{
    if (s < 1 || s > dims_.size())
        throw DomainError("dimension index out of range");
    std::int64_t total = 1;
    for (std::size_t i = 0; i < s; ++i)
        total *= dims_[i].n();
    return total;
}

std::int64_t ArrayConfig::data_count(std::size_t s) const
{
    if (s < 1 || s > dims_.size())
        throw DomainError("dimension index out of range");
    std::int64_t total = 1;
    for (std::size_t i = 0; i < s; ++i)
        total *= dims_[i].k();
    return total;
}

double ArrayConfig::total_rate(std::size_t s) const
{
    return static_cast<double>(data_count(s)) / static_cast<double>(total_length(s));
}

std::string ArrayConfig::describe() const
{
    std::string out;
    for (const auto& d : dims_)
        out += (out.empty() ? "" : "x") + d.describe();
    return out;
}

//---------------------------------------------------------------------------//

double psi(std::int64_t t, std::int64_t n, double R)
{
    check_threshold(t, n);
    check_probability(R);
    if (t == n)
        return 1.0;
    HazardPoint child;
    child.cumulative_hazard = R == 0.0 ? std::numeric_limits<double>::infinity() : -std::log(R);
    child.log_failure = std::log1p(-R);
    return std::exp(evaluate_block(MdsCode(n, n - t), child).log_survival);
}

double psi_z(std::int64_t z, std::int64_t t, std::int64_t n, double R)
{
    check_threshold(t, n);
    if (z < 0 || z > n)
        throw DomainError("psi_z requires 0 <= z <= n, got z=" + std::to_string(z));
    check_probability(R);
    if (z > t)
        return 0.0;
    const double log_r = R == 0.0 ? kNegInf : std::log(R);
    const double log_f = std::log1p(-R);
    double acc = kNegInf;
    for (std::int64_t i = z; i <= t; ++i)
        acc = log_add_exp(acc, log_binomial(i, z) + log_binomial_term(n, i, log_f, log_r));
    return std::exp(acc);
}

HazardPoint block_point(const MdsCode& code, const HazardPoint& child)
{
    return evaluate_block(code, child).point;
}

HazardPoint system_point(double x, const ArrayConfig& config, const HazardModel& model)
{
    HazardPoint p = leaf_point(model, x);
    for (const auto& code : config.dims())
        p = block_point(code, p);
    return p;
}

double mu_c(double x, const MdsCode& code, const HazardModel& model)
{
    HazardPoint leaf = leaf_point(model, x);
    if (code.t() == 0)
        return leaf.hazard;
    BlockEval b = evaluate_block(code, leaf);
    if (b.log_survival == kNegInf)
        throw_dead_block(x, code);
    if (b.point.hazard == 0.0)
        return 0.0;
    return leaf.hazard * std::exp(b.log_multiplier - std::log(static_cast<double>(code.k())));
}

double mu_c_lower_bound(double x, const MdsCode& code, const HazardModel& model)
{
    HazardPoint leaf = leaf_point(model, x);
    double R = std::exp(-leaf.cumulative_hazard);
    double r = code.rate();
    if (R >= r)
        return 0.0;
    double F = -std::expm1(-leaf.cumulative_hazard);
    return leaf.hazard * (1.0 - R / r) / F;
}

double repetition_mu_c(double x, std::int64_t n, const HazardModel& model)
{
    if (n < 1)
        throw DomainError("repetition code needs n >= 1");
    HazardPoint leaf = leaf_point(model, x);
    if (n == 1)
        return leaf.hazard;
    if (leaf.log_failure == kNegInf || leaf.hazard == 0.0)
        return 0.0;
    auto dn = static_cast<double>(n);
    double log_value = std::log(dn) - leaf.cumulative_hazard + (dn - 1.0) * leaf.log_failure -
                       log1m_exp(dn * leaf.log_failure);
    return leaf.hazard * std::exp(log_value);
}

double parity_mu_c(double x, std::int64_t n, const HazardModel& model)
{
    if (n < 2)
        throw DomainError("parity code needs n >= 2");
    HazardPoint leaf = leaf_point(model, x);
    double F = -std::expm1(-leaf.cumulative_hazard);
    if (F == 0.0 || leaf.hazard == 0.0)
        return 0.0;
    double R = std::exp(-leaf.cumulative_hazard);
    auto dn = static_cast<double>(n);
    return leaf.hazard * dn * F / (dn * F + R);
}

double asymptotic_mu_c(double q, double r, double lambda_at_a)
{
    if (!(q > 1.0))
        throw DomainError("asymptotic hazard requires q > 1, got " + fmt(q));
    if (!(r > 0.0 && r <= 1.0))
        throw DomainError("code rate must lie in (0, 1], got " + fmt(r));
    if (q * r <= 1.0)
        return 0.0;
    return lambda_at_a * (q * r - 1.0) / (r * (q - 1.0));
}

double solve_time_for_q(const HazardModel& model, double q)
{
    if (!(q > 1.0))
        throw DomainError("solve_time_for_q requires q > 1, got " + fmt(q));
    return model.inverse_cumulative_hazard(std::log(q));
}

double adaptive_limit_constant(LimitRegime regime, double R, double r)
{
    if (!(r > 0.0 && r <= 1.0))
        throw DomainError("code rate must lie in (0, 1], got " + fmt(r));
    if (regime == LimitRegime::LongLife)
        return 1.0 / r;
    check_probability(R);
    double gap = R - r;
    double spread = 2.0 * R - r - 1.0;
    if (gap == 0.0)
        throw SingularityError("adaptive limit constant is singular: R - r vanished (R=" + fmt(R) + ")");
    if (spread == 0.0)
        throw SingularityError("adaptive limit constant is singular: 2R - r - 1 vanished (R=" + fmt(R) + ")");
    return (1.0 - R) / (gap * spread);
}

double multidim_mu_c(double x, const ArrayConfig& config, const HazardModel& model)
{
    HazardPoint p = leaf_point(model, x);
    const double leaf_hazard = p.hazard;
    double log_multiplier = 0.0;
    for (const auto& code : config.dims())
    {
        BlockEval b = evaluate_block(code, p);
        if (b.log_survival == kNegInf)
            throw_dead_block(x, code);
        log_multiplier += b.log_multiplier;
        p = b.point;
    }
    if (p.hazard == 0.0)
        return 0.0;
    if (config.data_components() == config.leaves())
        return leaf_hazard;
    return leaf_hazard * std::exp(log_multiplier - std::log(static_cast<double>(config.data_components())));
}

double system_survival(double x, const ArrayConfig& config, const HazardModel& model)
{
    return std::exp(-system_point(x, config, model).cumulative_hazard);
}

double system_density(double x, const MdsCode& code, const HazardModel& model)
{
    HazardPoint leaf = leaf_point(model, x);
    BlockEval b = evaluate_block(code, leaf);
    if (b.point.hazard == 0.0)
        return 0.0;
    return leaf.hazard * std::exp(b.log_multiplier + b.log_survival);
}

double array_hazard(double x, const ArrayConfig& config, const HazardModel& model)
{
    return static_cast<double>(config.data_components()) * multidim_mu_c(x, config, model);
}

//---------------------------------------------------------------------------//

BlockHazard::BlockHazard(MdsCode code, HazardModelPtr child) : code_(code), child_(std::move(child))
{
    if (!child_)
        throw DomainError("block hazard needs a child model");
}

double BlockHazard::hazard(double x) const
{
    return evaluate(x).hazard;
}

double BlockHazard::cumulative_hazard(double x) const
{
    return evaluate(x).cumulative_hazard;
}

double BlockHazard::inverse_cumulative_hazard(double u) const
{
    return invert_by_bisection(u);
}

HazardPoint BlockHazard::evaluate(double x) const
{
    return block_point(code_, leaf_point(*child_, x));
}

std::string BlockHazard::describe() const
{
    return "block" + code_.describe() + " of " + child_->describe();
}

} // namespace mdsrel
