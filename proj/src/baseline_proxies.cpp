#include "cashdiv/baseline_proxies.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "cashdiv/errors.hpp"

namespace cashdiv {

TerminalMoments terminal_moments(const MarketParams& market, const DividendSchedule& schedule, double horizon) {
    market.validate();
    if (!(horizon > 0.0)) throw std::domain_error("horizon must be positive");
    validate_event_times(schedule.events(), horizon);

    const double r = market.rate;
    const double sig2 = market.vol * market.vol;
    // E[X^m] over dt is exp(m r dt + m(m-1) sigma^2 dt / 2); a cash payment
    // maps moments through the binomial expansion of (S - C)^m.
    double m1 = market.spot;
    double m2 = m1 * m1;
    double m3 = m2 * m1;
    double t0 = 0.0;
    auto grow = [&](double dt) {
        m1 *= std::exp(r * dt);
        m2 *= std::exp(2.0 * r * dt + sig2 * dt);
        m3 *= std::exp(3.0 * r * dt + 3.0 * sig2 * dt);
    };
    for (const auto& e : schedule.events()) {
        grow(e.time - t0);
        const double c = e.amount;
        m3 = m3 - 3.0 * c * m2 + 3.0 * c * c * m1 - c * c * c;
        m2 = m2 - 2.0 * c * m1 + c * c;
        m1 = m1 - c;
        t0 = e.time;
    }
    grow(horizon - t0);
    return {m1, m2, m3};
}

namespace {

double skew_map(double v) { return (v + 2.0) * std::sqrt(v - 1.0); }

// Safeguarded Newton for (v + 2) sqrt(v - 1) = skew on (1, 1e6).
double solve_v(double skew) {
    double lo = 1.0;
    double hi = 1e6;
    if (skew >= skew_map(hi)) throw fit_error("shifted-lognormal fit: skewness out of range");
    const double w = skew / 3.0;  // small-skew guess: sqrt(v - 1) ~ skew / 3
    double v = std::clamp(1.0 + w * w, std::nextafter(lo, hi), hi);
    for (int it = 0; it < 200; ++it) {
        const double f = skew_map(v) - skew;
        if (f > 0.0) {
            hi = v;
        } else {
            lo = v;
        }
        const double root = std::sqrt(v - 1.0);
        const double df = root + (v + 2.0) / (2.0 * root);
        double next = v - f / df;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - v) <= 1e-12 * (next - 1.0) + 1e-300) return next;
        v = next;
    }
    return v;
}

}  // namespace

ShiftedLognormalParams fit_shifted_lognormal(const TerminalMoments& mo, double horizon) {
    if (!(horizon > 0.0)) throw std::domain_error("horizon must be positive");
    const double var = mo.m2 - mo.m1 * mo.m1;
    if (!(var > 0.0)) throw fit_error("shifted-lognormal fit: non-positive variance");
    const double central3 = mo.m3 - 3.0 * mo.m1 * mo.m2 + 2.0 * mo.m1 * mo.m1 * mo.m1;
    const double skew = central3 / std::pow(var, 1.5);
    if (!(skew > 0.0)) throw fit_error("shifted-lognormal fit: non-positive skewness");
    const double v = solve_v(skew);
    if (!(v - 1.0 > 1e-12)) throw fit_error("shifted-lognormal fit: skewness too small (Gaussian limit)");
    const double scale = std::sqrt(var / (v - 1.0));
    return {mo.m1 - scale, scale, std::sqrt(std::log(v) / horizon)};
}

TerminalMoments shifted_lognormal_moments(const ShiftedLognormalParams& p, double horizon) {
    const double v = std::exp(p.vol * p.vol * horizon);
    const double l = p.shift;
    const double m = p.scale;
    return {l + m, l * l + 2.0 * l * m + m * m * v,
            l * l * l + 3.0 * l * l * m + 3.0 * l * m * m * v + m * m * m * v * v * v};
}

double moment_match_price(const MarketParams& market, const OptionSpec& option, const DividendSchedule& schedule) {
    validate_inputs(market, option, schedule);
    const double horizon = option.maturity;
    const double df = std::exp(-market.rate * horizon);
    const auto mo = terminal_moments(market, schedule, horizon);
    const auto p = fit_shifted_lognormal(mo, horizon);

    const double k_eff = option.strike - p.shift;
    if (k_eff <= 0.0) {
        return option.kind == OptionKind::call ? df * (mo.m1 - option.strike) : 0.0;
    }
    // Undiscounted Black formula on Y with mean `scale`, then discount.
    const BsInputs in{p.scale, k_eff, horizon, 0.0, p.vol};
    return df * bs_price(in, option.kind);
}

SpotStrike bv_adjusted_terms(const MarketParams& market, const OptionSpec& option, const DividendSchedule& schedule) {
    validate_inputs(market, option, schedule);
    return bv_adjusted_terms(market, option, schedule.events());
}

SpotStrike bv_adjusted_terms(const MarketParams& market, const OptionSpec& option, std::span<const Dividend> events) {
    const double big_t = option.maturity;
    const double r = market.rate;
    SpotStrike out{market.spot, option.strike};
    for (const auto& e : events) {
        const double w = e.time / big_t;
        out.spot -= (1.0 - w) * e.amount * std::exp(-r * e.time);
        out.strike += w * e.amount * std::exp(r * (big_t - e.time));
    }
    if (!(out.spot > 0.0)) throw adjustment_overflow("Bos-Vandermark adjusted spot is not positive");
    return out;
}

double bv_price(const MarketParams& market, const OptionSpec& option, const DividendSchedule& schedule) {
    const auto adj = bv_adjusted_terms(market, option, schedule);
    return bs_price({adj.spot, adj.strike, option.maturity, market.rate, market.vol}, option.kind);
}

BgsTerms bgs_terms(const MarketParams& market, const OptionSpec& option, const DividendSchedule& schedule,
                   Execution exec) {
    validate_inputs(market, option, schedule);
    const double big_t = option.maturity;
    const double r = market.rate;
    const double sigma = market.vol;
    const double sq = std::sqrt(big_t);
    const auto ev = schedule.events();
    const std::size_t n = ev.size();

    std::vector<double> disc(n);
    for (std::size_t i = 0; i < n; ++i) disc[i] = ev[i].amount * std::exp(-r * ev[i].time);
    double spot = market.spot;
    for (double d : disc) spot -= d;
    if (!(spot > 0.0)) throw adjustment_overflow("escrowed spot is not positive");

    BgsTerms out;
    out.adjusted_spot = spot;
    out.a = (std::log(spot / option.strike) + (r + 0.5 * sigma * sigma) * big_t) / (sigma * sq);
    out.b = out.a + 0.5 * sigma * sq;
    const double na = norm_cdf(out.a);
    const double nb = norm_cdf(out.b);

    double first = 0.0;
    for (std::size_t i = 0; i < n; ++i) first += disc[i] * (na - norm_cdf(out.a - sigma * ev[i].time / sq));

    // Row sums are independent; combining them in row order keeps the serial
    // and parallel results identical.
    std::vector<double> rows(n);
    auto row = [&](std::size_t i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double tmin = std::min(ev[i].time, ev[j].time);
            acc += disc[j] * (nb - norm_cdf(out.b - 2.0 * sigma * tmin / sq));
        }
        rows[i] = disc[i] * acc;
    };
    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) row(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < n; ++i) row(i);
    }
    double second = 0.0;
    for (double x : rows) second += x;

    const double correction = sigma * std::sqrt(std::numbers::pi / (2.0 * big_t)) *
                              (4.0 * std::exp(0.5 * out.a * out.a) / spot * first +
                               std::exp(0.5 * out.b * out.b) / (spot * spot) * second);
    const double var = sigma * sigma + correction;
    if (!(var >= 0.0)) throw formula_breakdown("volatility adjustment produced a negative variance");
    out.adjusted_vol = std::sqrt(var);
    return out;
}

double bgs_price(const MarketParams& market, const OptionSpec& option, const DividendSchedule& schedule,
                 Execution exec) {
    const auto t = bgs_terms(market, option, schedule, exec);
    if (!(t.adjusted_vol > 0.0)) throw formula_breakdown("volatility adjustment produced zero volatility");
    return bs_price({t.adjusted_spot, option.strike, option.maturity, market.rate, t.adjusted_vol}, option.kind);
}

}  // namespace cashdiv
