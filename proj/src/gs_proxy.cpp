#include "cashdiv/gs_proxy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cashdiv/baseline_proxies.hpp"
#include "cashdiv/errors.hpp"

namespace cashdiv {

namespace {

constexpr double kDegenerate = 1e-300;

std::size_t row_offset(std::size_t i, std::size_t n) { return i * (2 * n - i + 1) / 2; }

// Per-date quantities reused across pairs.
struct DateData {
    double time;
    double n_d;   // N(d(t))
    double disc;  // e^{-r t}
};

struct PairContext {
    const ClosedFormScalars* s;
    double d1;
    double vol_over_sqrt_t;
    double sig2;
};

// Kept out of line so every caller runs the identical instruction sequence.
[[gnu::noinline]] double pair_coefficient(const PairContext& ctx, const DateData& lo, const DateData& hi) {
    const auto& s = *ctx.s;
    const double d = ctx.d1 - ctx.vol_over_sqrt_t * (lo.time + hi.time);
    constexpr double inv_sqrt_2pi = 0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2;
    const double bracket = s.a + s.b * (lo.n_d + hi.n_d) + s.c * lo.n_d * hi.n_d +
                           s.d * inv_sqrt_2pi * std::exp(ctx.sig2 * lo.time - 0.5 * d * d);
    return lo.disc * hi.disc * bracket / s.gamma;
}

DateData date_data(const BsInputs& in, double d1, double t) {
    const double d = d1 - in.vol / std::sqrt(in.tenor) * t;
    return {t, norm_cdf(d), std::exp(-in.rate * t)};
}

void check_time(const OptionSpec& option, double t) {
    if (!std::isfinite(t) || !(t > 0.0) || !(t < option.maturity)) {
        throw std::domain_error("dividend date must lie in (0, maturity)");
    }
}

}  // namespace

ClosedFormScalars closed_form_scalars(const MarketParams& market, const OptionSpec& option) {
    market.validate();
    option.validate();
    const BsInputs in = bs_inputs(market, option);
    const auto [d1, d2] = d_values(in);
    const double n1 = norm_cdf(d1);
    const double n2 = norm_cdf(d2);
    const double p1 = norm_pdf(d1);
    const double p2 = norm_pdf(d2);
    const double spread = n1 - n2;
    if (!(spread >= kDegenerate)) throw degeneracy_error("N(d1) - N(d2) underflowed");

    ClosedFormScalars s;
    s.n_d1 = n1;
    s.n_d2 = n2;
    const double cross = n2 * p1 - n1 * p2;
    s.gamma = market.vol * market.spot * std::sqrt(option.maturity) * p1 * spread * spread * spread;
    s.a = -cross * cross;
    s.b = (p1 - p2) * cross;
    s.c = -(p1 - p2) * (p1 - p2);
    s.d = p1 * spread * spread;
    if (!(s.gamma >= kDegenerate) || !std::isfinite(s.gamma)) throw degeneracy_error("closed-form gamma underflowed");
    return s;
}

FirstOrderCoeffs first_order_coeffs(const MarketParams& market, const OptionSpec& option, double t) {
    check_time(option, t);
    const BsInputs in = bs_inputs(market, option);
    const auto [d1, d2] = d_values(in);
    const double n1 = norm_cdf(d1);
    const double n2 = norm_cdf(d2);
    const double spread = n1 - n2;
    if (!(spread >= kDegenerate)) throw degeneracy_error("N(d1) - N(d2) underflowed");
    const double nt = norm_cdf(d_at(in, t));
    return {-std::exp(-in.rate * t) * (nt - n2) / spread, std::exp(in.rate * (in.tenor - t)) * (n1 - nt) / spread};
}

SecondOrderCoeffs second_order_coeffs(const MarketParams& market, const OptionSpec& option, double ti, double tj) {
    check_time(option, ti);
    check_time(option, tj);
    if (tj < ti) std::swap(ti, tj);
    const auto s = closed_form_scalars(market, option);
    const BsInputs in = bs_inputs(market, option);
    const double d1 = d_values(in).d1;
    const PairContext ctx{&s, d1, in.vol / std::sqrt(in.tenor), in.vol * in.vol};
    const double a = pair_coefficient(ctx, date_data(in, d1, ti), date_data(in, d1, tj));
    return {a, std::exp(in.rate * in.tenor) * a};
}

const SecondOrderCoeffs& AdjustmentCoefficients::pair(std::size_t i, std::size_t j) const {
    if (j < i) std::swap(i, j);
    const std::size_t n = size();
    if (j >= n) throw std::out_of_range("AdjustmentCoefficients::pair");
    return second_order[row_offset(i, n) + (j - i)];
}

AdjustmentCoefficients adjustment_coefficients(const MarketParams& market, const OptionSpec& option,
                                               std::span<const double> times, Execution exec) {
    for (std::size_t i = 0; i < times.size(); ++i) {
        check_time(option, times[i]);
        if (i > 0 && !(times[i] > times[i - 1])) throw std::domain_error("dividend dates must be strictly increasing");
    }
    AdjustmentCoefficients out;
    out.scalars = closed_form_scalars(market, option);
    const BsInputs in = bs_inputs(market, option);
    const double d1 = d_values(in).d1;
    const std::size_t n = times.size();
    const double growth = std::exp(in.rate * in.tenor);
    const double spread = out.scalars.n_d1 - out.scalars.n_d2;

    std::vector<DateData> dates(n);
    out.first_order.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        dates[i] = date_data(in, d1, times[i]);
        out.first_order[i] = {-dates[i].disc * (dates[i].n_d - out.scalars.n_d2) / spread,
                              growth * dates[i].disc * (out.scalars.n_d1 - dates[i].n_d) / spread};
    }

    out.second_order.resize(n * (n + 1) / 2);
    const PairContext ctx{&out.scalars, d1, in.vol / std::sqrt(in.tenor), in.vol * in.vol};
    auto fill_row = [&](std::size_t i) {
        SecondOrderCoeffs* slot = out.second_order.data() + row_offset(i, n);
        for (std::size_t j = i; j < n; ++j) {
            const double a = pair_coefficient(ctx, dates[i], dates[j]);
            slot[j - i] = {a, growth * a};
        }
    };
    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 16)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) fill_row(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < n; ++i) fill_row(i);
    }
    return out;
}

ProxyModel::ProxyModel(const MarketParams& market, const OptionSpec& option, std::span<const double> times,
                       Execution exec)
    : market_(market), option_(option), times_(times.begin(), times.end()) {
    market_.validate();
    option_.validate();
    try {
        coeffs_ = adjustment_coefficients(market_, option_, times_, exec);
    } catch (const degeneracy_error&) {
        degenerate_ = true;
        for (std::size_t i = 0; i < times_.size(); ++i) check_time(option_, times_[i]);
    }
}

AdjustedTerms ProxyModel::terms(std::span<const double> amounts) const {
    const std::size_t n = times_.size();
    if (amounts.size() != n) throw std::invalid_argument("ProxyModel: one amount per dividend date required");

    AdjustedTerms out;
    if (degenerate_) {
        std::vector<Dividend> events(n);
        for (std::size_t i = 0; i < n; ++i) events[i] = {times_[i], amounts[i]};
        const auto bv = bv_adjusted_terms(market_, option_, events);
        out = {bv.spot, bv.strike, true};
    } else {
        double spot = market_.spot;
        double strike = option_.strike;
        for (std::size_t i = 0; i < n; ++i) {
            spot += coeffs_.first_order[i].a * amounts[i];
            strike += coeffs_.first_order[i].b * amounts[i];
        }
        // 1/2 sum over ordered pairs = diagonal with weight 1/2, i < j with
        // weight 1. Summed in ascending (i, j) order.
        double quad = 0.0;
        std::size_t k = 0;
        for (std::size_t i = 0; i < n; ++i) {
            quad += 0.5 * coeffs_.second_order[k++].a * amounts[i] * amounts[i];
            for (std::size_t j = i + 1; j < n; ++j) quad += coeffs_.second_order[k++].a * amounts[i] * amounts[j];
        }
        out.spot = spot + quad;
        out.strike = strike + std::exp(market_.rate * option_.maturity) * quad;
    }
    if (!(out.spot > 0.0) || !(out.strike > 0.0)) {
        throw adjustment_overflow("adjusted spot/strike not positive: dividends too large for the proxy");
    }
    return out;
}

double ProxyModel::price(std::span<const double> amounts) const {
    const auto t = terms(amounts);
    const double call = bs_price({t.spot, t.strike, option_.maturity, market_.rate, market_.vol}, OptionKind::call);
    if (option_.kind == OptionKind::call) return call;
    double pv = 0.0;
    for (std::size_t i = 0; i < times_.size(); ++i) pv += amounts[i] * std::exp(-market_.rate * times_[i]);
    return call - (market_.spot - option_.strike * std::exp(-market_.rate * option_.maturity) - pv);
}

AdjustedTerms adjusted_terms(const MarketParams& market, const OptionSpec& option, const DividendSchedule& schedule,
                             Execution exec) {
    validate_inputs(market, option, schedule);
    const auto times = schedule.times();
    return ProxyModel(market, option, times, exec).terms(schedule.amounts());
}

ProxyResult proxy_evaluate(const MarketParams& market, const OptionSpec& option, const DividendSchedule& schedule,
                           Execution exec) {
    validate_inputs(market, option, schedule);
    const auto times = schedule.times();
    const auto amounts = schedule.amounts();
    const ProxyModel model(market, option, times, exec);
    ProxyResult r;
    r.terms = model.terms(amounts);
    r.price = model.price(amounts);
    return r;
}

double proxy_price(const MarketParams& market, const OptionSpec& option, const DividendSchedule& schedule,
                   Execution exec) {
    return proxy_evaluate(market, option, schedule, exec).price;
}

}  // namespace cashdiv
