#include "cashdiv/div_sensitivities.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "cashdiv/errors.hpp"
#include "cashdiv/monte_carlo.hpp"

namespace cashdiv {

SensitivityRequest::SensitivityRequest(MarketParams market, OptionSpec option, std::vector<double> div_times)
    : market_(market), option_(option), times_(std::move(div_times)) {
    market_.validate();
    option_.validate();
    if (times_.size() > static_cast<std::size_t>(kMaxSensitivityOrder)) {
        throw capability_error("dividend sensitivities are implemented up to order " +
                               std::to_string(kMaxSensitivityOrder));
    }
    for (double t : times_) {
        if (!std::isfinite(t) || !(t > 0.0) || !(t < option_.maturity)) {
            throw std::domain_error("sensitivity date " + std::to_string(t) + " is outside (0, maturity)");
        }
    }
    std::sort(times_.begin(), times_.end());
}

double dividend_sensitivity(const SensitivityRequest& req) {
    const auto& m = req.market();
    const auto& o = req.option();
    const auto times = req.div_times();
    const int k = req.order();
    const double sig2 = m.vol * m.vol;

    double sum_t = 0.0;
    double weighted = 0.0;  // sum_{q>=2} (q-1) T_(q), ascending order
    for (std::size_t q = 0; q < times.size(); ++q) {
        sum_t += times[q];
        weighted += static_cast<double>(q) * times[q];
    }
    BsInputs shifted = bs_inputs(m, o);
    shifted.spot = m.spot * std::exp(-sig2 * sum_t);
    const double deriv = bs_derivative(shifted, {k, 0}, o.kind);
    const double sign = k % 2 == 0 ? 1.0 : -1.0;
    return sign * deriv * std::exp(-m.rate * sum_t - sig2 * weighted);
}

double dividend_sensitivity(const MarketParams& market, const OptionSpec& option, std::span<const double> div_times) {
    return dividend_sensitivity(SensitivityRequest(market, option, {div_times.begin(), div_times.end()}));
}

namespace {

// Visits non-decreasing index tuples of length `depth` over [0, n).
template <typename F>
void for_each_sorted_tuple(std::size_t n, int depth, std::vector<std::size_t>& tuple, std::size_t start, F&& f) {
    if (static_cast<int>(tuple.size()) == depth) {
        f(tuple);
        return;
    }
    for (std::size_t i = start; i < n; ++i) {
        tuple.push_back(i);
        for_each_sorted_tuple(n, depth, tuple, i, f);
        tuple.pop_back();
    }
}

}  // namespace

double taylor_price(int order, const MarketParams& market, const OptionSpec& option,
                    const DividendSchedule& schedule) {
    if (order < 1 || order > kMaxSensitivityOrder) {
        throw capability_error("taylor_price: order must be 1, 2 or 3");
    }
    validate_inputs(market, option, schedule);

    double price = bs_price(bs_inputs(market, option), option.kind);
    const auto ev = schedule.events();
    std::vector<std::size_t> tuple;
    std::vector<double> times;
    for (int k = 1; k <= order; ++k) {
        for_each_sorted_tuple(ev.size(), k, tuple, 0, [&](const std::vector<std::size_t>& idx) {
            double weight = 1.0;
            double run_factorial = 1.0;
            times.clear();
            for (std::size_t q = 0; q < idx.size(); ++q) {
                weight *= ev[idx[q]].amount;
                // multiplicity factorials accumulate as runs of equal indices
                run_factorial = (q > 0 && idx[q] == idx[q - 1]) ? run_factorial + 1.0 : 1.0;
                weight /= run_factorial;
                times.push_back(ev[idx[q]].time);
            }
            if (weight != 0.0) price += weight * dividend_sensitivity(market, option, times);
        });
    }
    return price;
}

MartingaleEstimate martingale_check(const MarketParams& market, const OptionSpec& option, double horizon, int k,
                                    double a, std::size_t n_paths, std::uint64_t seed) {
    market.validate();
    option.validate();
    if (!(horizon > 0.0) || !(horizon < option.maturity)) {
        throw std::domain_error("martingale_check: horizon must lie in (0, maturity)");
    }
    if (k < 0 || k > 2) throw capability_error("martingale_check: k must be 0, 1 or 2");
    if (!(a >= 0.0)) throw std::domain_error("martingale_check: a must be non-negative");

    const double sig2 = market.vol * market.vol;
    const double kd = static_cast<double>(k);
    const double spot_scale = std::exp(kd * sig2 * (horizon - a));
    const double growth = std::exp((kd - 1.0) * (market.rate + 0.5 * kd * sig2) * horizon);
    BsInputs later = bs_inputs(market, option);
    later.tenor = option.maturity - horizon;
    const auto z_t = [&](double s_t) {
        BsInputs in = later;
        in.spot = s_t * spot_scale;
        return bs_derivative(in, {k, 0}, option.kind) * growth;
    };

    McConfig mc;
    mc.n_paths = n_paths;
    mc.seed = seed;
    mc.antithetic = false;
    const auto est = mc_expectation(market, {}, horizon, mc, z_t);

    BsInputs start = bs_inputs(market, option);
    start.spot = market.spot * std::exp(-kd * sig2 * a);
    return {est.mean, est.std_error, bs_derivative(start, {k, 0}, option.kind)};
}

}  // namespace cashdiv
