#pragma once

// Exact sensitivities of the option price to cash dividends, evaluated at
// zero dividends, and the Taylor-series price built from them.

#include <cstdint>
#include <span>
#include <vector>

#include "cashdiv/market_model.hpp"

namespace cashdiv {

inline constexpr int kMaxSensitivityOrder = 3;

/// A multiset of ex-dates (repeats allowed), stored sorted ascending.
class SensitivityRequest {
public:
    SensitivityRequest(MarketParams market, OptionSpec option, std::vector<double> div_times);

    const MarketParams& market() const { return market_; }
    const OptionSpec& option() const { return option_; }
    std::span<const double> div_times() const { return times_; }
    int order() const { return static_cast<int>(times_.size()); }

private:
    MarketParams market_;
    OptionSpec option_;
    std::vector<double> times_;
};

/// d^k Price / dC_{i1}...dC_{ik} at C = 0:
///
///   (-1)^k d^k V_BS/dS^k (S0 exp(-sigma^2 sum T), K, T)
///       * exp(-r sum T - sigma^2 sum_{q>=2} (q-1) T_(q))
///
/// with T_(1) <= ... <= T_(k) in ascending order. Throws capability_error
/// for k > 3 and std::domain_error for dates outside (0, T).
double dividend_sensitivity(const SensitivityRequest& req);
double dividend_sensitivity(const MarketParams& market, const OptionSpec& option, std::span<const double> div_times);

/// Multivariate Taylor polynomial of order 1..3 of the price in the dividend
/// amounts, expanded at zero. Sums over sorted index tuples with weights
/// prod C / prod(multiplicity!).
double taylor_price(int order, const MarketParams& market, const OptionSpec& option,
                    const DividendSchedule& schedule);

struct MartingaleEstimate {
    double sample_mean = 0.0;
    double std_error = 0.0;
    double reference = 0.0;  // Z_0
};

/// Simulates Z_t = d^k V_BS/dS^k (S_t e^{k sigma^2 (t - a)}, T - t) e^{(k-1)(r + k sigma^2/2) t}
/// under Black-Scholes dynamics with no dividends, where T is the option
/// maturity. Z is a martingale, so the sample mean should match
/// Z_0 = d^k V_BS/dS^k (S0 e^{-k sigma^2 a}, T).
MartingaleEstimate martingale_check(const MarketParams& market, const OptionSpec& option, double horizon, int k,
                                    double a, std::size_t n_paths, std::uint64_t seed);

}  // namespace cashdiv
