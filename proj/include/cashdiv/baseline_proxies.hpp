#pragma once

// Literature approximations used as accuracy baselines: three-moment
// shifted lognormal, Bos-Vandermark spot/strike adjustment and the
// Bos-Gairat-Shepeleva volatility adjustment.

#include "cashdiv/market_model.hpp"
#include "cashdiv/parallel.hpp"

namespace cashdiv {

/// Raw moments E[S_T^m], m = 1..3, of S_T = S0 X_{0,T} - sum C_i X_{T_i,T}
/// (dividends always paid in full, no absorption).
struct TerminalMoments {
    double m1 = 0.0;
    double m2 = 0.0;
    double m3 = 0.0;
};

TerminalMoments terminal_moments(const MarketParams& market, const DividendSchedule& schedule, double horizon);

/// lambda + M exp(-sigma'^2 T/2 + sigma' W_T).
struct ShiftedLognormalParams {
    double shift = 0.0;
    double scale = 0.0;
    double vol = 0.0;
};

/// Matches mean, variance and skewness. Throws fit_error when the variance
/// or skewness is not positive, or the skewness is too small to resolve.
ShiftedLognormalParams fit_shifted_lognormal(const TerminalMoments& moments, double horizon);

/// Raw moments of the fitted family; used to round-trip the fit.
TerminalMoments shifted_lognormal_moments(const ShiftedLognormalParams& p, double horizon);

double moment_match_price(const MarketParams& market, const OptionSpec& option, const DividendSchedule& schedule);

struct SpotStrike {
    double spot = 0.0;
    double strike = 0.0;
};

/// S* = S0 - sum (1 - T_i/T) C_i e^{-r T_i},  K* = K + sum (T_i/T) C_i e^{r (T - T_i)}.
/// Throws adjustment_overflow when S* <= 0.
SpotStrike bv_adjusted_terms(const MarketParams& market, const OptionSpec& option, const DividendSchedule& schedule);
SpotStrike bv_adjusted_terms(const MarketParams& market, const OptionSpec& option, std::span<const Dividend> events);
double bv_price(const MarketParams& market, const OptionSpec& option, const DividendSchedule& schedule);

struct BgsTerms {
    double adjusted_spot = 0.0;
    double adjusted_vol = 0.0;
    double a = 0.0;
    double b = 0.0;
};

/// Volatility adjustment on the escrowed spot S* = S0 - sum C_i e^{-r T_i}:
///
///   sigma*^2 = sigma^2 + sigma sqrt(pi / 2T) [ 4 e^{a^2/2}/S* sum_i D_i (N(a) - N(a - sigma T_i/sqrt T))
///                                          + e^{b^2/2}/S*^2 sum_{i,j} D_i D_j (N(b) - N(b - 2 sigma min(T_i,T_j)/sqrt T)) ]
///
/// with D_i = C_i e^{-r T_i}, a = (ln(S*/K) + (r + sigma^2/2) T)/(sigma sqrt T), b = a + sigma sqrt(T)/2.
/// The double sum runs over all ordered pairs. Throws formula_breakdown
/// when sigma*^2 < 0 and adjustment_overflow when S* <= 0.
BgsTerms bgs_terms(const MarketParams& market, const OptionSpec& option, const DividendSchedule& schedule,
                   Execution exec = Execution::parallel);
double bgs_price(const MarketParams& market, const OptionSpec& option, const DividendSchedule& schedule,
                 Execution exec = Execution::parallel);

}  // namespace cashdiv
