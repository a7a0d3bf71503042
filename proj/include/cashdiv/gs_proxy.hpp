#pragma once

// Second-order spot/strike-adjustment proxy. The call is priced as
// V_BS(S*, K*) with
//
//   S* = S0 + sum_i a_i C_i + 1/2 sum_{i,j} a_ij C_i C_j
//   K* = K  + sum_i b_i C_i + 1/2 sum_{i,j} b_ij C_i C_j
//
// where the coefficients are chosen so that the first and second dividend
// derivatives at zero match the exact ones, and S* - K* e^{-rT} equals
// S0 - K e^{-rT} - sum C_i e^{-r T_i} (call-put parity). Puts follow from
// that parity.

#include <span>
#include <vector>

#include "cashdiv/market_model.hpp"
#include "cashdiv/parallel.hpp"

namespace cashdiv {

/// Scalars of the second-order closed form. The single-letter names follow
/// the closed form; they are unrelated to the per-dividend a_i, b_i.
struct ClosedFormScalars {
    double gamma = 0.0;
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;
    double n_d1 = 0.0;
    double n_d2 = 0.0;
};

/// Throws degeneracy_error when N(d1) - N(d2) or gamma falls below 1e-300.
ClosedFormScalars closed_form_scalars(const MarketParams& market, const OptionSpec& option);

struct FirstOrderCoeffs {
    double a = 0.0;  // spot
    double b = 0.0;  // strike
};

struct SecondOrderCoeffs {
    double a = 0.0;
    double b = 0.0;
};

/// a_i = -e^{-r t}(N(d(t)) - N(d2)) / (N(d1) - N(d2)),
/// b_i = e^{r(T - t)}(N(d1) - N(d(t))) / (N(d1) - N(d2)).
FirstOrderCoeffs first_order_coeffs(const MarketParams& market, const OptionSpec& option, double t);

/// Closed form for (a_ij, b_ij), b_ij = e^{rT} a_ij. Inputs are sorted so
/// the e^{sigma^2 t} factor sits on the earlier date.
SecondOrderCoeffs second_order_coeffs(const MarketParams& market, const OptionSpec& option, double ti, double tj);

/// All coefficients for a fixed set of ex-dates.
struct AdjustmentCoefficients {
    ClosedFormScalars scalars;
    std::vector<FirstOrderCoeffs> first_order;
    /// Upper triangle (i <= j) packed row by row.
    std::vector<SecondOrderCoeffs> second_order;

    std::size_t size() const { return first_order.size(); }
    const SecondOrderCoeffs& pair(std::size_t i, std::size_t j) const;
};

/// Theta(n^2) coefficient evaluations. The parallel variant fills the same
/// slots with the same arithmetic as the serial one.
AdjustmentCoefficients adjustment_coefficients(const MarketParams& market, const OptionSpec& option,
                                               std::span<const double> times, Execution exec = Execution::parallel);

struct AdjustedTerms {
    double spot = 0.0;
    double strike = 0.0;
    /// Set when N(d1) - N(d2) underflowed and the Bos-Vandermark adjustment
    /// was used instead.
    bool bv_fallback = false;
};

/// Proxy for a fixed set of ex-dates, as a function of the cash amounts.
/// Amounts may have any sign, which the dividend-derivative checks need.
class ProxyModel {
public:
    ProxyModel(const MarketParams& market, const OptionSpec& option, std::span<const double> times,
               Execution exec = Execution::parallel);

    /// Throws adjustment_overflow when S* or K* is not positive.
    AdjustedTerms terms(std::span<const double> amounts) const;
    double price(std::span<const double> amounts) const;

    bool degenerate() const { return degenerate_; }
    const AdjustmentCoefficients& coefficients() const { return coeffs_; }

private:
    MarketParams market_;
    OptionSpec option_;
    std::vector<double> times_;
    bool degenerate_ = false;
    AdjustmentCoefficients coeffs_;
};

AdjustedTerms adjusted_terms(const MarketParams& market, const OptionSpec& option, const DividendSchedule& schedule,
                             Execution exec = Execution::parallel);

struct ProxyResult {
    double price = 0.0;
    AdjustedTerms terms;
};

ProxyResult proxy_evaluate(const MarketParams& market, const OptionSpec& option, const DividendSchedule& schedule,
                           Execution exec = Execution::parallel);

double proxy_price(const MarketParams& market, const OptionSpec& option, const DividendSchedule& schedule,
                   Execution exec = Execution::parallel);

}  // namespace cashdiv
