#pragma once

// Closed-form Black-Scholes primitives on a non-dividend-paying underlying.

#include <string_view>

namespace cashdiv {

enum class OptionKind { call, put };

std::string_view to_string(OptionKind kind);
OptionKind parse_option_kind(std::string_view text);

/// Inputs to the plain Black-Scholes formula. All fields are required to be
/// strictly positive except the rate.
struct BsInputs {
    double spot = 0.0;
    double strike = 0.0;
    double tenor = 0.0;
    double rate = 0.0;
    double vol = 0.0;

    /// Throws std::domain_error when an invariant is violated.
    void validate() const;
};

/// Partial-derivative order in (spot, strike).
struct DerivOrder {
    int spot_order = 0;
    int strike_order = 0;
};

inline constexpr int kMaxSpotOrder = 4;
inline constexpr int kMaxStrikeOrder = 2;
inline constexpr int kMaxTotalOrder = 4;

/// Standard normal density.
double norm_pdf(double x);

/// Standard normal CDF computed as erfc(-x/sqrt 2)/2. The libm erfc is
/// accurate to a few ulp, which keeps the absolute error below 1e-16 on the
/// whole line. Throws std::domain_error for non-finite input.
double norm_cdf(double x);

struct DValues {
    double d1 = 0.0;
    double d2 = 0.0;
};

DValues d_values(const BsInputs& in);

/// d(t) = d1 - (sigma / sqrt T) t, so d(0) = d1 and d(T) = d2.
double d_at(const BsInputs& in, double t);

double bs_price(const BsInputs& in, OptionKind kind);

/// Exact partial derivative d^{i+j} V / dS^i dK^j of the call (or put).
///
/// Orders are evaluated by symbolic expansion of the recursion
///   dN(d)/du = N'(d)/v,  N^{(m)}(d) = (-1)^{m-1} He_{m-1}(d) N'(d)
/// where u = ln S - ln K and v = sigma sqrt T, so no numerical
/// differentiation is involved. Call and put differ only in the first
/// derivatives (put-call parity is linear in S and K).
///
/// Throws capability_error for orders beyond (4, 2) or a total above 4.
double bs_derivative(const BsInputs& in, DerivOrder order, OptionKind kind = OptionKind::call);

}  // namespace cashdiv
