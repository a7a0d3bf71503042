#include "cashdiv/bs_analytics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "cashdiv/errors.hpp"

namespace cashdiv {

std::string_view to_string(OptionKind kind) {
    return kind == OptionKind::call ? "call" : "put";
}

OptionKind parse_option_kind(std::string_view text) {
    if (text == "call") return OptionKind::call;
    if (text == "put") return OptionKind::put;
    throw std::invalid_argument("option kind must be 'call' or 'put', got '" + std::string(text) + "'");
}

void BsInputs::validate() const {
    if (!(spot > 0.0) || !std::isfinite(spot)) throw std::domain_error("spot must be positive and finite");
    if (!(strike > 0.0) || !std::isfinite(strike)) throw std::domain_error("strike must be positive and finite");
    if (!(tenor > 0.0) || !std::isfinite(tenor)) throw std::domain_error("tenor must be positive and finite");
    if (!(vol > 0.0) || !std::isfinite(vol)) throw std::domain_error("vol must be positive and finite");
    if (!std::isfinite(rate)) throw std::domain_error("rate must be finite");
}

double norm_pdf(double x) {
    constexpr double inv_sqrt_2pi = 0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2;
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

double norm_cdf(double x) {
    if (!std::isfinite(x)) throw std::domain_error("norm_cdf: non-finite argument");
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

DValues d_values(const BsInputs& in) {
    in.validate();
    const double v = in.vol * std::sqrt(in.tenor);
    const double d1 = (std::log(in.spot / in.strike) + (in.rate + 0.5 * in.vol * in.vol) * in.tenor) / v;
    return {d1, d1 - v};
}

double d_at(const BsInputs& in, double t) {
    return d_values(in).d1 - in.vol / std::sqrt(in.tenor) * t;
}

double bs_price(const BsInputs& in, OptionKind kind) {
    const auto [d1, d2] = d_values(in);
    const double df = std::exp(-in.rate * in.tenor);
    if (kind == OptionKind::call) {
        return in.spot * norm_cdf(d1) - in.strike * df * norm_cdf(d2);
    }
    return in.strike * df * norm_cdf(-d2) - in.spot * norm_cdf(-d1);
}

namespace {

// coef * S^s_pow * K^k_pow * g^{(m)}(u), with g(u) = N(d(u)) and
// d(u) = (u + c) / v linear in u = ln S - ln K.
struct Term {
    double coef;
    int s_pow;
    int k_pow;
    int m;
};

std::vector<Term> diff_spot(const std::vector<Term>& terms) {
    std::vector<Term> out;
    out.reserve(2 * terms.size());
    for (const auto& t : terms) {
        if (t.s_pow != 0) out.push_back({t.coef * t.s_pow, t.s_pow - 1, t.k_pow, t.m});
        out.push_back({t.coef, t.s_pow - 1, t.k_pow, t.m + 1});
    }
    return out;
}

std::vector<Term> diff_strike(const std::vector<Term>& terms) {
    std::vector<Term> out;
    out.reserve(2 * terms.size());
    for (const auto& t : terms) {
        if (t.k_pow != 0) out.push_back({t.coef * t.k_pow, t.s_pow, t.k_pow - 1, t.m});
        out.push_back({-t.coef, t.s_pow, t.k_pow - 1, t.m + 1});
    }
    return out;
}

// Probabilists' Hermite polynomial He_n.
double hermite(int n, double x) {
    if (n == 0) return 1.0;
    double prev = 1.0;
    double cur = x;
    for (int k = 1; k < n; ++k) {
        const double next = x * cur - k * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

// m-th derivative of the standard normal CDF.
double norm_cdf_derivative(int m, double d) {
    if (m == 0) return norm_cdf(d);
    const double sign = (m - 1) % 2 == 0 ? 1.0 : -1.0;
    return sign * hermite(m - 1, d) * norm_pdf(d);
}

double evaluate(const std::vector<Term>& terms, const BsInputs& in, double d, double v) {
    double sum = 0.0;
    for (const auto& t : terms) {
        sum += t.coef * std::pow(in.spot, t.s_pow) * std::pow(in.strike, t.k_pow) *
               norm_cdf_derivative(t.m, d) / std::pow(v, t.m);
    }
    return sum;
}

}  // namespace

double bs_derivative(const BsInputs& in, DerivOrder order, OptionKind kind) {
    const int i = order.spot_order;
    const int j = order.strike_order;
    if (i < 0 || j < 0 || i > kMaxSpotOrder || j > kMaxStrikeOrder || i + j > kMaxTotalOrder) {
        throw capability_error("bs_derivative: unsupported order (" + std::to_string(i) + ", " +
                               std::to_string(j) + ")");
    }
    in.validate();
    if (i == 0 && j == 0) return bs_price(in, kind);

    const auto [d1, d2] = d_values(in);
    const double v = in.vol * std::sqrt(in.tenor);
    const double df = std::exp(-in.rate * in.tenor);

    double value = 0.0;
    if (j == 0) {
        // dC/dS = N(d1)
        std::vector<Term> terms{{1.0, 0, 0, 0}};
        for (int k = 1; k < i; ++k) terms = diff_spot(terms);
        value = evaluate(terms, in, d1, v);
    } else {
        // dC/dK = -e^{-rT} N(d2)
        std::vector<Term> terms{{-df, 0, 0, 0}};
        for (int k = 0; k < i; ++k) terms = diff_spot(terms);
        for (int k = 1; k < j; ++k) terms = diff_strike(terms);
        value = evaluate(terms, in, d2, v);
    }

    if (kind == OptionKind::put) {
        // P = C - S + K e^{-rT}
        if (i == 1 && j == 0) value -= 1.0;
        if (i == 0 && j == 1) value += df;
    }
    return value;
}

}  // namespace cashdiv
