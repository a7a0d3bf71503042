#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cashdiv/baseline_proxies.hpp"
#include "cashdiv/errors.hpp"
#include "cashdiv/monte_carlo.hpp"
#include "test_support.hpp"

using namespace cashdiv;

namespace {

const MarketParams kMarket{100.0, 0.03, 0.30};

double published(double t, double ratio, const DividendSchedule& s, double (*pricer)(const MarketParams&,
                                                                                        const OptionSpec&,
                                                                                        const DividendSchedule&)) {
    return pricer(kMarket, {ratio * kMarket.spot, t, OptionKind::call}, schedule_within(s, t));
}

double bgs(const MarketParams& m, const OptionSpec& o, const DividendSchedule& s) { return bgs_price(m, o, s); }

}  // namespace

TEST_CASE("terminal moments against the two-dividend closed form") {
    // S_T = S0 X_{0,T} - C1 X_{T1,T} - C2 X_{T2,T}; E[X_{a,b} X_{c,b}] factorises over
    // disjoint intervals with E[X^2] = e^{(2r + sigma^2) dt}.
    const double r = kMarket.rate;
    const double s2 = kMarket.vol * kMarket.vol;
    const double big_t = 4.0;
    const double t1 = 1.0;
    const double t2 = 2.5;
    const double c1 = 5.0;
    const double c2 = 7.0;
    const DividendSchedule s({{t1, c1}, {t2, c2}});
    auto e1 = [&](double dt) { return std::exp(r * dt); };
    auto e2 = [&](double dt) { return std::exp((2 * r + s2) * dt); };
    const double m1 = kMarket.spot * e1(big_t) - c1 * e1(big_t - t1) - c2 * e1(big_t - t2);
    const double m2 = kMarket.spot * kMarket.spot * e2(big_t) + c1 * c1 * e2(big_t - t1) + c2 * c2 * e2(big_t - t2) -
                      2 * kMarket.spot * c1 * e1(t1) * e2(big_t - t1) - 2 * kMarket.spot * c2 * e1(t2) * e2(big_t - t2) +
                      2 * c1 * c2 * e1(t2 - t1) * e2(big_t - t2);
    const auto mo = terminal_moments(kMarket, s, big_t);
    CHECK(mo.m1 == doctest::Approx(m1).epsilon(1e-14));
    CHECK(mo.m2 == doctest::Approx(m2).epsilon(1e-13));
}

TEST_CASE("terminal moments against simulation") {
    const DividendSchedule s = DividendSchedule::regular(0.5, 1.0, 3.0, 5.0);
    const auto mo = terminal_moments(kMarket, s, 5.0);
    McConfig mc{400'000, 11, false};
    for (int m = 1; m <= 3; ++m) {
        const auto est = mc_expectation(kMarket, s.events(), 5.0, mc, [m](double x) { return std::pow(x, m); }, false);
        const double exact = m == 1 ? mo.m1 : m == 2 ? mo.m2 : mo.m3;
        CAPTURE(m);
        CHECK(std::abs(est.mean - exact) <= 4.0 * est.std_error);
    }
}

TEST_CASE("shifted-lognormal fit against Cardano") {
    const DividendSchedule s = DividendSchedule::regular(0.5, 1.0, 3.0, 20.0);
    const auto mo = terminal_moments(kMarket, s, 20.0);
    const auto p = fit_shifted_lognormal(mo, 20.0);

    const double var = mo.m2 - mo.m1 * mo.m1;
    const double skew = (mo.m3 - 3 * mo.m1 * mo.m2 + 2 * mo.m1 * mo.m1 * mo.m1) / std::pow(var, 1.5);
    // w = sqrt(v - 1) solves w^3 + 3 w - skew = 0.
    const double root = std::sqrt(skew * skew / 4 + 1.0);
    const double w = std::cbrt(skew / 2 + root) + std::cbrt(skew / 2 - root);
    const double v = 1.0 + w * w;
    CHECK(p.vol == doctest::Approx(std::sqrt(std::log(v) / 20.0)).epsilon(1e-10));
    CHECK(p.scale == doctest::Approx(std::sqrt(var / (v - 1.0))).epsilon(1e-10));

    const auto back = shifted_lognormal_moments(p, 20.0);
    CHECK(back.m1 == doctest::Approx(mo.m1).epsilon(1e-12));
    CHECK(back.m2 == doctest::Approx(mo.m2).epsilon(1e-10));
    CHECK(back.m3 == doctest::Approx(mo.m3).epsilon(1e-9));
}

TEST_CASE("fit failures") {
    CHECK_THROWS_AS(fit_shifted_lognormal({100.0, 10000.0, 1e6}, 1.0), fit_error);       // zero variance
    CHECK_THROWS_AS(fit_shifted_lognormal({0.0, 1.0, -1.0}, 1.0), fit_error);            // negative skew
    CHECK_THROWS_AS(fit_shifted_lognormal({0.0, 1.0, 1e-13}, 1.0), fit_error);           // Gaussian limit
    CHECK_THROWS_AS(fit_shifted_lognormal({1.0, 2.0, 5.0}, 0.0), std::domain_error);
}

TEST_CASE("published method-of-moments and BGS values") {
    const auto s = DividendSchedule::regular(0.5, 1.0, 3.0, 20.0);
    CHECK(std::abs(published(20, 0.5, s, moment_match_price) - 47.35) <= 0.05);
    CHECK(std::abs(published(20, 0.5, s, bgs) - 44.33) <= 0.05);
    CHECK(std::abs(published(5, 1.0, s, moment_match_price) - 24.42) <= 0.05);
    CHECK(std::abs(published(5, 2.0, s, bgs) - 7.41) <= 0.05);
}

TEST_CASE("fit round trip with a positive shift") {
    const ShiftedLognormalParams p{20.0, 80.0, 0.25};
    const auto q = fit_shifted_lognormal(shifted_lognormal_moments(p, 3.0), 3.0);
    CHECK(q.shift == doctest::Approx(p.shift).epsilon(1e-9));
    CHECK(q.scale == doctest::Approx(p.scale).epsilon(1e-10));
    CHECK(q.vol == doctest::Approx(p.vol).epsilon(1e-10));
}

TEST_CASE("Bos-Vandermark terms") {
    const OptionSpec o{100.0, 5.0, OptionKind::call};
    const DividendSchedule s({{1.0, 2.0}, {4.0, 3.0}});
    const auto t = bv_adjusted_terms(kMarket, o, s);
    const double r = kMarket.rate;
    CHECK(t.spot == doctest::Approx(100.0 - 0.8 * 2.0 * std::exp(-r) - 0.2 * 3.0 * std::exp(-4 * r)).epsilon(1e-15));
    CHECK(t.strike == doctest::Approx(100.0 + 0.2 * 2.0 * std::exp(4 * r) + 0.8 * 3.0 * std::exp(r)).epsilon(1e-15));
    CHECK_THROWS_AS(bv_price(kMarket, o, DividendSchedule({{0.1, 200.0}})), adjustment_overflow);
}

TEST_CASE("BGS double sum against the suffix-sum form") {
    const OptionSpec o{120.0, 15.0, OptionKind::call};
    const auto s = DividendSchedule::regular(0.3, 0.7, 1.5, 15.0);
    const auto terms = bgs_terms(kMarket, o, s, Execution::serial);

    // sum_{i,j} D_i D_j f(min(T_i, T_j)) = sum_i D_i f(T_i) (D_i + 2 sum_{j>i} D_j)
    const auto ev = s.events();
    const double sigma = kMarket.vol;
    const double sq = std::sqrt(o.maturity);
    std::vector<double> d(ev.size());
    double spot = kMarket.spot;
    for (std::size_t i = 0; i < ev.size(); ++i) {
        d[i] = ev[i].amount * std::exp(-kMarket.rate * ev[i].time);
        spot -= d[i];
    }
    const double a = (std::log(spot / o.strike) + (kMarket.rate + 0.5 * sigma * sigma) * o.maturity) / (sigma * sq);
    const double b = a + 0.5 * sigma * sq;
    double first = 0.0;
    double second = 0.0;
    double suffix = 0.0;
    for (std::size_t i = ev.size(); i-- > 0;) {
        first += d[i] * (norm_cdf(a) - norm_cdf(a - sigma * ev[i].time / sq));
        second += d[i] * (norm_cdf(b) - norm_cdf(b - 2 * sigma * ev[i].time / sq)) * (d[i] + 2 * suffix);
        suffix += d[i];
    }
    const double var = sigma * sigma + sigma * std::sqrt(std::numbers::pi / (2 * o.maturity)) *
                                           (4 * std::exp(a * a / 2) / spot * first +
                                            std::exp(b * b / 2) / (spot * spot) * second);
    CHECK(terms.adjusted_spot == doctest::Approx(spot).epsilon(1e-15));
    CHECK(terms.adjusted_vol == doctest::Approx(std::sqrt(var)).epsilon(1e-12));
    CHECK(terms.a == doctest::Approx(a).epsilon(1e-14));
    CHECK(terms.b == doctest::Approx(b).epsilon(1e-14));
}

TEST_CASE("BGS serial and parallel agree bit for bit") {
    set_threads(4);
    const MarketParams m{3000.0, 0.03, 0.30};
    const OptionSpec o{1500.0, 20.0, OptionKind::call};
    const auto s = DividendSchedule::regular(0.001, 7.0 / 365.0, 2.0, 20.0);
    const auto a = bgs_terms(m, o, s, Execution::serial);
    const auto b = bgs_terms(m, o, s, Execution::parallel);
    CHECK(a.adjusted_vol == b.adjusted_vol);
    CHECK(bgs_price(m, o, s, Execution::serial) == bgs_price(m, o, s, Execution::parallel));
}

TEST_CASE("empty schedule reduces to Black-Scholes") {
    for (auto kind : {OptionKind::call, OptionKind::put}) {
        const OptionSpec o{90.0, 7.0, kind};
        const double bs = bs_price(bs_inputs(kMarket, o), kind);
        CHECK(test::rel_diff(bv_price(kMarket, o, {}), bs) <= 1e-8);
        CHECK(test::rel_diff(bgs_price(kMarket, o, {}), bs) <= 1e-8);
        CHECK(test::rel_diff(moment_match_price(kMarket, o, {}), bs) <= 1e-8);
    }
}

TEST_CASE("method of moments put-call parity") {
    const auto s = DividendSchedule::regular(0.5, 1.0, 3.0, 10.0);
    const OptionSpec call{110.0, 10.0, OptionKind::call};
    const OptionSpec put{110.0, 10.0, OptionKind::put};
    const auto mo = terminal_moments(kMarket, s, 10.0);
    const double lhs = moment_match_price(kMarket, call, s) - moment_match_price(kMarket, put, s);
    CHECK(lhs == doctest::Approx(std::exp(-kMarket.rate * 10.0) * (mo.m1 - 110.0)).epsilon(1e-12));
}
