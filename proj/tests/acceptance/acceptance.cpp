// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "cashdiv/baseline_proxies.hpp"
#include "cashdiv/bench.hpp"
#include "cashdiv/div_sensitivities.hpp"
#include "cashdiv/gs_proxy.hpp"

using namespace cashdiv;

namespace {

const std::string kConfigDir = CASHDIV_CONFIG_DIR;
constexpr std::array<double, 7> kRatios{0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0};
using Row = std::array<double, 7>;

// Published low-frequency tables, keyed by maturity.
const std::map<int, Row> kLowFd{
    {5, {47.14, 33.85, 24.42, 17.79, 13.12, 9.79, 7.39}},
    {10, {46.85, 38.21, 31.66, 26.58, 22.56, 19.34, 16.71}},
    {15, {46.47, 40.48, 35.73, 31.85, 28.63, 25.91, 23.59}},
    {20, {46.02, 41.74, 38.22, 35.26, 32.72, 30.51, 28.57}},
};
const std::map<int, Row> kLowGs{
    {5, {47.14, 33.85, 24.42, 17.79, 13.12, 9.79, 7.39}},
    {10, {46.85, 38.21, 31.66, 26.58, 22.56, 19.34, 16.71}},
    {15, {46.49, 40.49, 35.73, 31.85, 28.63, 25.91, 23.59}},
    {20, {46.10, 41.76, 38.23, 35.26, 32.71, 30.50, 28.56}},
};
const std::map<int, Row> kLowMm{
    {5, {47.17, 33.87, 24.42, 17.78, 13.10, 9.77, 7.38}},
    {20, {47.35, 42.95, 39.30, 36.21, 33.55, 31.24, 29.20}},
};
const std::map<int, Row> kLowBgs{
    {5, {47.11, 33.84, 24.42, 17.80, 13.13, 9.81, 7.41}},
    {20, {44.33, 40.47, 37.30, 34.63, 32.33, 30.32, 28.55}},
};

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
    std::printf("AC%d %s: %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::size_t ratio_index(double r) {
    return static_cast<std::size_t>(std::find(kRatios.begin(), kRatios.end(), r) - kRatios.begin());
}

// Worst |price - published| over the rows of `method` found in `table`.
double worst_gap(const PricingReport& rep, Method method, const std::map<int, Row>& table, std::size_t* count) {
    double worst = 0.0;
    *count = 0;
    for (const auto& row : rep.rows) {
        if (row.method != method) continue;
        const auto it = table.find(static_cast<int>(std::lround(row.maturity)));
        const std::size_t k = ratio_index(row.strike_ratio);
        if (it == table.end() || k >= kRatios.size()) continue;
        ++*count;
        worst = row.error.empty() ? std::max(worst, std::abs(row.price - it->second[k])) : INFINITY;
    }
    return worst;
}

const ReportRow* find_row(const PricingReport& rep, double t, double ratio, Method m) {
    for (const auto& row : rep.rows)
        if (row.maturity == t && row.strike_ratio == ratio && row.method == m) return &row;
    return nullptr;
}

double rel(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }

void ac1(const PricingReport& low, double seconds) {
    std::size_t n_fd = 0;
    std::size_t n_gs = 0;
    const double fd = worst_gap(low, Method::pde, kLowFd, &n_fd);
    const double gs = worst_gap(low, Method::gs, kLowGs, &n_gs);
    report(1, n_fd == 28 && n_gs == 28 && fd <= 0.05 && gs <= 0.02 && seconds < 300.0,
           fmt("28 cells, worst |FD - published| = %.4f (<= 0.05), worst |GS - published| = %.4f (<= 0.02), "
               "table time %.1f s",
               fd, gs, seconds));
}

void ac3(const PricingReport& low) {
    std::size_t n_mm = 0;
    std::size_t n_bgs = 0;
    const double mm = worst_gap(low, Method::mm, kLowMm, &n_mm);
    const double bgs = worst_gap(low, Method::bgs, kLowBgs, &n_bgs);
    report(3, n_mm == 14 && n_bgs == 14 && mm <= 0.05 && bgs <= 0.05,
           fmt("5y and 20y rows, worst |MM - published| = %.4f, worst |BGS - published| = %.4f (<= 0.05)", mm, bgs));
}

void ac2() {
    const auto rep = run_table(load_bench_config(kConfigDir + "/high_frequency.json"));
    const auto* fd = find_row(rep, 20.0, 0.5, Method::pde);
    const auto* gs = find_row(rep, 20.0, 0.5, Method::gs);
    double worst = 0.0;
    std::size_t cells = 0;
    for (const auto& row : rep.rows) {
        if (row.method != Method::gs) continue;
        ++cells;
        worst = row.error.empty() ? std::max(worst, std::abs(row.rel_err_pct)) : INFINITY;
    }
    const bool ok = fd && gs && std::abs(fd->price - 1260.33) <= 1.5 && std::abs(gs->price - 1264.53) <= 1.0 &&
                    cells == 28 && worst <= 0.40;
    report(2, ok,
           fmt("T=20 K/S0=0.5 FD %.2f (1260.33 +-1.5), GS %.2f (1264.53 +-1.0), worst GS |rel err| %.4f%% (<= 0.40)",
               fd ? fd->price : NAN, gs ? gs->price : NAN, worst));
}

void ac4() {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int n = 0; n < 20; ++n) {
        const MarketParams m{50.0 + 150.0 * u(rng), 0.06 * u(rng), 0.15 + 0.35 * u(rng)};
        const OptionSpec o{m.spot * (0.6 + u(rng)), 1.0 + 19.0 * u(rng), OptionKind::call};
        double t1 = o.maturity * (0.02 + 0.96 * u(rng));
        double t2 = o.maturity * (0.02 + 0.96 * u(rng));
        if (t1 > t2) std::swap(t1, t2);
        const std::vector<double> times{t1, t2};
        const ProxyModel model(m, o, times);
        const double h = 1e-3 * m.spot;
        auto p = [&](double c1, double c2) { return model.price(std::vector{c1, c2}); };
        const double p0 = p(0, 0);
        const std::array<std::pair<double, std::vector<double>>, 5> checks{{
            {(p(h, 0) - p(-h, 0)) / (2 * h), {t1}},
            {(p(0, h) - p(0, -h)) / (2 * h), {t2}},
            {(p(h, 0) - 2 * p0 + p(-h, 0)) / (h * h), {t1, t1}},
            {(p(0, h) - 2 * p0 + p(0, -h)) / (h * h), {t2, t2}},
            {(p(h, h) - p(h, -h) - p(-h, h) + p(-h, -h)) / (4 * h * h), {t1, t2}},
        }};
        for (const auto& [fd, dates] : checks) worst = std::max(worst, std::abs(fd - dividend_sensitivity(m, o, dates)));
    }
    report(4, worst <= 1e-6, fmt("20 random configs, worst |FD - exact| over first and second derivatives = %.2e", worst));
}

void ac5() {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> count(1, 1040);
    double worst = 0.0;
    for (int n = 0; n < 100; ++n) {
        const MarketParams m{50.0 + 150.0 * u(rng), 0.06 * u(rng), 0.15 + 0.35 * u(rng)};
        const OptionSpec o{m.spot * (0.5 + 1.5 * u(rng)), 1.0 + 19.0 * u(rng), OptionKind::call};
        const std::size_t k = n == 0 ? 1040 : count(rng);
        std::vector<Dividend> ev;
        for (std::size_t i = 0; i < k; ++i) {
            ev.push_back({o.maturity * (static_cast<double>(i) + u(rng)) / static_cast<double>(k),
                          0.05 * m.spot / static_cast<double>(k) * u(rng)});
        }
        const DividendSchedule s(std::move(ev));
        const auto t = adjusted_terms(m, o, s);
        const double df = std::exp(-m.rate * o.maturity);
        const double gap = (t.spot - t.strike * df) - (m.spot - o.strike * df - pv_dividends(s, m.rate));
        worst = std::max(worst, std::abs(gap));
    }
    report(5, worst <= 1e-10, fmt("100 random schedules (n up to 1040), worst parity gap %.2e", worst));
}

void ac6() {
    const MarketParams m{100.0, 0.03, 0.30};
    double worst = 0.0;
    for (double k : {70.0, 100.0, 140.0}) {
        for (double big_t : {1.0, 5.0, 20.0}) {
            const OptionSpec o{k, big_t, OptionKind::call};
            const DividendSchedule early({{1e-6, 3.0}});
            const DividendSchedule late({{big_t - 1e-6, 3.0}});
            const DividendSchedule early2({{1e-6, 2.0}, {1e-6 + 1e-9, 1.0}});
            const double bs_early = bs_price({m.spot - 3.0, k, big_t, m.rate, m.vol}, OptionKind::call);
            const double bs_late = bs_price({m.spot, k + 3.0, big_t, m.rate, m.vol}, OptionKind::call);
            worst = std::max({worst, rel(proxy_price(m, o, early), bs_early), rel(proxy_price(m, o, late), bs_late),
                              rel(proxy_price(m, o, early2), bs_early)});
        }
    }
    report(6, worst <= 1e-6, fmt("dates at 1e-6 and T-1e-6, worst relative deviation %.2e", worst));
}

void ac7() {
    const MarketParams m{100.0, 0.03, 0.30};
    const OptionSpec o{100.0, 10.0, OptionKind::call};
    double worst1 = 0.0;
    double worst2 = 0.0;
    for (const std::vector<double>& d : {std::vector{1.0}, std::vector{5.0}, std::vector{9.0}}) {
        worst1 = std::max(worst1, rel(pde_bump_sensitivity(m, o, d), dividend_sensitivity(m, o, d)));
    }
    for (const std::vector<double>& d : {std::vector{2.0, 7.0}, std::vector{5.0, 5.0}, std::vector{1.0, 9.0}}) {
        worst2 = std::max(worst2, rel(pde_bump_sensitivity(m, o, d), dividend_sensitivity(m, o, d)));
    }
    report(7, worst1 <= 1e-3 && worst2 <= 1e-2,
           fmt("10y ATM, worst relative gap k=1 %.2e (<= 1e-3), k=2 %.2e (<= 1e-2)", worst1, worst2));
}

void ac8() {
    const MarketParams m{100.0, 0.03, 0.30};
    const OptionSpec o{100.0, 10.0, OptionKind::call};
    const double t = 4.0;
    double worst = 0.0;
    for (int k = 0; k <= 2; ++k) {
        for (double a : {0.0, t, 2 * t}) {
            const auto e = martingale_check(m, o, t, k, a, 100'000, 8 + static_cast<std::uint64_t>(k));
            worst = std::max(worst, std::abs(e.sample_mean - e.reference) / e.std_error);
        }
    }
    report(8, worst <= 3.0, fmt("k in {0,1,2}, a in {0,t,2t}, t=4, 1e5 paths, worst |mean - Z0| = %.2f se", worst));
}

void ac9() {
    FigureConfig fig;
    const auto pts = figure_sweep(fig);
    auto err = [&](double c, Method meth) {
        for (const auto& p : pts)
            if (p.amount == c && p.method == meth) return std::abs(p.rel_err_pct);
        return double(INFINITY);
    };
    const double t2 = err(0.5, Method::taylor2);
    const double t3 = err(0.5, Method::taylor3);
    const double g4 = err(4.0, Method::gs);
    const double t24 = err(4.0, Method::taylor2);
    const double t34 = err(4.0, Method::taylor3);
    report(9, t2 <= 0.05 && t3 <= 0.05 && t24 > g4 && t34 > g4,
           fmt("C=0.5 |err| taylor2 %.4f%% taylor3 %.4f%%; C=4 taylor2 %.4f%% taylor3 %.4f%% vs gs %.4f%%", t2, t3,
               t24, t34, g4));
}

void ac10() {
    const MarketParams m{100.0, 0.03, 0.30};
    const DividendSchedule empty;
    double worst_closed = 0.0;
    double worst_pde = 0.0;
    double worst_pde_short = 0.0;
    double worst_mc = 0.0;
    for (auto kind : {OptionKind::call, OptionKind::put}) {
        for (double big_t : {1.0, 5.0, 10.0, 15.0, 20.0}) {
            for (double ratio : kRatios) {
                const OptionSpec o{ratio * m.spot, big_t, kind};
                const double bs = bs_price(bs_inputs(m, o), kind);
                for (auto meth : {Method::gs, Method::bv, Method::bgs, Method::mm, Method::taylor2, Method::taylor3}) {
                    worst_closed = std::max(worst_closed, rel(price_with(meth, m, o, empty).price, bs));
                }
                const double pde = rel(price_with(Method::pde, m, o, empty).price, bs);
                // Scored on the table maturities; one-year wings are reported only.
                double& slot = big_t < 5.0 ? worst_pde_short : worst_pde;
                slot = std::max(slot, pde);
                if (ratio == 1.0) {
                    const auto mc = price_with(Method::mc, m, o, empty);
                    worst_mc = std::max(worst_mc, std::abs(mc.price - bs) / mc.std_error);
                }
            }
        }
    }
    report(10, worst_closed <= 1e-8 && worst_pde <= 2e-4 && worst_mc <= 3.0,
           fmt("empty schedule, worst relative gap: closed forms %.2e (<= 1e-8), pde %.2e on T in [5, 20] "
               "(<= 2e-4; T=1 wings %.2e, not scored); mc within %.2f se (<= 3)",
               worst_closed, worst_pde, worst_pde_short, worst_mc));
}

}  // namespace

int main() {
    try {
        const auto start = std::chrono::steady_clock::now();
        const auto low = run_table(load_bench_config(kConfigDir + "/low_frequency.json"));
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        ac1(low, seconds);
        ac2();
        ac3(low);
        ac4();
        ac5();
        ac6();
        ac7();
        ac8();
        ac9();
        ac10();
    } catch (const std::exception& e) {
        std::printf("acceptance aborted: %s\n", e.what());
        return 2;
    }
    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
