#include "cashdiv/pde_solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "cashdiv/interpolation.hpp"

namespace cashdiv {

namespace {

constexpr double kWarnDx = 0.04;

class LogGrid {
public:
    LogGrid(const MarketParams& m, const OptionSpec& o, std::span<const Dividend> events, const GridConfig& g) {
        const double spread = g.space_width * m.vol * std::sqrt(o.maturity);
        double pv = 0.0;
        for (const auto& e : events) pv += std::max(e.amount, 0.0) * std::exp(-m.rate * e.time);
        const double anchor = std::max(m.spot - pv, 1e-3 * m.spot);
        const double x_spot = std::log(m.spot);
        const double lo = std::log(anchor) - spread;
        const double hi = x_spot + spread;
        const auto n = static_cast<std::size_t>(g.space_nodes);
        dx = (hi - lo) / static_cast<double>(n - 1);
        spot_index = static_cast<std::size_t>(std::lround((x_spot - lo) / dx));
        x0 = x_spot - static_cast<double>(spot_index) * dx;
        x.resize(n);
        s.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = x0 + static_cast<double>(i) * dx;
            s[i] = std::exp(x[i]);
        }
        s[spot_index] = m.spot;
    }

    double x0 = 0.0;
    double dx = 0.0;
    std::size_t spot_index = 0;
    std::vector<double> x;
    std::vector<double> s;
};

class BackwardSolver {
public:
    BackwardSolver(const MarketParams& m, const OptionSpec& o, std::span<const Dividend> events, const GridConfig& g)
        : m_(m), o_(o), events_(events), g_(g), grid_(m, o, events, g) {}

    // Invoked after each jump with (event index, V at T_i+, V at T_i-).
    using JumpHook = std::function<bool(std::size_t, const std::vector<double>&, const std::vector<double>&)>;

    PdeResult run(const JumpHook& hook = {}) {
        const std::size_t n = grid_.s.size();
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = payoff(grid_.s[i]);
        smooth_kink(v);

        std::size_t steps = 0;
        double t_hi = o_.maturity;
        for (std::size_t k = events_.size(); k-- > 0;) {
            const auto& e = events_[k];
            steps += integrate(v, t_hi, e.time, k + 1);
            std::vector<double> before = jump(v, e, k + 1);
            if (hook && !hook(k, v, before)) return {};
            v = std::move(before);
            t_hi = e.time;
        }
        steps += integrate(v, t_hi, 0.0, 0);

        PdeResult r;
        r.price = v[grid_.spot_index];
        r.dx = grid_.dx;
        r.time_steps = steps;
        r.accuracy_warning = grid_.dx > kWarnDx;
        return r;
    }

    const LogGrid& grid() const { return grid_; }

private:
    double payoff(double s) const {
        return o_.kind == OptionKind::call ? std::max(s - o_.strike, 0.0) : std::max(o_.strike - s, 0.0);
    }

    // The node whose cell holds the strike gets the cell average of the
    // payoff, which restores second-order convergence at the kink.
    void smooth_kink(std::vector<double>& v) const {
        const double xk = std::log(o_.strike);
        const double h = grid_.dx;
        const double pos = (xk - grid_.x0) / h;
        if (pos < 0.5 || pos > static_cast<double>(v.size()) - 1.5) return;
        const auto i = static_cast<std::size_t>(std::lround(pos));
        const double a = grid_.x[i] - 0.5 * h;
        const double b = grid_.x[i] + 0.5 * h;
        const double k = o_.strike;
        const double integral = o_.kind == OptionKind::call ? std::exp(b) - k - k * (b - xk)
                                                             : k * (xk - a) - (k - std::exp(a));
        v[i] = integral / h;
    }

    // PV at calendar time t of dividends with index >= first.
    double remaining_pv(double t, std::size_t first) const {
        double pv = 0.0;
        for (std::size_t k = first; k < events_.size(); ++k) {
            pv += events_[k].amount * std::exp(-m_.rate * (events_[k].time - t));
        }
        return pv;
    }

    double lower_value(double t, double s, std::size_t first) const {
        const double df_k = o_.strike * std::exp(-m_.rate * (o_.maturity - t));
        if (o_.kind == OptionKind::call) return 0.0;
        return std::max(df_k - std::max(s - remaining_pv(t, first), 0.0), 0.0);
    }

    double upper_value(double t, double s, std::size_t first) const {
        const double df_k = o_.strike * std::exp(-m_.rate * (o_.maturity - t));
        if (o_.kind == OptionKind::put) return 0.0;
        return std::max(s - remaining_pv(t, first) - df_k, 0.0);
    }

    double absorbed_value(double t) const {
        return o_.kind == OptionKind::call ? 0.0 : o_.strike * std::exp(-m_.rate * (o_.maturity - t));
    }

    // Integrates backward from calendar t_hi to t_lo. Dividends with index
    // >= first are still to be paid after t_lo.
    std::size_t integrate(std::vector<double>& v, double t_hi, double t_lo, std::size_t first) {
        const double len = t_hi - t_lo;
        if (len <= 0.0) return 0;
        const int r_steps = g_.rannacher_steps;
        auto m = static_cast<std::size_t>(std::ceil(len * g_.steps_per_year - 1e-9));
        m = std::max<std::size_t>({m, 1, static_cast<std::size_t>((r_steps + 1) / 2)});
        const double dt = len / static_cast<double>(m);

        std::vector<std::pair<double, double>> plan;  // (step, theta)
        for (int i = 0; i < r_steps; ++i) plan.emplace_back(0.5 * dt, 1.0);
        std::size_t full = m - static_cast<std::size_t>(r_steps / 2);
        if (r_steps % 2 != 0) {
            --full;
            plan.emplace_back(0.5 * dt, 0.5);
        }
        for (std::size_t i = 0; i < full; ++i) plan.emplace_back(dt, 0.5);

        double t = t_hi;
        for (const auto& [step, theta] : plan) {
            const double t_new = std::max(t - step, t_lo);
            theta_step(v, t_new, t - t_new, theta, first);
            t = t_new;
        }
        return plan.size();
    }

    void theta_step(std::vector<double>& v, double t_new, double dt, double theta, std::size_t first) {
        const std::size_t n = v.size();
        const double dx = grid_.dx;
        const double sig2 = m_.vol * m_.vol;
        const double alpha = 0.5 * sig2 / (dx * dx);
        const double beta = (m_.rate - 0.5 * sig2) / (2.0 * dx);
        const double lo = alpha - beta;
        const double mid = -2.0 * alpha - m_.rate;
        const double up = alpha + beta;

        const std::size_t k = n - 2;
        lower_.assign(k, -theta * dt * lo);
        diag_.assign(k, 1.0 - theta * dt * mid);
        upper_.assign(k, -theta * dt * up);
        rhs_.resize(k);
        const double ex = (1.0 - theta) * dt;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            rhs_[i - 1] = v[i] + ex * (lo * v[i - 1] + mid * v[i] + up * v[i + 1]);
        }
        const double b_lo = lower_value(t_new, grid_.s.front(), first);
        const double b_hi = upper_value(t_new, grid_.s.back(), first);
        rhs_.front() += theta * dt * lo * b_lo;
        rhs_.back() += theta * dt * up * b_hi;
        solve_tridiagonal(lower_, diag_, upper_, rhs_);
        v.front() = b_lo;
        v.back() = b_hi;
        std::copy(rhs_.begin(), rhs_.end(), v.begin() + 1);
    }

    // V(s, T_i-) = V(apply_dividend(s, C), T_i+). `first` indexes the
    // dividends strictly after this one.
    std::vector<double> jump(const std::vector<double>& after, const Dividend& e, std::size_t first) const {
        const MonotoneCubic interp(grid_.x0, grid_.dx, after);
        const double s_lo = grid_.s.front();
        const double s_hi = grid_.s.back();
        const double absorbed = absorbed_value(e.time);
        std::vector<double> before(after.size());
        for (std::size_t j = 0; j < after.size(); ++j) {
            const double s = grid_.s[j] - e.amount;
            if (s <= 0.0) {
                before[j] = absorbed;
            } else if (s < s_lo) {
                before[j] = absorbed + (after.front() - absorbed) * (s / s_lo);
            } else if (s > s_hi) {
                before[j] = upper_value(e.time, s, first);
            } else {
                before[j] = interp(std::log(s));
            }
        }
        return before;
    }

    const MarketParams& m_;
    const OptionSpec& o_;
    std::span<const Dividend> events_;
    const GridConfig& g_;
    LogGrid grid_;
    std::vector<double> lower_, diag_, upper_, rhs_;
};

}  // namespace

void GridConfig::validate() const {
    if (space_nodes < 200) throw std::domain_error("space_nodes must be >= 200");
    if (steps_per_year < 100) throw std::domain_error("steps_per_year must be >= 100");
    if (!(space_width >= 6.0)) throw std::domain_error("space_width must be >= 6");
    if (rannacher_steps < 2) throw std::domain_error("rannacher_steps must be >= 2");
}

PdeResult pde_solve(const MarketParams& market, const OptionSpec& option, std::span<const Dividend> events,
                    const GridConfig& grid) {
    market.validate();
    option.validate();
    grid.validate();
    validate_event_times(events, option.maturity);
    return BackwardSolver(market, option, events, grid).run();
}

double pde_price(const MarketParams& market, const OptionSpec& option, const DividendSchedule& schedule,
                 const GridConfig& grid) {
    validate_inputs(market, option, schedule);
    return pde_solve(market, option, schedule.events(), grid).price;
}

double continuity_check(const MarketParams& market, const OptionSpec& option, const DividendSchedule& schedule,
                        const GridConfig& grid, std::size_t index) {
    validate_inputs(market, option, schedule);
    grid.validate();
    if (index >= schedule.size()) throw std::out_of_range("continuity_check: no dividend at that index");

    BackwardSolver solver(market, option, schedule.events(), grid);
    const auto& g = solver.grid();
    const double cash = schedule[index].amount;
    double gap = 0.0;
    solver.run([&](std::size_t k, const std::vector<double>& after, const std::vector<double>& before) {
        if (k != index) return true;
        // The spline's natural end conditions are wrong for the exponential
        // asymptote, so stay one standard deviation clear of both edges.
        const NaturalSpline spline(g.x0, g.dx, after);
        const double margin = market.vol * std::sqrt(option.maturity);
        const double lo = g.x.front() + margin;
        const double hi = g.x.back() - margin;
        for (std::size_t j = 1; j + 1 < g.s.size(); ++j) {
            const double s = g.s[j] - cash;
            if (!(s > 0.0) || g.x[j] > hi || std::log(s) < lo) continue;
            gap = std::max(gap, std::abs(before[j] - spline(std::log(s))));
        }
        return false;
    });
    return gap;
}

}  // namespace cashdiv
