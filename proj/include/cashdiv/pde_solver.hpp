#pragma once

// Finite-difference oracle: Crank-Nicolson in log-spot between ex-dates,
// liquidator jump condition at each ex-date, Rannacher restarts after the
// payoff and after every jump.

#include <cstddef>
#include <span>

#include "cashdiv/market_model.hpp"

namespace cashdiv {

struct GridConfig {
    int space_nodes = 800;
    int steps_per_year = 200;
    double space_width = 7.0;  // half-width of the log-spot grid in units of sigma sqrt(T)
    int rannacher_steps = 4;   // implicit half-steps taken after each kink

    void validate() const;
};

struct PdeResult {
    double price = 0.0;
    bool accuracy_warning = false;  // grid spacing above the calibrated range
    double dx = 0.0;
    std::size_t time_steps = 0;
};

/// Solves with arbitrary-sign amounts (bumped schedules for sensitivity
/// checks). Dates must be strictly increasing inside (0, maturity).
PdeResult pde_solve(const MarketParams& market, const OptionSpec& option, std::span<const Dividend> events,
                    const GridConfig& grid = {});

double pde_price(const MarketParams& market, const OptionSpec& option, const DividendSchedule& schedule,
                 const GridConfig& grid = {});

/// Runs the backward solve down to ex-date `index` and compares the
/// jump-mapped grid V(s, T_i-) with the post-dividend solution evaluated at
/// s - C_i through an independent natural spline. Returns the maximum
/// absolute mismatch over interior nodes: both s and s - C_i at least one
/// sigma sqrt(T) inside the grid edges.
double continuity_check(const MarketParams& market, const OptionSpec& option, const DividendSchedule& schedule,
                        const GridConfig& grid, std::size_t index);

}  // namespace cashdiv
