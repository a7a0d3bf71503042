#pragma once

// Monte Carlo oracle for the piecewise-lognormal model. Paths are sampled
// with exact lognormal factors between ex-dates; the liquidator policy is
// applied at each ex-date.

#include <cstdint>
#include <functional>
#include <span>

#include "cashdiv/market_model.hpp"
#include "cashdiv/parallel.hpp"

namespace cashdiv {

struct McConfig {
    std::size_t n_paths = 1'000'000;  // at least 10^4
    std::uint64_t seed = 42;
    bool antithetic = true;

    void validate() const;
};

/// Counter-based normal stream: the k-th draw of path p depends only on
/// (seed, p, k), so results do not depend on how paths are split across
/// threads. SplitMix64 increments with Box-Muller pairs.
class PathRng {
public:
    PathRng(std::uint64_t seed, std::uint64_t path);

    std::uint64_t next_u64();
    /// Uniform in the open interval (0, 1).
    double uniform();
    double normal();

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;  // independent samples (pairs when antithetic)
};

/// E[f(S_horizon)] by simulation. `events` with time >= horizon are ignored.
/// With `absorb == false` dividends are paid in full even when the stock
/// cannot cover them (the process may go negative); used for moment checks.
///
/// Paths are grouped in fixed-size blocks whose partial sums are combined in
/// block order, so the serial and parallel variants agree bit for bit.
McEstimate mc_expectation(const MarketParams& market, std::span<const Dividend> events, double horizon,
                          const McConfig& mc, const std::function<double(double)>& f, bool absorb = true,
                          Execution exec = Execution::parallel);

struct McPrice {
    double price = 0.0;
    double std_error = 0.0;
};

McPrice mc_price(const MarketParams& market, const OptionSpec& option, const DividendSchedule& schedule,
                 const McConfig& mc, Execution exec = Execution::parallel);

}  // namespace cashdiv
