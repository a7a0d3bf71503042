#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "cashdiv/bs_analytics.hpp"

namespace cashdiv {

/// Flat-parameter market: spot, continuously compounded rate, volatility.
struct MarketParams {
    double spot = 0.0;
    double rate = 0.0;
    double vol = 0.0;

    void validate() const;
};

struct OptionSpec {
    double strike = 0.0;
    double maturity = 0.0;
    OptionKind kind = OptionKind::call;

    void validate() const;
};

/// One ex-date and its cash amount.
struct Dividend {
    double time = 0.0;
    double amount = 0.0;

    friend bool operator==(const Dividend&, const Dividend&) = default;
};

/// Ordered cash dividends: 0 < T_1 < ... < T_n, C_i >= 0. Equal dates are
/// rejected; callers merge them first. Immutable once constructed.
class DividendSchedule {
public:
    DividendSchedule() = default;
    explicit DividendSchedule(std::vector<Dividend> events);

    /// Dates start, start + every, ... strictly below `horizon`.
    static DividendSchedule regular(double start, double every, double amount, double horizon);

    /// CSV with header `time_years,amount`.
    static DividendSchedule read_csv(std::istream& in);
    static DividendSchedule load_csv(const std::filesystem::path& path);
    void write_csv(std::ostream& out) const;

    std::span<const Dividend> events() const { return events_; }
    std::size_t size() const { return events_.size(); }
    bool empty() const { return events_.empty(); }
    const Dividend& operator[](std::size_t i) const { return events_[i]; }

    std::vector<double> times() const;
    std::vector<double> amounts() const;
    double total_amount() const;

    friend bool operator==(const DividendSchedule&, const DividendSchedule&) = default;

private:
    std::vector<Dividend> events_;
};

/// Liquidator policy: the stock drops by the cash amount, or is absorbed at
/// zero when it cannot pay in full (pre <= cash).
constexpr double apply_dividend(double pre_div_spot, double cash) {
    return pre_div_spot > cash ? pre_div_spot - cash : 0.0;
}

/// Events strictly before `horizon`, order preserved.
DividendSchedule schedule_within(const DividendSchedule& schedule, double horizon);

/// sum C_i exp(-r T_i).
double pv_dividends(const DividendSchedule& schedule, double rate);
double pv_dividends(std::span<const Dividend> events, double rate);

/// Validates market and option and that every ex-date lies in (0, maturity).
void validate_inputs(const MarketParams& market, const OptionSpec& option, const DividendSchedule& schedule);

/// Checks times only: strictly increasing inside (0, maturity). Amounts may
/// have any sign (used for bumped perturbation schedules).
void validate_event_times(std::span<const Dividend> events, double maturity);

BsInputs bs_inputs(const MarketParams& market, const OptionSpec& option);

}  // namespace cashdiv
