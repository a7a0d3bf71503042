#include "cashdiv/market_model.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace cashdiv {

void MarketParams::validate() const {
    if (!(spot > 0.0) || !std::isfinite(spot)) throw std::domain_error("spot must be positive and finite");
    if (!(vol > 0.0) || !std::isfinite(vol)) throw std::domain_error("vol must be positive and finite");
    if (!std::isfinite(rate)) throw std::domain_error("rate must be finite");
}

void OptionSpec::validate() const {
    if (!(strike > 0.0) || !std::isfinite(strike)) throw std::domain_error("strike must be positive and finite");
    if (!(maturity > 0.0) || !std::isfinite(maturity)) {
        throw std::domain_error("maturity must be positive and finite");
    }
}

DividendSchedule::DividendSchedule(std::vector<Dividend> events) : events_(std::move(events)) {
    for (std::size_t i = 0; i < events_.size(); ++i) {
        const auto& e = events_[i];
        if (!std::isfinite(e.time) || !(e.time > 0.0)) {
            throw std::domain_error("dividend " + std::to_string(i) + ": time must be positive");
        }
        if (!std::isfinite(e.amount) || e.amount < 0.0) {
            throw std::domain_error("dividend " + std::to_string(i) + ": amount must be non-negative");
        }
        if (i > 0 && !(e.time > events_[i - 1].time)) {
            throw std::domain_error("dividend " + std::to_string(i) +
                                    ": dates must be strictly increasing (merge equal dates first)");
        }
    }
}

DividendSchedule DividendSchedule::regular(double start, double every, double amount, double horizon) {
    if (!(every > 0.0)) throw std::domain_error("dividend spacing must be positive");
    if (!(start > 0.0)) throw std::domain_error("first dividend date must be positive");
    std::vector<Dividend> events;
    // Dates as start + k*every rather than accumulated, so long schedules do
    // not drift.
    for (std::size_t k = 0;; ++k) {
        const double t = start + static_cast<double>(k) * every;
        if (!(t < horizon)) break;
        events.push_back({t, amount});
    }
    return DividendSchedule(std::move(events));
}

DividendSchedule DividendSchedule::read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::domain_error("dividend CSV: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (line != "time_years,amount") {
        throw std::domain_error("dividend CSV: expected header 'time_years,amount', got '" + line + "'");
    }
    std::vector<Dividend> events;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw std::domain_error("dividend CSV line " + std::to_string(line_no) + ": expected two fields");
        }
        std::istringstream ts(line.substr(0, comma));
        std::istringstream as(line.substr(comma + 1));
        ts.imbue(std::locale::classic());
        as.imbue(std::locale::classic());
        Dividend d;
        if (!(ts >> d.time) || !(as >> d.amount) || !(ts >> std::ws).eof() || !(as >> std::ws).eof()) {
            throw std::domain_error("dividend CSV line " + std::to_string(line_no) + ": malformed number");
        }
        events.push_back(d);
    }
    return DividendSchedule(std::move(events));
}

DividendSchedule DividendSchedule::load_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::domain_error("cannot open dividend CSV '" + path.string() + "'");
    return read_csv(in);
}

void DividendSchedule::write_csv(std::ostream& out) const {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << "time_years,amount\n" << std::setprecision(17);
    for (const auto& e : events_) os << e.time << ',' << e.amount << '\n';
    out << os.str();
}

std::vector<double> DividendSchedule::times() const {
    std::vector<double> t;
    t.reserve(events_.size());
    for (const auto& e : events_) t.push_back(e.time);
    return t;
}

std::vector<double> DividendSchedule::amounts() const {
    std::vector<double> c;
    c.reserve(events_.size());
    for (const auto& e : events_) c.push_back(e.amount);
    return c;
}

double DividendSchedule::total_amount() const {
    return std::accumulate(events_.begin(), events_.end(), 0.0,
                           [](double acc, const Dividend& e) { return acc + e.amount; });
}

DividendSchedule schedule_within(const DividendSchedule& schedule, double horizon) {
    std::vector<Dividend> kept;
    for (const auto& e : schedule.events()) {
        if (e.time < horizon) kept.push_back(e);
    }
    return DividendSchedule(std::move(kept));
}

double pv_dividends(std::span<const Dividend> events, double rate) {
    double pv = 0.0;
    for (const auto& e : events) pv += e.amount * std::exp(-rate * e.time);
    return pv;
}

double pv_dividends(const DividendSchedule& schedule, double rate) {
    return pv_dividends(schedule.events(), rate);
}

void validate_event_times(std::span<const Dividend> events, double maturity) {
    for (std::size_t i = 0; i < events.size(); ++i) {
        const double t = events[i].time;
        if (!std::isfinite(t) || !(t > 0.0) || !(t < maturity)) {
            throw std::domain_error("dividend " + std::to_string(i) + " at t=" + std::to_string(t) +
                                    " is outside (0, maturity)");
        }
        if (i > 0 && !(t > events[i - 1].time)) {
            throw std::domain_error("dividend dates must be strictly increasing");
        }
        if (!std::isfinite(events[i].amount)) throw std::domain_error("dividend amount must be finite");
    }
}

void validate_inputs(const MarketParams& market, const OptionSpec& option, const DividendSchedule& schedule) {
    market.validate();
    option.validate();
    validate_event_times(schedule.events(), option.maturity);
}

BsInputs bs_inputs(const MarketParams& market, const OptionSpec& option) {
    return {market.spot, option.strike, option.maturity, market.rate, market.vol};
}

}  // namespace cashdiv
