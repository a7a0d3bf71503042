#include "cashdiv/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "cashdiv/baseline_proxies.hpp"
#include "cashdiv/div_sensitivities.hpp"
#include "cashdiv/errors.hpp"
#include "cashdiv/gs_proxy.hpp"

namespace cashdiv {

namespace {

constexpr std::pair<Method, std::string_view> kMethodNames[] = {
    {Method::gs, "gs"},   {Method::bv, "bv"}, {Method::bgs, "bgs"},         {Method::mm, "mm"},
    {Method::pde, "pde"}, {Method::mc, "mc"}, {Method::taylor2, "taylor2"}, {Method::taylor3, "taylor3"},
};

std::string_view table_label(Method m) {
    switch (m) {
        case Method::pde: return "FD (exact price)";
        case Method::mm: return "Method of moments";
        case Method::bgs: return "Proxy BGS";
        case Method::bv: return "Proxy BV";
        case Method::gs: return "Proxy GS";
        case Method::mc: return "Monte Carlo";
        case Method::taylor2: return "Taylor order 2";
        case Method::taylor3: return "Taylor order 3";
    }
    return "?";
}

// Row order of the published tables: FD, baselines, then the proxy.
int display_rank(Method m) {
    constexpr Method order[] = {Method::pde, Method::mm,  Method::bgs,     Method::bv,
                                Method::gs,  Method::mc, Method::taylor2, Method::taylor3};
    return static_cast<int>(std::find(std::begin(order), std::end(order), m) - std::begin(order));
}

std::ostringstream classic_stream() {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    return os;
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

}  // namespace

std::string_view to_string(Method m) {
    for (const auto& [method, name] : kMethodNames) {
        if (method == m) return name;
    }
    return "?";
}

Method parse_method(std::string_view text) {
    for (const auto& [method, name] : kMethodNames) {
        if (name == text) return method;
    }
    throw std::invalid_argument("unknown method '" + std::string(text) +
                                "' (expected gs, bv, bgs, mm, pde, mc, taylor2 or taylor3)");
}

DividendSchedule ScheduleSource::build(double horizon) const {
    if (csv) return schedule_within(DividendSchedule::load_csv(*csv), horizon);
    if (amount < 0.0) throw std::domain_error("dividend amount must be non-negative");
    return DividendSchedule::regular(start, every, amount, horizon);
}

void BenchConfig::validate() const {
    market.validate();
    grid.validate();
    mc.validate();
    if (methods.empty()) throw std::invalid_argument("config: at least one method is required");
    if (strike_ratios.empty()) throw std::invalid_argument("config: strike_ratios must not be empty");
    if (maturities.empty()) throw std::invalid_argument("config: maturities must not be empty");
    for (double k : strike_ratios) {
        if (!(k > 0.0)) throw std::invalid_argument("config: strike ratios must be positive");
    }
    for (double t : maturities) {
        if (!(t > 0.0)) throw std::invalid_argument("config: maturities must be positive");
    }
    if (relative_errors && std::find(methods.begin(), methods.end(), Method::pde) == methods.end()) {
        throw std::invalid_argument("config: relative errors require the pde method");
    }
}

BenchConfig parse_bench_config(std::string_view json_text, const std::filesystem::path& base_dir) {
    using nlohmann::json;
    BenchConfig cfg;
    try {
        const json j = json::parse(json_text);
        const auto& m = j.at("market");
        cfg.market = {m.at("spot").get<double>(), m.at("rate").get<double>(), m.at("vol").get<double>()};
        if (j.contains("kind")) cfg.kind = parse_option_kind(j.at("kind").get<std::string>());
        if (j.contains("schedule")) {
            const auto& s = j.at("schedule");
            if (s.contains("csv")) {
                std::filesystem::path p = s.at("csv").get<std::string>();
                cfg.schedule.csv = p.is_relative() ? base_dir / p : p;
            } else {
                cfg.schedule.start = s.value("start", cfg.schedule.start);
                cfg.schedule.every = s.value("every", cfg.schedule.every);
                cfg.schedule.amount = s.value("amount", cfg.schedule.amount);
            }
        }
        cfg.strike_ratios = j.at("strike_ratios").get<std::vector<double>>();
        cfg.maturities = j.at("maturities").get<std::vector<double>>();
        for (const auto& name : j.at("methods")) cfg.methods.push_back(parse_method(name.get<std::string>()));
        if (j.contains("grid")) {
            const auto& g = j.at("grid");
            cfg.grid.space_nodes = g.value("space_nodes", cfg.grid.space_nodes);
            cfg.grid.steps_per_year = g.value("steps_per_year", cfg.grid.steps_per_year);
            cfg.grid.space_width = g.value("space_width", cfg.grid.space_width);
            cfg.grid.rannacher_steps = g.value("rannacher_steps", cfg.grid.rannacher_steps);
        }
        if (j.contains("mc")) {
            const auto& mc = j.at("mc");
            cfg.mc.n_paths = mc.value("n_paths", cfg.mc.n_paths);
            cfg.mc.seed = mc.value("seed", cfg.mc.seed);
            cfg.mc.antithetic = mc.value("antithetic", cfg.mc.antithetic);
        }
        cfg.relative_errors = j.value("relative_errors", cfg.relative_errors);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

BenchConfig load_bench_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_bench_config(buf.str(), path.parent_path());
}

MethodPrice price_with(Method method, const MarketParams& market, const OptionSpec& option,
                       const DividendSchedule& schedule, const GridConfig& grid, const McConfig& mc,
                       Execution exec) {
    switch (method) {
        case Method::gs: return {proxy_price(market, option, schedule, exec)};
        case Method::bv: return {bv_price(market, option, schedule)};
        case Method::bgs: return {bgs_price(market, option, schedule, exec)};
        case Method::mm: return {moment_match_price(market, option, schedule)};
        case Method::pde: return {pde_price(market, option, schedule, grid)};
        case Method::mc: {
            const auto r = mc_price(market, option, schedule, mc, exec);
            return {r.price, r.std_error};
        }
        case Method::taylor2: return {taylor_price(2, market, option, schedule)};
        case Method::taylor3: return {taylor_price(3, market, option, schedule)};
    }
    throw std::invalid_argument("unknown method");
}

PricingReport run_table(const BenchConfig& config, Execution exec) {
    config.validate();
    struct Cell {
        double maturity;
        double ratio;
    };
    std::vector<Cell> cells;
    for (double t : config.maturities) {
        for (double k : config.strike_ratios) cells.push_back({t, k});
    }
    std::vector<Method> methods = config.methods;
    std::sort(methods.begin(), methods.end());
    methods.erase(std::unique(methods.begin(), methods.end()), methods.end());

    std::vector<std::vector<ReportRow>> per_cell(cells.size());
    auto price_cell = [&](std::size_t c) {
        const auto [maturity, ratio] = cells[c];
        const OptionSpec option{ratio * config.market.spot, maturity, config.kind};
        std::vector<ReportRow>& rows = per_cell[c];
        DividendSchedule schedule;
        std::string schedule_error;
        try {
            schedule = config.schedule.build(maturity);
        } catch (const std::exception& e) {
            schedule_error = e.what();
        }
        for (Method m : methods) {
            ReportRow row;
            row.maturity = maturity;
            row.strike_ratio = ratio;
            row.method = m;
            const auto start = std::chrono::steady_clock::now();
            if (!schedule_error.empty()) {
                row.error = schedule_error;
            } else {
                try {
                    row.price = price_with(m, config.market, option, schedule, config.grid, config.mc,
                                           Execution::serial).price;
                } catch (const std::exception& e) {
                    row.error = e.what();
                }
            }
            row.runtime_ms = elapsed_ms(start);
            rows.push_back(std::move(row));
        }
        if (config.relative_errors) {
            const auto pde = std::find_if(rows.begin(), rows.end(), [](const auto& r) { return r.method == Method::pde; });
            for (auto& r : rows) {
                if (r.method == Method::pde) {
                    r.rel_err_pct = r.error.empty() ? 0.0 : r.rel_err_pct;
                } else if (pde != rows.end() && pde->error.empty() && r.error.empty()) {
                    r.rel_err_pct = 100.0 * (r.price - pde->price) / pde->price;
                }
            }
        }
    };

    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(cells.size()); ++c) {
            price_cell(static_cast<std::size_t>(c));
        }
    } else {
        for (std::size_t c = 0; c < cells.size(); ++c) price_cell(c);
    }

    PricingReport report;
    for (auto& rows : per_cell) {
        for (auto& r : rows) report.rows.push_back(std::move(r));
    }
    std::stable_sort(report.rows.begin(), report.rows.end(), [](const ReportRow& a, const ReportRow& b) {
        if (a.maturity != b.maturity) return a.maturity < b.maturity;
        if (a.strike_ratio != b.strike_ratio) return a.strike_ratio < b.strike_ratio;
        return a.method < b.method;
    });
    return report;
}

void write_csv(const PricingReport& report, std::ostream& out, bool with_timing) {
    auto os = classic_stream();
    os << "maturity,strike_ratio,method,price,rel_err_pct,runtime_ms\n";
    for (const auto& r : report.rows) {
        os << std::defaultfloat << std::setprecision(10) << r.maturity << ',' << r.strike_ratio << ','
           << to_string(r.method) << ',';
        os << std::fixed;
        if (std::isfinite(r.price)) os << std::setprecision(6) << r.price;
        os << ',';
        if (std::isfinite(r.rel_err_pct)) os << std::setprecision(4) << r.rel_err_pct;
        os << ',' << std::setprecision(3) << (with_timing ? r.runtime_ms : 0.0) << '\n';
    }
    out << os.str();
}

void write_markdown(const PricingReport& report, std::ostream& out) {
    std::map<double, std::vector<const ReportRow*>> by_maturity;
    for (const auto& r : report.rows) by_maturity[r.maturity].push_back(&r);

    auto os = classic_stream();
    for (const auto& [maturity, rows] : by_maturity) {
        std::vector<double> ratios;
        std::vector<Method> methods;
        for (const auto* r : rows) {
            if (std::find(ratios.begin(), ratios.end(), r->strike_ratio) == ratios.end()) ratios.push_back(r->strike_ratio);
            if (std::find(methods.begin(), methods.end(), r->method) == methods.end()) methods.push_back(r->method);
        }
        std::sort(methods.begin(), methods.end(),
                  [](Method a, Method b) { return display_rank(a) < display_rank(b); });
        auto find = [&](Method m, double k) -> const ReportRow* {
            for (const auto* r : rows) {
                if (r->method == m && r->strike_ratio == k) return r;
            }
            return nullptr;
        };

        os << "### Maturity=" << std::defaultfloat << std::setprecision(10) << maturity << " years\n\n| K/S0 |";
        for (double k : ratios) os << ' ' << k << " |";
        os << "\n|---|";
        for (std::size_t i = 0; i < ratios.size(); ++i) os << "---|";
        std::string blank;
        for (std::size_t i = 0; i < ratios.size(); ++i) blank += "  |";
        os << "\n| **Price:** |" << blank << '\n';
        for (Method m : methods) {
            os << "| " << table_label(m) << " |";
            for (double k : ratios) {
                const auto* r = find(m, k);
                if (r && std::isfinite(r->price)) {
                    os << ' ' << std::fixed << std::setprecision(2) << r->price << " |";
                } else {
                    os << " n/a |";
                }
            }
            os << '\n';
        }
        bool any_err = false;
        for (const auto* r : rows) any_err = any_err || (r->method != Method::pde && std::isfinite(r->rel_err_pct));
        if (any_err) {
            os << "| **Relative error (in%):** |" << blank << '\n';
            for (Method m : methods) {
                if (m == Method::pde) continue;
                os << "| " << table_label(m) << " |";
                for (double k : ratios) {
                    const auto* r = find(m, k);
                    if (r && std::isfinite(r->rel_err_pct)) {
                        // Print 0.00 rather than -0.00.
                        const double e = std::abs(r->rel_err_pct) < 0.005 ? 0.0 : r->rel_err_pct;
                        os << ' ' << std::fixed << std::setprecision(2) << e << " |";
                    } else {
                        os << " n/a |";
                    }
                }
                os << '\n';
            }
        }
        for (const auto* r : rows) {
            if (!r->error.empty()) {
                os << "\n> " << table_label(r->method) << " at K/S0=" << std::defaultfloat << std::setprecision(10)
                   << r->strike_ratio
                   << " failed: " << r->error;
            }
        }
        os << "\n\n";
    }
    out << os.str();
}

std::vector<double> default_figure_amounts() {
    std::vector<double> amounts;
    for (int i = 0; i <= 24; ++i) amounts.push_back(0.25 * i);
    return amounts;
}

std::vector<FigurePoint> figure_sweep(const FigureConfig& config, Execution exec) {
    const auto amounts = config.amounts.empty() ? default_figure_amounts() : config.amounts;
    std::vector<std::vector<FigurePoint>> per_amount(amounts.size());
    auto sweep_one = [&](std::size_t i) {
        const auto schedule = DividendSchedule::regular(config.div_start, config.div_every, amounts[i],
                                                        config.option.maturity);
        const double pde = pde_price(config.market, config.option, schedule, config.grid);
        for (Method m : config.methods) {
            const double p = price_with(m, config.market, config.option, schedule, config.grid, {},
                                        Execution::serial).price;
            per_amount[i].push_back({amounts[i], m, p, 100.0 * (p - pde) / pde});
        }
    };
    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(amounts.size()); ++i) {
            sweep_one(static_cast<std::size_t>(i));
        }
    } else {
        for (std::size_t i = 0; i < amounts.size(); ++i) sweep_one(i);
    }
    std::vector<FigurePoint> out;
    for (auto& v : per_amount) out.insert(out.end(), v.begin(), v.end());
    return out;
}

void write_figure_csv(const std::vector<FigurePoint>& points, std::ostream& out) {
    auto os = classic_stream();
    os << "dividend_amount,method,rel_err_pct\n";
    for (const auto& p : points) {
        os << std::defaultfloat << std::setprecision(10) << p.amount << ',' << to_string(p.method) << ','
           << std::fixed << std::setprecision(6) << p.rel_err_pct << '\n';
    }
    out << os.str();
}

double pde_bump_sensitivity(const MarketParams& market, const OptionSpec& option, std::vector<double> div_times,
                            const GridConfig& grid, double bump_fraction) {
    if (div_times.empty()) throw std::invalid_argument("pde_bump_sensitivity: at least one date required");
    if (div_times.size() > static_cast<std::size_t>(kMaxSensitivityOrder)) {
        throw capability_error("pde_bump_sensitivity: at most 3 dates");
    }
    if (!(bump_fraction > 0.0)) throw std::invalid_argument("pde_bump_sensitivity: bump must be positive");
    market.validate();
    const double bump = bump_fraction * market.spot;
    std::sort(div_times.begin(), div_times.end());

    // Distinct dates with multiplicities; central stencils of order 1..3.
    struct Axis {
        double time;
        int order;
    };
    std::vector<Axis> axes;
    for (double t : div_times) {
        if (!axes.empty() && axes.back().time == t) {
            ++axes.back().order;
        } else {
            axes.push_back({t, 1});
        }
    }
    using Stencil = std::vector<std::pair<int, double>>;  // (offset in bumps, weight)
    auto stencil = [bump](int order) -> Stencil {
        switch (order) {
            case 1: return {{-1, -0.5 / bump}, {1, 0.5 / bump}};
            case 2: return {{-1, 1.0 / (bump * bump)}, {0, -2.0 / (bump * bump)}, {1, 1.0 / (bump * bump)}};
            default: {
                const double h3 = 2.0 * bump * bump * bump;
                return {{-2, -1.0 / h3}, {-1, 2.0 / h3}, {1, -2.0 / h3}, {2, 1.0 / h3}};
            }
        }
    };
    std::vector<Stencil> stencils;
    for (const auto& a : axes) stencils.push_back(stencil(a.order));

    double total = 0.0;
    std::vector<std::size_t> idx(axes.size(), 0);
    std::vector<Dividend> events(axes.size());
    while (true) {
        double weight = 1.0;
        for (std::size_t d = 0; d < axes.size(); ++d) {
            const auto [offset, w] = stencils[d][idx[d]];
            events[d] = {axes[d].time, offset * bump};
            weight *= w;
        }
        total += weight * pde_solve(market, option, events, grid).price;
        std::size_t d = 0;
        while (d < axes.size() && ++idx[d] == stencils[d].size()) idx[d++] = 0;
        if (d == axes.size()) break;
    }
    return total;
}

}  // namespace cashdiv
