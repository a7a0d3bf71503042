// cashdiv: price European options with discrete cash dividends.
//
//   cashdiv price  --method gs --spot 100 --strike 100 --maturity 5 --div-amount 3
//   cashdiv table  --config configs/low_frequency.json --markdown
//   cashdiv figure --csv figure1.csv
//   cashdiv sens   --maturity 10 --times 5 --check

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cashdiv/bench.hpp"
#include "cashdiv/div_sensitivities.hpp"
#include "cashdiv/errors.hpp"

using namespace cashdiv;

namespace {

struct MarketFlags {
    double spot = 100.0;
    double rate = 0.03;
    double vol = 0.30;
    double strike = 100.0;
    double maturity = 5.0;
    std::string kind = "call";
};

struct ScheduleFlags {
    double start = 0.5;
    double every = 1.0;
    double amount = 0.0;
    std::string csv;
};

void add_market(CLI::App* cmd, MarketFlags& m) {
    cmd->add_option("--spot", m.spot, "Spot price")->capture_default_str();
    cmd->add_option("--rate", m.rate, "Continuously compounded rate")->capture_default_str();
    cmd->add_option("--vol", m.vol, "Volatility")->capture_default_str();
    cmd->add_option("--strike", m.strike, "Strike")->capture_default_str();
    cmd->add_option("--maturity", m.maturity, "Maturity in years")->capture_default_str();
    cmd->add_option("--kind", m.kind, "call or put")->capture_default_str();
}

void add_schedule(CLI::App* cmd, ScheduleFlags& s) {
    cmd->add_option("--div-start", s.start, "First ex-date (years)")->capture_default_str();
    cmd->add_option("--div-every", s.every, "Spacing between ex-dates (years)")->capture_default_str();
    cmd->add_option("--div-amount", s.amount, "Cash amount per dividend")->capture_default_str();
    cmd->add_option("--div-csv", s.csv, "Schedule file with header time_years,amount");
}

void add_grid(CLI::App* cmd, GridConfig& g) {
    cmd->add_option("--space-nodes", g.space_nodes, "PDE space nodes")->capture_default_str();
    cmd->add_option("--steps-per-year", g.steps_per_year, "PDE time steps per year")->capture_default_str();
    cmd->add_option("--space-width", g.space_width, "PDE half-width in sigma sqrt(T)")->capture_default_str();
    cmd->add_option("--rannacher", g.rannacher_steps, "Implicit restart half-steps")->capture_default_str();
}

void add_mc(CLI::App* cmd, McConfig& mc) {
    cmd->add_option("--paths", mc.n_paths, "Monte Carlo paths")->capture_default_str();
    cmd->add_option("--seed", mc.seed, "Monte Carlo seed")->capture_default_str();
    cmd->add_flag("!--no-antithetic", mc.antithetic, "Disable antithetic pairing");
}

MarketParams market_of(const MarketFlags& m) { return {m.spot, m.rate, m.vol}; }
OptionSpec option_of(const MarketFlags& m) { return {m.strike, m.maturity, parse_option_kind(m.kind)}; }

DividendSchedule schedule_of(const ScheduleFlags& s, double maturity) {
    ScheduleSource src;
    if (!s.csv.empty()) src.csv = s.csv;
    src.start = s.start;
    src.every = s.every;
    src.amount = s.amount;
    return src.build(maturity);
}

int run_price(const MarketFlags& mf, const ScheduleFlags& sf, const std::string& method_name, const GridConfig& grid,
              const McConfig& mc) {
    const Method method = parse_method(method_name);
    const auto market = market_of(mf);
    const auto option = option_of(mf);
    const auto schedule = schedule_of(sf, option.maturity);
    const auto p = price_with(method, market, option, schedule, grid, mc);
    std::cout << std::setprecision(10) << "method=" << to_string(method) << " spot=" << market.spot
              << " rate=" << market.rate << " vol=" << market.vol << " strike=" << option.strike
              << " maturity=" << option.maturity << " kind=" << to_string(option.kind)
              << " dividends=" << schedule.size() << '\n';
    std::cout << std::fixed << std::setprecision(6) << "price=" << p.price;
    if (std::isfinite(p.std_error)) std::cout << " stderr=" << p.std_error;
    std::cout << '\n';
    return 0;
}

void emit(const std::string& path, const std::function<void(std::ostream&)>& write) {
    if (path.empty() || path == "-") {
        write(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write '" + path + "'");
    write(out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"European options on stocks paying discrete cash dividends"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "OpenMP threads (0 = runtime default)");

    MarketFlags mf;
    ScheduleFlags sf;
    GridConfig grid;
    McConfig mc;

    auto* price = app.add_subcommand("price", "Price one option");
    std::string method = "gs";
    price->add_option("--method", method, "gs, bv, bgs, mm, pde, mc, taylor2 or taylor3")->capture_default_str();
    add_market(price, mf);
    add_schedule(price, sf);
    add_grid(price, grid);
    add_mc(price, mc);

    auto* table = app.add_subcommand("table", "Accuracy table against the PDE oracle");
    std::string config_path;
    std::string csv_path;
    std::string markdown_path;
    bool markdown = false;
    bool timing = false;
    table->add_option("--config", config_path, "JSON configuration")->required();
    table->add_option("--csv", csv_path, "CSV output path ('-' for stdout)");
    auto* md_opt = table->add_option("--markdown-out", markdown_path, "Markdown output path");
    table->add_flag("--markdown", markdown, "Print markdown tables to stdout")->excludes(md_opt);
    table->add_flag("--timing", timing, "Write measured runtimes into the CSV");

    auto* figure = app.add_subcommand("figure", "Relative error sweep over the dividend amount");
    FigureConfig fig;
    std::string fig_csv;
    std::vector<std::string> fig_methods;
    figure->add_option("--spot", fig.market.spot)->capture_default_str();
    figure->add_option("--rate", fig.market.rate)->capture_default_str();
    figure->add_option("--vol", fig.market.vol)->capture_default_str();
    figure->add_option("--strike", fig.option.strike)->capture_default_str();
    figure->add_option("--maturity", fig.option.maturity)->capture_default_str();
    figure->add_option("--div-start", fig.div_start)->capture_default_str();
    figure->add_option("--div-every", fig.div_every)->capture_default_str();
    figure->add_option("--amounts", fig.amounts, "Dividend amounts (default 0 to 6 step 0.25)");
    figure->add_option("--methods", fig_methods, "Methods compared against pde");
    figure->add_option("--csv", fig_csv, "CSV output path ('-' for stdout)");
    add_grid(figure, fig.grid);

    auto* sens = app.add_subcommand("sens", "Exact dividend sensitivities at zero dividends");
    MarketFlags sens_mf;
    sens_mf.maturity = 10.0;
    std::vector<double> times;
    bool check = false;
    double bump = 2e-3;
    add_market(sens, sens_mf);
    sens->add_option("--times", times, "Ex-dates, repeats allowed (1 to 3)")->required();
    sens->add_flag("--check", check, "Compare with a PDE bump estimate");
    sens->add_option("--bump", bump, "Bump size for --check, as a fraction of spot")->capture_default_str();
    add_grid(sens, grid);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (threads > 0) set_threads(threads);
        if (*price) return run_price(mf, sf, method, grid, mc);
        if (*table) {
            const auto config = load_bench_config(config_path);
            const auto report = run_table(config);
            if (!csv_path.empty()) emit(csv_path, [&](std::ostream& o) { write_csv(report, o, timing); });
            if (!markdown_path.empty()) emit(markdown_path, [&](std::ostream& o) { write_markdown(report, o); });
            if (markdown || (csv_path.empty() && markdown_path.empty())) write_markdown(report, std::cout);
            return 0;
        }
        if (*figure) {
            if (!fig_methods.empty()) {
                fig.methods.clear();
                for (const auto& m : fig_methods) fig.methods.push_back(parse_method(m));
            }
            const auto points = figure_sweep(fig);
            emit(fig_csv, [&](std::ostream& o) { write_figure_csv(points, o); });
            return 0;
        }
        if (*sens) {
            const auto market = market_of(sens_mf);
            const auto option = option_of(sens_mf);
            const double exact = dividend_sensitivity(market, option, times);
            std::cout << std::setprecision(12) << "order=" << times.size() << " exact=" << exact << '\n';
            if (check) {
                const double est = pde_bump_sensitivity(market, option, times, grid, bump);
                std::cout << "bump=" << est << " abs_diff=" << std::abs(est - exact)
                          << " rel_diff=" << std::abs(est - exact) / std::abs(exact) << '\n';
            }
            return 0;
        }
    } catch (const numerical_error& e) {
        std::cerr << "cashdiv: numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "cashdiv: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
