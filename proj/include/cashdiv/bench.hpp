#pragma once

// Benchmark harness behind the command-line front end: method dispatch,
// accuracy tables against the PDE oracle, the Taylor-series sweep and the
// bump-based sensitivity check.

#include <filesystem>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cashdiv/market_model.hpp"
#include "cashdiv/monte_carlo.hpp"
#include "cashdiv/parallel.hpp"
#include "cashdiv/pde_solver.hpp"

namespace cashdiv {

enum class Method { gs, bv, bgs, mm, pde, mc, taylor2, taylor3 };

std::string_view to_string(Method m);
Method parse_method(std::string_view text);

/// Either an inline regular schedule or a CSV file.
struct ScheduleSource {
    std::optional<std::filesystem::path> csv;
    double start = 0.5;
    double every = 1.0;
    double amount = 0.0;

    /// Events strictly below `horizon`.
    DividendSchedule build(double horizon) const;
};

struct BenchConfig {
    MarketParams market;
    OptionKind kind = OptionKind::call;
    ScheduleSource schedule;
    std::vector<double> strike_ratios;
    std::vector<double> maturities;
    std::vector<Method> methods;
    GridConfig grid;
    McConfig mc;
    bool relative_errors = true;

    /// Throws std::invalid_argument on an unusable configuration.
    void validate() const;
};

/// JSON mirroring the BenchConfig field names. A relative CSV path is
/// resolved against `base_dir`.
BenchConfig parse_bench_config(std::string_view json_text, const std::filesystem::path& base_dir = {});
BenchConfig load_bench_config(const std::filesystem::path& path);

struct MethodPrice {
    double price = 0.0;
    double std_error = std::numeric_limits<double>::quiet_NaN();  // mc only
};

MethodPrice price_with(Method method, const MarketParams& market, const OptionSpec& option,
                       const DividendSchedule& schedule, const GridConfig& grid = {}, const McConfig& mc = {},
                       Execution exec = Execution::parallel);

struct ReportRow {
    double maturity = 0.0;
    double strike_ratio = 0.0;
    Method method = Method::pde;
    double price = std::numeric_limits<double>::quiet_NaN();
    double rel_err_pct = std::numeric_limits<double>::quiet_NaN();  // 100 (price - pde) / pde
    double runtime_ms = 0.0;
    std::string error;  // non-empty when the method failed on this cell
};

struct PricingReport {
    std::vector<ReportRow> rows;  // sorted by (maturity, strike ratio, method)
};

/// Cells are priced concurrently under Execution::parallel; row order is
/// fixed regardless.
PricingReport run_table(const BenchConfig& config, Execution exec = Execution::parallel);

/// CSV columns: maturity,strike_ratio,method,price,rel_err_pct,runtime_ms.
/// runtime_ms is written as 0 unless `with_timing`, so reports are
/// byte-reproducible by default.
void write_csv(const PricingReport& report, std::ostream& out, bool with_timing = false);

/// One table per maturity: prices block, then relative errors block.
void write_markdown(const PricingReport& report, std::ostream& out);

struct FigureConfig {
    MarketParams market{100.0, 0.03, 0.30};
    OptionSpec option{100.0, 10.0, OptionKind::call};
    double div_start = 0.5;
    double div_every = 1.0;
    std::vector<double> amounts;  // empty = 0, 0.25, ..., 6
    std::vector<Method> methods{Method::taylor2, Method::taylor3, Method::gs};
    GridConfig grid;
};

struct FigurePoint {
    double amount = 0.0;
    Method method = Method::gs;
    double price = 0.0;
    double rel_err_pct = 0.0;
};

std::vector<double> default_figure_amounts();
std::vector<FigurePoint> figure_sweep(const FigureConfig& config, Execution exec = Execution::parallel);

/// CSV columns: dividend_amount,method,rel_err_pct.
void write_figure_csv(const std::vector<FigurePoint>& points, std::ostream& out);

/// Central finite-difference estimate of d^k V / dC_{i1}..dC_{ik} at zero
/// dividends from PDE prices with amounts bumped by +-h, h = bump_fraction * S0.
/// Repeated dates use the matching higher-order central stencil. Much smaller
/// bumps resolve the interpolant's curvature inside a cell rather than the
/// price's.
double pde_bump_sensitivity(const MarketParams& market, const OptionSpec& option, std::vector<double> div_times,
                            const GridConfig& grid = {}, double bump_fraction = 2e-3);

}  // namespace cashdiv
