#include "cashdiv/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace cashdiv {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr std::size_t kBlockSamples = 4096;

constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

struct Segment {
    double drift;     // (r - sigma^2/2) dt
    double diffusion; // sigma sqrt(dt)
    double cash;      // paid at the end of the segment (0 for the last one)
};

std::vector<Segment> build_segments(const MarketParams& m, std::span<const Dividend> events, double horizon) {
    std::vector<Segment> segs;
    double t0 = 0.0;
    const double mu = m.rate - 0.5 * m.vol * m.vol;
    for (const auto& e : events) {
        if (!(e.time < horizon)) break;
        const double dt = e.time - t0;
        segs.push_back({mu * dt, m.vol * std::sqrt(dt), e.amount});
        t0 = e.time;
    }
    const double dt = horizon - t0;
    segs.push_back({mu * dt, m.vol * std::sqrt(dt), 0.0});
    return segs;
}

double terminal(double spot, const std::vector<Segment>& segs, const double* z, double sign, bool absorb) {
    double s = spot;
    const std::size_t last = segs.size() - 1;
    for (std::size_t k = 0; k < segs.size(); ++k) {
        s *= std::exp(segs[k].drift + sign * segs[k].diffusion * z[k]);
        if (k != last) s = absorb ? apply_dividend(s, segs[k].cash) : s - segs[k].cash;
    }
    return s;
}

struct BlockSum {
    double sum = 0.0;
    double sum_sq = 0.0;
};

}  // namespace

void McConfig::validate() const {
    if (n_paths < 10'000) throw std::domain_error("n_paths must be at least 10000");
    if (antithetic && n_paths % 2 != 0) throw std::domain_error("n_paths must be even with antithetic sampling");
}

PathRng::PathRng(std::uint64_t seed, std::uint64_t path) : state_(mix64(seed ^ mix64(path + kGolden))) {}

std::uint64_t PathRng::next_u64() {
    state_ += kGolden;
    return mix64(state_);
}

double PathRng::uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double PathRng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

McEstimate mc_expectation(const MarketParams& market, std::span<const Dividend> events, double horizon,
                          const McConfig& mc, const std::function<double(double)>& f, bool absorb,
                          Execution exec) {
    market.validate();
    mc.validate();
    if (!(horizon > 0.0)) throw std::domain_error("horizon must be positive");

    const auto segs = build_segments(market, events, horizon);
    const std::size_t samples = mc.antithetic ? mc.n_paths / 2 : mc.n_paths;
    const std::size_t n_blocks = (samples + kBlockSamples - 1) / kBlockSamples;
    std::vector<BlockSum> blocks(n_blocks);

    auto run_block = [&](std::size_t b) {
        std::vector<double> z(segs.size());
        BlockSum acc;
        const std::size_t begin = b * kBlockSamples;
        const std::size_t end = std::min(samples, begin + kBlockSamples);
        for (std::size_t p = begin; p < end; ++p) {
            PathRng rng(mc.seed, p);
            for (auto& zk : z) zk = rng.normal();
            double x = f(terminal(market.spot, segs, z.data(), 1.0, absorb));
            if (mc.antithetic) x = 0.5 * (x + f(terminal(market.spot, segs, z.data(), -1.0, absorb)));
            acc.sum += x;
            acc.sum_sq += x * x;
        }
        blocks[b] = acc;
    };

    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(n_blocks); ++b) run_block(static_cast<std::size_t>(b));
    } else {
        for (std::size_t b = 0; b < n_blocks; ++b) run_block(b);
    }

    BlockSum total;
    for (const auto& blk : blocks) {
        total.sum += blk.sum;
        total.sum_sq += blk.sum_sq;
    }
    const double n = static_cast<double>(samples);
    const double mean = total.sum / n;
    const double var = samples > 1 ? std::max(0.0, (total.sum_sq - n * mean * mean) / (n - 1.0)) : 0.0;
    return {mean, std::sqrt(var / n), samples};
}

McPrice mc_price(const MarketParams& market, const OptionSpec& option, const DividendSchedule& schedule,
                 const McConfig& mc, Execution exec) {
    validate_inputs(market, option, schedule);
    const double k = option.strike;
    std::function<double(double)> payoff;
    if (option.kind == OptionKind::call) {
        payoff = [k](double s) { return s > k ? s - k : 0.0; };
    } else {
        payoff = [k](double s) { return s < k ? k - s : 0.0; };
    }
    const auto est = mc_expectation(market, schedule.events(), option.maturity, mc, payoff, true, exec);
    const double df = std::exp(-market.rate * option.maturity);
    return {df * est.mean, df * est.std_error};
}

}  // namespace cashdiv
