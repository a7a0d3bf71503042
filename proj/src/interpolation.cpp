#include "cashdiv/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cashdiv {

namespace {

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

// Locates the cell containing x, clamped to the grid.
std::pair<std::size_t, double> locate(double x, double x0, double dx, std::size_t n) {
    const double pos = (x - x0) / dx;
    if (pos <= 0.0) return {0, 0.0};
    const double last = static_cast<double>(n - 1);
    if (pos >= last) return {n - 2, 1.0};
    const auto i = static_cast<std::size_t>(pos);
    return {i, pos - static_cast<double>(i)};
}

}  // namespace

MonotoneCubic::MonotoneCubic(double x0, double dx, std::span<const double> values)
    : x0_(x0), dx_(dx), y_(values.begin(), values.end()), slope_(values.size()) {
    const std::size_t n = y_.size();
    if (n < 5) throw std::invalid_argument("MonotoneCubic needs at least 5 nodes");
    if (!(dx > 0.0)) throw std::invalid_argument("MonotoneCubic needs dx > 0");

    std::vector<double> secant(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) secant[i] = (y_[i + 1] - y_[i]) / dx;

    slope_[0] = (-3.0 * y_[0] + 4.0 * y_[1] - y_[2]) / (2.0 * dx);
    slope_[1] = (y_[2] - y_[0]) / (2.0 * dx);
    for (std::size_t i = 2; i + 2 < n; ++i) {
        slope_[i] = (y_[i - 2] - 8.0 * y_[i - 1] + 8.0 * y_[i + 1] - y_[i + 2]) / (12.0 * dx);
    }
    slope_[n - 2] = (y_[n - 1] - y_[n - 3]) / (2.0 * dx);
    slope_[n - 1] = (3.0 * y_[n - 1] - 4.0 * y_[n - 2] + y_[n - 3]) / (2.0 * dx);

    // Hyman filter.
    for (std::size_t i = 0; i < n; ++i) {
        const double left = i > 0 ? secant[i - 1] : secant[0];
        const double right = i + 1 < n ? secant[i] : secant[n - 2];
        if (sign_of(left) != sign_of(right) || left == 0.0) {
            if (i > 0 && i + 1 < n) slope_[i] = 0.0;
            continue;
        }
        const double bound = 3.0 * std::min(std::abs(left), std::abs(right));
        if (sign_of(slope_[i]) != sign_of(left)) {
            slope_[i] = 0.0;
        } else if (std::abs(slope_[i]) > bound) {
            slope_[i] = sign_of(left) * bound;
        }
    }
}

double MonotoneCubic::operator()(double x) const {
    const auto [i, t] = locate(x, x0_, dx_, y_.size());
    if (t == 0.0) return y_[i];
    if (t == 1.0) return y_[i + 1];
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + t;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    return h00 * y_[i] + h10 * dx_ * slope_[i] + h01 * y_[i + 1] + h11 * dx_ * slope_[i + 1];
}

NaturalSpline::NaturalSpline(double x0, double dx, std::span<const double> values)
    : x0_(x0), dx_(dx), y_(values.begin(), values.end()), m_(values.size(), 0.0) {
    const std::size_t n = y_.size();
    if (n < 3) throw std::invalid_argument("NaturalSpline needs at least 3 nodes");
    // Interior: m_{i-1} + 4 m_i + m_{i+1} = 6 (y_{i-1} - 2 y_i + y_{i+1}) / dx^2
    const std::size_t k = n - 2;
    std::vector<double> lower(k, 1.0), diag(k, 4.0), upper(k, 1.0), rhs(k);
    for (std::size_t i = 0; i < k; ++i) rhs[i] = 6.0 * (y_[i] - 2.0 * y_[i + 1] + y_[i + 2]) / (dx * dx);
    solve_tridiagonal(lower, diag, upper, rhs);
    std::copy(rhs.begin(), rhs.end(), m_.begin() + 1);
}

double NaturalSpline::operator()(double x) const {
    const auto [i, t] = locate(x, x0_, dx_, y_.size());
    if (t == 0.0) return y_[i];
    if (t == 1.0) return y_[i + 1];
    const double a = 1.0 - t;
    const double h2 = dx_ * dx_;
    return a * y_[i] + t * y_[i + 1] + ((a * a * a - a) * m_[i] + (t * t * t - t) * m_[i + 1]) * h2 / 6.0;
}

void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag, std::span<const double> upper,
                       std::span<double> rhs) {
    const std::size_t n = diag.size();
    std::vector<double> c(n);
    double denom = diag[0];
    c[0] = upper[0] / denom;
    rhs[0] /= denom;
    for (std::size_t i = 1; i < n; ++i) {
        denom = diag[i] - lower[i] * c[i - 1];
        c[i] = i + 1 < n ? upper[i] / denom : 0.0;
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / denom;
    }
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c[i] * rhs[i + 1];
}

}  // namespace cashdiv
