#pragma once

#include <span>
#include <vector>

namespace cashdiv {

/// Cubic Hermite interpolant on a uniform grid. Node slopes come from
/// fourth-order central differences and are then limited with Hyman's
/// filter, so the interpolant is monotone wherever the data is and keeps
/// O(h^4) accuracy on smooth data.
class MonotoneCubic {
public:
    MonotoneCubic(double x0, double dx, std::span<const double> values);

    /// `x` must lie in [x0, x0 + (n-1) dx]; clamped at the ends.
    double operator()(double x) const;

    double front_x() const { return x0_; }
    double back_x() const { return x0_ + dx_ * static_cast<double>(y_.size() - 1); }

private:
    double x0_;
    double dx_;
    std::vector<double> y_;
    std::vector<double> slope_;
};

/// Natural cubic spline on a uniform grid. Used as an independent route to
/// cross-check the monotone interpolant.
class NaturalSpline {
public:
    NaturalSpline(double x0, double dx, std::span<const double> values);
    double operator()(double x) const;

private:
    double x0_;
    double dx_;
    std::vector<double> y_;
    std::vector<double> m_;  // second derivatives at nodes
};

/// Solves a tridiagonal system in place (Thomas algorithm). `lower[0]` and
/// `upper[n-1]` are ignored. `rhs` receives the solution.
void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag, std::span<const double> upper,
                       std::span<double> rhs);

}  // namespace cashdiv
