#pragma once

#include <stdexcept>
#include <string>

namespace cashdiv {

/// Requested feature lies outside what the library implements (derivative
/// order, sensitivity order).
class capability_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Base class for failures of a numerical method on otherwise valid inputs.
/// The CLI maps these to exit code 2.
class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// N(d1) - N(d2) (or the closed-form gamma) underflowed.
class degeneracy_error : public numerical_error {
public:
    using numerical_error::numerical_error;
};

/// Adjusted spot or strike became non-positive: dividends too large.
class adjustment_overflow : public numerical_error {
public:
    using numerical_error::numerical_error;
};

/// Moment inputs outside the shifted-lognormal family.
class fit_error : public numerical_error {
public:
    using numerical_error::numerical_error;
};

/// Adjusted variance of the volatility-adjustment baseline went negative.
class formula_breakdown : public numerical_error {
public:
    using numerical_error::numerical_error;
};

}  // namespace cashdiv
