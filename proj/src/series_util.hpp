#pragma once

#include <cmath>

namespace hspline::detail {

/// sin(θ0 + jΔ) for j = 0, 1, 2, ... by the three-term recurrence, re-seeded
/// from std::sin every kReseed steps to bound drift.
class SineSequence {
public:
    SineSequence(double theta0, double delta)
        : theta0_(theta0), delta_(delta), two_cos_(2.0 * std::cos(delta))
    {
        seed(0);
    }

    /// Current value, then advance.
    double next()
    {
        const double out = cur_;
        ++j_;
        if (j_ % kReseed == 0) {
            seed(j_);
        } else {
            const double nxt = two_cos_ * cur_ - prev_;
            prev_ = cur_;
            cur_ = nxt;
        }
        return out;
    }

private:
    static constexpr long kReseed = 32;

    void seed(long j)
    {
        cur_ = std::sin(theta0_ + static_cast<double>(j) * delta_);
        prev_ = std::sin(theta0_ + static_cast<double>(j - 1) * delta_);
    }

    double theta0_;
    double delta_;
    double two_cos_;
    double cur_ = 0.0;
    double prev_ = 0.0;
    long j_ = 0;
};

/// sinh(a) / sinh(c) for 0 <= a <= c, c > 0, without overflow.
inline double sinh_ratio(double a, double c)
{
    if (c < 1e-8) {
        return a / c;
    }
    return std::exp(a - c) * (-std::expm1(-2.0 * a)) / (-std::expm1(-2.0 * c));
}

} // namespace hspline::detail
